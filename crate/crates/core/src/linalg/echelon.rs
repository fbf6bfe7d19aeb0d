//! Reduced row echelon form, with a fraction-free path over ℚ.

use crate::error::{Error, Result};
use crate::field::{mod_inv, Field, Rat, Scalar};

use super::matrix::{Matrix, Vector};
use super::subspace::Subspace;

/// Reduced row echelon form of a row space.
///
/// `rows[k]` has a leading one at column `pivots[k]` and zeros at every other
/// pivot column; pivots are strictly increasing. This form is unique for a
/// given row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
}

pub fn row_reduce(m: &Matrix) -> Echelon {
    row_reduce_vectors(m.field(), m.cols(), m.row_vectors())
}

pub fn row_reduce_vectors(field: Field, cols: usize, rows: Vec<Vector>) -> Echelon {
    match field {
        Field::Rational => reduce_rational(cols, rows),
        Field::Prime(p) => reduce_modular(p, cols, rows),
    }
}

fn as_rat(s: &Scalar) -> &Rat {
    match s {
        Scalar::Rational(r) => r,
        other => panic!("expected rational, found {other:?}"),
    }
}

fn int_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    match (a, b) {
        (Rat::Small(x, 1), Rat::Small(y, 1)) => {
            let g = (*x as i128).gcd(&(*y as i128));
            Rat::new(g as i64, 1).unwrap_or_else(|_| unreachable!())
        }
        _ => {
            let g = a.numer().gcd(&b.numer());
            g.to_string().parse().expect("integer gcd")
        }
    }
}

fn int_lcm(a: &Rat, b: &Rat) -> Rat {
    let g = int_gcd(a, b);
    a.mul(b).div(&g).expect("nonzero gcd")
}

/// Scales an integer row to have coprime entries.
fn make_primitive(row: &mut [Rat]) {
    let mut g = Rat::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = int_gcd(&g, x);
        if g == Rat::one() {
            return;
        }
    }
    if g.is_zero() || g == Rat::one() {
        return;
    }
    for x in row.iter_mut() {
        *x = x.div(&g).expect("nonzero gcd");
    }
}

fn reduce_rational(cols: usize, rows: Vec<Vector>) -> Echelon {
    // Clear denominators row by row so elimination stays in ℤ.
    let mut work: Vec<Vec<Rat>> = rows
        .into_iter()
        .map(|r| {
            let mut den = Rat::one();
            for x in &r {
                let x = as_rat(x);
                if !x.is_integer() {
                    den = int_lcm(&den, &Rat::Small(0, 1).add(&x.denom().to_string().parse().unwrap()));
                }
            }
            let mut ints: Vec<Rat> = r.iter().map(|x| as_rat(x).mul(&den)).collect();
            make_primitive(&mut ints);
            ints
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();

    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next >= work.len() {
            break;
        }
        let Some(found) = (next..work.len()).filter(|&i| !work[i][col].is_zero()).min_by(|&a, &b| {
            let ka = work[a].iter().filter(|x| !x.is_zero()).count();
            let kb = work[b].iter().filter(|x| !x.is_zero()).count();
            ka.cmp(&kb)
        }) else {
            continue;
        };
        work.swap(next, found);
        let pivot_row = work[next].clone();
        let piv = pivot_row[col].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let scaled = x.mul(&piv);
                *x = if y.is_zero() { scaled } else { scaled.sub(&factor.mul(y)) };
            }
            make_primitive(row);
        }
        pivots.push(col);
        next += 1;
    }
    work.truncate(next);
    let rows = work
        .into_iter()
        .zip(&pivots)
        .map(|(row, &c)| {
            let inv = row[c].inv().expect("nonzero pivot");
            row.iter().map(|x| Scalar::Rational(x.mul(&inv))).collect()
        })
        .collect();
    Echelon { cols, rows, pivots }
}

fn reduce_modular(p: u64, cols: usize, rows: Vec<Vector>) -> Echelon {
    let mut work: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    Scalar::Residue { value, modulus } if *modulus == p => *value,
                    other => panic!("expected residue mod {p}, found {other:?}"),
                })
                .collect::<Vec<u64>>()
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next >= work.len() {
            break;
        }
        let Some(found) = (next..work.len()).find(|&i| work[i][col] != 0) else {
            continue;
        };
        work.swap(next, found);
        let inv = mod_inv(work[next][col], p);
        for x in work[next].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = work[next].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i == next || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + (p - factor) * y % p) % p;
            }
        }
        pivots.push(col);
        next += 1;
    }
    work.truncate(next);
    let rows =
        work.into_iter().map(|r| r.into_iter().map(|value| Scalar::Residue { value, modulus: p }).collect()).collect();
    Echelon { cols, rows, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    row_reduce(m).pivots.len()
}

/// `{v : Mv = 0}` with canonical basis.
pub fn kernel(m: &Matrix) -> Subspace {
    let field = m.field();
    let n = m.cols();
    if m.rows() == 0 {
        return Subspace::full(field, n);
    }
    let ech = row_reduce(m);
    let mut is_pivot = vec![false; n];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    let vectors: Vec<Vector> = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); n];
            v[free] = field.one();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                v[pc] = row[free].neg();
            }
            v
        })
        .collect();
    Subspace::span(field, n, vectors)
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.field(), m.rows(), m.columns())
}

/// Some `x` with `Mx = b` iff `b` lies in the image of `M`.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension { expected: m.rows(), found: b.len() });
    }
    let field = m.field();
    let n = m.cols();
    let rows: Vec<Vector> = (0..m.rows())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let ech = row_reduce_vectors(field, n + 1, rows);
    if ech.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); n];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[n].clone();
    }
    Ok(Some(x))
}
