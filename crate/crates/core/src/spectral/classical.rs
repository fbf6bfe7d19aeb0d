//! Independent routes to the first-side pages: the spectral sequence of the
//! column filtration on the total complex, and page 2 as homology of page 1.

use std::collections::BTreeMap;

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Extent, Graded};
use crate::linalg::{kernel, quotient, rank, Matrix, QuotientPresentation, Subspace};

use super::{PageTable, Side};

/// Total complex `C^n = ⊕_p A^{p,p+n}` over the columns of a window.
struct Total<'a> {
    a: &'a dyn Graded,
    pmin: i64,
    pmax: i64,
}

impl Total<'_> {
    fn layout(&self, n: i64) -> (Vec<usize>, usize) {
        let mut off = Vec::new();
        let mut acc = 0;
        for p in self.pmin..=self.pmax {
            off.push(acc);
            acc += self.a.rank(Bidegree::new(p, p + n));
        }
        (off, acc)
    }

    /// `D = Σ_i (-1)^{i n} d_i : C^n -> C^{n+1}`.
    fn differential(&self, n: i64) -> Matrix {
        let (src_off, src) = self.layout(n);
        let (tgt_off, tgt) = self.layout(n + 1);
        let mut m = Matrix::zeros(self.a.field(), tgt, src);
        for p in self.pmin..=self.pmax {
            let at = Bidegree::new(p, p + n);
            if self.a.rank(at) == 0 {
                continue;
            }
            for i in 0..self.a.arity() {
                let tp = p - i as i64;
                if tp < self.pmin {
                    break;
                }
                let d = self.a.diff(i, at);
                let d = if (i as i64 * n).rem_euclid(2) == 0 { d } else { d.neg() };
                m.add_block(tgt_off[(tp - self.pmin) as usize], src_off[(p - self.pmin) as usize], &d);
            }
        }
        m
    }

    /// `F_p C^n`: columns `p' <= p`.
    fn filtration(&self, p: i64, n: i64) -> Subspace {
        let (off, total) = self.layout(n);
        let field = self.a.field();
        let mut gens = Vec::new();
        for col in self.pmin..=p.min(self.pmax) {
            let k = (col - self.pmin) as usize;
            let end = if k + 1 < off.len() { off[k + 1] } else { total };
            for idx in off[k]..end {
                let mut e = vec![field.zero(); total];
                e[idx] = field.one();
                gens.push(e);
            }
        }
        Subspace::span(field, total, gens)
    }
}

/// The total differential of a finite multicomplex in total degree `n`, over
/// the columns of `window`.
pub fn total_differential(a: &dyn Graded, window: Window, n: i64) -> Matrix {
    Total { a, pmin: window.pmin, pmax: window.pmax }.differential(n)
}

/// Pages of the spectral sequence of the column filtration of the total
/// complex, keyed by `(p, p + n)`. Errors if `D² ≠ 0`.
pub fn classical_pages(a: &dyn Graded, r: usize) -> Result<PageTable> {
    let hull = match a.extent() {
        Extent::Empty => return Ok(PageTable { side: Side::First, r, entries: BTreeMap::new() }),
        Extent::Finite(w) => w,
        Extent::Unbounded => return Err(Error::Unsupported("total complex of an object with infinite support".into())),
    };
    let t = Total { a, pmin: hull.pmin, pmax: hull.pmax };
    let nmin = hull.qmin - hull.pmax - 1;
    let nmax = hull.qmax - hull.pmin + 1;
    for n in nmin - 1..=nmax {
        let dd = t.differential(n + 1).mul(&t.differential(n));
        if !dd.is_zero() {
            return Err(Error::SquareNonZero { degree: n });
        }
    }
    let r_ = r as i64;
    // Z_r^p(n) = F_p ∩ D^{-1} F_{p-r}; Z_{-1} = F.
    let z = |s: i64, p: i64, n: i64| -> Subspace {
        let f = t.filtration(p, n);
        if s < 0 {
            return f;
        }
        let d = t.differential(n);
        f.intersection(&t.filtration(p - s, n + 1).preimage(&d))
    };
    let mut entries = BTreeMap::new();
    for n in nmin..=nmax {
        for p in hull.pmin - r_ - 1..=hull.pmax + r_ + 1 {
            let cycles = z(r_, p, n);
            let lower = z(r_ - 1, p - 1, n);
            let hit = z(r_ - 1, p + r_ - 1, n - 1).map(&t.differential(n - 1));
            let pres: QuotientPresentation = quotient(&cycles, &lower.sum(&hit))?;
            entries.insert(Bidegree::new(p, p + n), pres);
        }
    }
    Ok(PageTable { side: Side::First, r, entries })
}

/// Dimensions of first-side page 2 at `points`, computed as the homology of
/// the map induced by `d_1` on `E_1 = H(d_0)`.
pub fn page_two_via_page_one(a: &dyn Graded, points: &[Bidegree]) -> Result<BTreeMap<Bidegree, usize>> {
    let field: Field = a.field();
    let e1 = |at: Bidegree| -> Result<QuotientPresentation> {
        let z = kernel(&a.diff(0, at));
        let from = Bidegree::new(at.p, at.q - 1);
        let b = Subspace::span(field, a.rank(at), a.diff(0, from).columns());
        quotient(&z, &b)
    };
    // E_1-level d_1 out of `at`, landing at `at + (-1, 0)`.
    let induced = |at: Bidegree| -> Result<Matrix> {
        let src = e1(at)?;
        let to = Bidegree::new(at.p - 1, at.q);
        let tgt = e1(to)?;
        let d1 = a.diff(1, at);
        let mut cols = Vec::new();
        for v in src.representatives() {
            cols.push(tgt.coordinates(&d1.mul_vec(v))?);
        }
        Ok(Matrix::from_columns(field, tgt.dim(), &cols))
    };
    let mut out = BTreeMap::new();
    for &at in points {
        let dim1 = e1(at)?.dim();
        let outgoing = rank(&induced(at)?);
        let incoming = rank(&induced(Bidegree::new(at.p + 1, at.q))?);
        out.insert(at, dim1 - outgoing - incoming);
    }
    Ok(out)
}
