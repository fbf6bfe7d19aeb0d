//! Pages of the two spectral sequences of a multicomplex, computed as
//! `ZW_r / w_r(BW_r)` one bidegree at a time.

mod classical;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::graded::{Extent, Graded, GradedMap, Involuted, InvolutedMap};
use crate::linalg::{kernel, quotient, rank, Matrix, QuotientPresentation, Subspace, Vector};
use crate::parallel::par_map;
pub use crate::representables::Side;

pub use classical::{classical_pages, page_two_via_page_one, total_differential};

/// Bidegrees and ranks of the components `a_0 … a_{r-1}` of a witness tuple
/// based at `at`; page 0 uses the single component `A^{p,q}`.
pub fn stack_layout(a: &dyn Graded, r: usize, at: Bidegree) -> Vec<(Bidegree, usize)> {
    (0..r.max(1)).map(|j| (at.down(j), a.rank(at.down(j)))).collect()
}

fn stack_dim(layout: &[(Bidegree, usize)]) -> usize {
    layout.iter().map(|(_, r)| r).sum()
}

/// The linear system `Σ_{i+j=l} (-1)^i d_i a_j = 0`, `0 <= l <= r-1`.
pub fn witness_system(a: &dyn Graded, r: usize, at: Bidegree) -> Matrix {
    let n = a.arity();
    let field = a.field();
    let layout = stack_layout(a, r, at);
    let cols = stack_dim(&layout);
    let mut col_off = Vec::with_capacity(layout.len());
    let mut acc = 0;
    for (_, d) in &layout {
        col_off.push(acc);
        acc += d;
    }
    let eq_at = |l: usize| Bidegree::new(at.p - l as i64, at.q + 1 - l as i64);
    let rows: Vec<usize> = (0..r).map(|l| a.rank(eq_at(l))).collect();
    let mut m = Matrix::zeros(field, rows.iter().sum(), cols);
    let mut row_off = 0;
    for (l, &height) in rows.iter().enumerate() {
        if height > 0 {
            for j in 0..=l {
                let i = l - j;
                if i >= n || layout[j].1 == 0 {
                    continue;
                }
                let d = a.diff(i, layout[j].0);
                let d = if i % 2 == 0 { d } else { d.neg() };
                m.add_block(row_off, col_off[j], &d);
            }
        }
        row_off += height;
    }
    m
}

/// `ZW_r^{p,q}(A)` inside the stacked space of [`stack_layout`].
pub fn witness_cycles(a: &dyn Graded, r: usize, at: Bidegree) -> Subspace {
    let layout = stack_layout(a, r, at);
    let dim = stack_dim(&layout);
    if r == 0 {
        return Subspace::full(a.field(), dim);
    }
    kernel(&witness_system(a, r, at))
}

/// Layout of the ambient domain of `w_r` at `(p,q)`: the `b` stack based at
/// `(p+r-1, q+r-2)`, then `A^{p,q-1}`, then the `c` stack based at `(p-1,q-1)`.
pub fn boundary_layout(a: &dyn Graded, r: usize, at: Bidegree) -> Vec<(Bidegree, usize)> {
    let mid = Bidegree::new(at.p, at.q - 1);
    match r {
        0 => vec![],
        1 => vec![(mid, a.rank(mid))],
        _ => {
            let r_ = r as i64;
            let b_base = Bidegree::new(at.p + r_ - 1, at.q + r_ - 2);
            let c_base = Bidegree::new(at.p - 1, at.q - 1);
            let mut out = stack_layout(a, r - 1, b_base);
            out.push((mid, a.rank(mid)));
            out.extend(stack_layout(a, r - 1, c_base));
            out
        }
    }
}

/// Matrix of `w_r` from the ambient domain of [`boundary_layout`] to the
/// stacked target of [`stack_layout`]. Component `m` of the image is
/// `d_m a + (-1)^m Σ_{i=m+1}^{r+m-1} (-1)^i d_i b_{r+m-1-i} + [m ≥ 1] c_{m-1}`.
pub fn witness_boundary_map(a: &dyn Graded, r: usize, at: Bidegree) -> Matrix {
    let n = a.arity();
    let field = a.field();
    let target = stack_layout(a, r, at);
    let domain = boundary_layout(a, r, at);
    let offsets = |l: &[(Bidegree, usize)]| {
        let mut v = Vec::with_capacity(l.len());
        let mut acc = 0;
        for (_, d) in l {
            v.push(acc);
            acc += d;
        }
        (v, acc)
    };
    let (t_off, t_dim) = offsets(&target);
    let (d_off, d_dim) = offsets(&domain);
    let mut m = Matrix::zeros(field, t_dim, d_dim);
    if r == 0 || t_dim == 0 || d_dim == 0 {
        return m;
    }
    let (b_slot, a_slot, c_slot) = if r == 1 { (0, 0, 0) } else { (0, r - 1, r) };
    for comp in 0..r {
        if target[comp].1 == 0 {
            continue;
        }
        // d_m a
        if comp < n && domain[a_slot].1 > 0 {
            m.add_block(t_off[comp], d_off[a_slot], &a.diff(comp, domain[a_slot].0));
        }
        if r >= 2 {
            for i in comp + 1..=r + comp - 1 {
                if i >= n {
                    break;
                }
                let j = r + comp - 1 - i;
                let slot = b_slot + j;
                if domain[slot].1 == 0 {
                    continue;
                }
                let d = a.diff(i, domain[slot].0);
                let d = if (comp + i) % 2 == 0 { d } else { d.neg() };
                m.add_block(t_off[comp], d_off[slot], &d);
            }
            if comp >= 1 {
                let slot = c_slot + comp - 1;
                let dim = domain[slot].1;
                if dim > 0 {
                    m.add_block(t_off[comp], d_off[slot], &Matrix::identity(field, dim));
                }
            }
        }
    }
    m
}

/// `w_r(BW_r^{p,q-1}(A))`, with the `b` and `c` summands restricted to
/// witness `(r-1)`-cycles.
pub fn witness_boundaries(a: &dyn Graded, r: usize, at: Bidegree) -> Subspace {
    let target_dim = stack_dim(&stack_layout(a, r, at));
    let field = a.field();
    if r == 0 {
        return Subspace::zero(field, target_dim);
    }
    let w = witness_boundary_map(a, r, at);
    if r == 1 {
        return Subspace::span(field, target_dim, w.columns());
    }
    let r_ = r as i64;
    let zb = witness_cycles(a, r - 1, Bidegree::new(at.p + r_ - 1, at.q + r_ - 2));
    let zc = witness_cycles(a, r - 1, Bidegree::new(at.p - 1, at.q - 1));
    let mid = a.rank(Bidegree::new(at.p, at.q - 1));
    let (nb, nc) = (zb.ambient_dim(), zc.ambient_dim());
    let mut gens: Vec<Vector> = Vec::new();
    let pad = |prefix: usize, v: &[crate::field::Scalar], total: usize| {
        let mut out = vec![field.zero(); total];
        out[prefix..prefix + v.len()].clone_from_slice(v);
        out
    };
    let total = nb + mid + nc;
    for v in zb.basis() {
        gens.push(pad(0, v, total));
    }
    for k in 0..mid {
        let mut e = vec![field.zero(); total];
        e[nb + k] = field.one();
        gens.push(e);
    }
    for v in zc.basis() {
        gens.push(pad(nb + mid, v, total));
    }
    Subspace::span(field, target_dim, gens.iter().map(|g| w.mul_vec(g)).collect())
}

/// `E_r^{p,q}(A)` on the first side.
pub fn page_at(a: &dyn Graded, r: usize, at: Bidegree) -> Result<QuotientPresentation> {
    let layout = stack_layout(a, r, at);
    let dim = stack_dim(&layout);
    let field = a.field();
    // A tuple with a_0 = 0 is w_r of its tail placed in the c summand.
    if a.rank(at) == 0 {
        let z = Subspace::zero(field, dim);
        return quotient(&z, &z);
    }
    let cycles = witness_cycles(a, r, at);
    let boundaries = witness_boundaries(a, r, at);
    quotient(&cycles, &boundaries)
}

/// Page presentations keyed by native bidegree. On the second side the value
/// at `b` is the first-side page of `A^inv` at `inv(b)`.
#[derive(Clone, Debug)]
pub struct PageTable {
    pub side: Side,
    pub r: usize,
    pub entries: BTreeMap<Bidegree, QuotientPresentation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageRow {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

impl PageTable {
    pub fn dim(&self, at: Bidegree) -> usize {
        self.entries.get(&at).map_or(0, |e| e.dim())
    }

    /// Nonzero dimensions only.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.entries.iter().filter(|(_, e)| e.dim() > 0).map(|(b, e)| (*b, e.dim())).collect()
    }

    pub fn rows(&self) -> Vec<PageRow> {
        self.dims().into_iter().map(|(b, dim)| PageRow { p: b.p, q: b.q, dim }).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.dim() == 0)
    }
}

/// The first-side coordinates at which a native bidegree is computed.
pub fn side_point(side: Side, arity: usize, native: Bidegree) -> Bidegree {
    match side {
        Side::First => native,
        Side::Second => native.involve(arity),
    }
}

/// Native bidegrees where page `r` of `a` on `side` can be nonzero: the
/// support hull (in that side's coordinates) inflated by `r + 1`.
pub fn page_points(a: &dyn Graded, side: Side, r: usize) -> Vec<Bidegree> {
    let n = a.arity();
    let hull = match a.extent() {
        Extent::Empty => return Vec::new(),
        Extent::Finite(w) => w,
        Extent::Unbounded => panic!("page points need finite support; pass a window"),
    };
    let w = match side {
        Side::First => hull,
        Side::Second => hull.involve(n),
    };
    w.inflate(r + 1).iter().map(|t| side_point(side, n, t)).collect()
}

fn table_over(a: &dyn Graded, side: Side, r: usize, points: Vec<Bidegree>) -> Result<PageTable> {
    let n = a.arity();
    let inv = Involuted::new(a);
    let entries = par_map(points, |b| {
        let t = side_point(side, n, b);
        let pres = match side {
            Side::First => page_at(a, r, t),
            Side::Second => page_at(&inv, r, t),
        };
        pres.map(|p| (b, p))
    });
    Ok(PageTable { side, r, entries: entries.into_iter().collect::<Result<_>>()? })
}

/// Page `r` of a finite-support object on one side.
pub fn page(a: &dyn Graded, side: Side, r: usize) -> Result<PageTable> {
    if matches!(a.extent(), Extent::Unbounded) {
        return Err(Error::Unsupported("page of an object with infinite support; use page_on".into()));
    }
    table_over(a, side, r, page_points(a, side, r))
}

/// Page `r` on one side at the native bidegrees of `window`.
pub fn page_on(a: &dyn Graded, side: Side, r: usize, window: Window) -> Result<PageTable> {
    table_over(a, side, r, window.bidegrees())
}

/// Matrix of a map on page `r` at one bidegree, in the representative bases.
#[derive(Clone, Debug)]
pub struct PageMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Matrix,
}

impl PageMap {
    pub fn is_isomorphism(&self) -> bool {
        self.source_dim == self.target_dim && rank(&self.matrix) == self.target_dim
    }

    pub fn is_surjective(&self) -> bool {
        rank(&self.matrix) == self.target_dim
    }
}

fn stacked_block(f: &dyn GradedMap, layout: &[(Bidegree, usize)]) -> Matrix {
    let blocks: Vec<Matrix> = layout.iter().map(|(b, _)| f.block(*b)).collect();
    Matrix::block_diagonal(f.source().field(), &blocks)
}

/// Induced map on first-side page `r` at `at`.
pub fn induced_at(f: &dyn GradedMap, r: usize, at: Bidegree) -> Result<PageMap> {
    let src = page_at(f.source(), r, at)?;
    let tgt = page_at(f.target(), r, at)?;
    let field = f.source().field();
    let (sd, td) = (src.dim(), tgt.dim());
    if sd == 0 || td == 0 {
        return Ok(PageMap { source_dim: sd, target_dim: td, matrix: Matrix::zeros(field, td, sd) });
    }
    let fm = stacked_block(f, &stack_layout(f.source(), r, at));
    let ill = || Error::IllDefined { page: r, at };
    for v in src.divisor().basis() {
        if !tgt.divisor().contains(&fm.mul_vec(v)) {
            return Err(ill());
        }
    }
    let mut cols = Vec::with_capacity(sd);
    for v in src.representatives() {
        cols.push(tgt.coordinates(&fm.mul_vec(v)).map_err(|_| ill())?);
    }
    Ok(PageMap { source_dim: sd, target_dim: td, matrix: Matrix::from_columns(field, td, &cols) })
}

/// Induced maps on page `r` of one side, keyed by native bidegree.
pub fn induced_page_map(
    f: &dyn GradedMap,
    side: Side,
    r: usize,
    points: Vec<Bidegree>,
) -> Result<BTreeMap<Bidegree, PageMap>> {
    let n = f.source().arity();
    let inv = InvolutedMap::new(f);
    let out = par_map(points, |b| {
        let t = side_point(side, n, b);
        let m = match side {
            Side::First => induced_at(f, r, t),
            Side::Second => induced_at(&inv, r, t),
        };
        m.map(|m| (b, m))
    });
    out.into_iter().collect()
}

/// Native bidegrees where a page-`r` map between finite objects can be
/// nonzero on `side`.
pub fn map_points(f: &dyn GradedMap, side: Side, r: usize) -> Vec<Bidegree> {
    let n = f.source().arity();
    let hull = match f.source().extent().union(f.target().extent()) {
        Extent::Empty => return Vec::new(),
        Extent::Finite(w) => w,
        Extent::Unbounded => panic!("map points need finite support; pass a window"),
    };
    let w = match side {
        Side::First => hull,
        Side::Second => hull.involve(n),
    };
    w.inflate(r + 1).iter().map(|t| side_point(side, n, t)).collect()
}
