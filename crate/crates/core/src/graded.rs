//! Abstract bigraded objects with structure maps, and maps between them.
//!
//! Both explicit finite multicomplexes and lazily materialized cone modules
//! implement [`Graded`]; everything downstream (pages, lifting problems,
//! quotients) is written against this trait and works one bidegree at a time.

use std::sync::Arc;

use crate::bidegree::{Bidegree, Window};
use crate::field::Field;
use crate::linalg::Matrix;

/// Where an object can be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extent {
    Empty,
    /// Contained in the given window.
    Finite(Window),
    /// Infinite (cone-shaped) support; only per-bidegree queries make sense.
    Unbounded,
}

impl Extent {
    pub fn window(self) -> Option<Window> {
        match self {
            Extent::Finite(w) => Some(w),
            _ => None,
        }
    }

    pub fn union(self, other: Extent) -> Extent {
        match (self, other) {
            (Extent::Unbounded, _) | (_, Extent::Unbounded) => Extent::Unbounded,
            (Extent::Empty, e) | (e, Extent::Empty) => e,
            (Extent::Finite(a), Extent::Finite(b)) => Extent::Finite(a.union(b)),
        }
    }
}

pub trait Graded: Send + Sync {
    /// The number `N` of structure maps.
    fn arity(&self) -> usize;

    fn field(&self) -> Field;

    fn rank(&self, at: Bidegree) -> usize;

    /// Matrix of `d_i` from bidegree `at` to `at + (-i, 1-i)`; zero for `i >= N`.
    fn diff(&self, i: usize, at: Bidegree) -> Matrix;

    fn extent(&self) -> Extent;
}

/// A bidegree-preserving linear map between graded objects.
pub trait GradedMap: Send + Sync {
    fn source(&self) -> &dyn Graded;

    fn target(&self) -> &dyn Graded;

    /// Matrix from `source.rank(at)` to `target.rank(at)`.
    fn block(&self, at: Bidegree) -> Matrix;
}

macro_rules! forward_graded {
    ($($ty:ty),*) => {$(
        impl<G: Graded + ?Sized> Graded for $ty {
            fn arity(&self) -> usize { (**self).arity() }
            fn field(&self) -> Field { (**self).field() }
            fn rank(&self, at: Bidegree) -> usize { (**self).rank(at) }
            fn diff(&self, i: usize, at: Bidegree) -> Matrix { (**self).diff(i, at) }
            fn extent(&self) -> Extent { (**self).extent() }
        }
    )*};
}

forward_graded!(&G, Arc<G>, Box<G>);

/// Matrix of the word `δ_{w[0]} ⋯ δ_{w[k-1]}` acting at `at`; the last letter
/// acts first.
pub fn act_matrix(g: &dyn Graded, word: &[usize], at: Bidegree) -> Matrix {
    let mut cur = at;
    let mut m = Matrix::identity(g.field(), g.rank(at));
    for &i in word.iter().rev() {
        let d = g.diff(i, cur);
        m = d.mul(&m);
        cur = cur + Bidegree::of_diff(i);
    }
    m
}

/// `A^inv`, computed on demand.
pub struct Involuted<G> {
    inner: G,
}

impl<G: Graded> Involuted<G> {
    pub fn new(inner: G) -> Self {
        Involuted { inner }
    }

    pub fn inner(&self) -> &G {
        &self.inner
    }
}

impl<G: Graded> Graded for Involuted<G> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn field(&self) -> Field {
        self.inner.field()
    }

    fn rank(&self, at: Bidegree) -> usize {
        self.inner.rank(at.involve(self.arity()))
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        let n = self.arity();
        if i >= n {
            let src = self.rank(at);
            let tgt = self.rank(at + Bidegree::of_diff(i));
            return Matrix::zeros(self.field(), tgt, src);
        }
        self.inner.diff(n - 1 - i, at.involve(n))
    }

    fn extent(&self) -> Extent {
        match self.inner.extent() {
            Extent::Finite(w) => Extent::Finite(w.involve(self.arity())),
            e => e,
        }
    }
}

/// `f^inv : A^inv -> B^inv`.
pub struct InvolutedMap<'a> {
    map: &'a dyn GradedMap,
    source: Involuted<&'a dyn Graded>,
    target: Involuted<&'a dyn Graded>,
}

impl<'a> InvolutedMap<'a> {
    pub fn new(map: &'a dyn GradedMap) -> Self {
        InvolutedMap { map, source: Involuted::new(map.source()), target: Involuted::new(map.target()) }
    }
}

impl GradedMap for InvolutedMap<'_> {
    fn source(&self) -> &dyn Graded {
        &self.source
    }

    fn target(&self) -> &dyn Graded {
        &self.target
    }

    fn block(&self, at: Bidegree) -> Matrix {
        self.map.block(at.involve(self.source.arity()))
    }
}

/// Composite `g ∘ f`, evaluated lazily.
pub struct Composite<'a> {
    pub first: &'a dyn GradedMap,
    pub second: &'a dyn GradedMap,
}

impl GradedMap for Composite<'_> {
    fn source(&self) -> &dyn Graded {
        self.first.source()
    }

    fn target(&self) -> &dyn Graded {
        self.second.target()
    }

    fn block(&self, at: Bidegree) -> Matrix {
        self.second.block(at).mul(&self.first.block(at))
    }
}

/// Residual matrices of `Σ_{i+j=l} (-1)^i d_i d_j` at `at`, for every `l`
/// where it is nonzero.
pub fn relation_residuals(g: &dyn Graded, at: Bidegree) -> Vec<(usize, Matrix)> {
    let n = g.arity();
    let field = g.field();
    let src = g.rank(at);
    let mut out = Vec::new();
    if src == 0 {
        return out;
    }
    for l in 0..=2 * (n - 1) {
        let tgt_at = at + Bidegree::of_diff(l) + Bidegree::new(0, 1);
        let tgt = g.rank(tgt_at);
        if tgt == 0 {
            continue;
        }
        let mut acc = Matrix::zeros(field, tgt, src);
        for i in l.saturating_sub(n - 1)..=l.min(n - 1) {
            let j = l - i;
            let dj = g.diff(j, at);
            let di = g.diff(i, at + Bidegree::of_diff(j));
            let term = di.mul(&dj);
            acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        if !acc.is_zero() {
            out.push((l, acc));
        }
    }
    out
}

/// Bidegrees where `d_i f != f d_i` for some `i`, checked at the given points.
pub fn strictness_failures(f: &dyn GradedMap, points: impl IntoIterator<Item = Bidegree>) -> Vec<(usize, Bidegree)> {
    let n = f.source().arity();
    let mut out = Vec::new();
    for at in points {
        if f.source().rank(at) == 0 {
            continue;
        }
        let fa = f.block(at);
        for i in 0..n {
            let to = at + Bidegree::of_diff(i);
            let lhs = f.target().diff(i, at).mul(&fa);
            let rhs = f.block(to).mul(&f.source().diff(i, at));
            if lhs != rhs {
                out.push((i, at));
            }
        }
    }
    out
}
