use std::collections::BTreeMap;

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{relation_residuals, Extent, Graded};
use crate::linalg::Matrix;

/// Largest supported number of structure maps.
pub const MAX_ARITY: usize = 8;

/// A finite-support N-multicomplex given by explicit per-bidegree matrices.
///
/// Sign convention: the relations are `Σ_{i+j=l} (-1)^i d_i d_j = 0`, so for
/// bicomplexes `d_0 d_1 = d_1 d_0` (commuting, not anticommuting squares).
/// Zero-rank bidegrees and zero blocks are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicomplex {
    arity: usize,
    field: Field,
    modules: BTreeMap<Bidegree, usize>,
    diffs: BTreeMap<(usize, Bidegree), Matrix>,
}

/// A failed relation `l` at a bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub l: usize,
    pub at: Bidegree,
    pub residual: Matrix,
}

fn check_arity(arity: usize) -> Result<()> {
    if !(2..=MAX_ARITY).contains(&arity) {
        return Err(Error::Unsupported(format!("N = {arity} outside 2..={MAX_ARITY}")));
    }
    Ok(())
}

impl Multicomplex {
    pub fn zero(arity: usize, field: Field) -> Self {
        Multicomplex { arity, field, modules: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// The one-dimensional multicomplex `k(p,q)` with all maps zero.
    pub fn point(arity: usize, field: Field, at: Bidegree) -> Self {
        let mut m = Multicomplex::zero(arity, field);
        m.modules.insert(at, 1);
        m
    }

    /// Assembles a multicomplex, checking every block's shape.
    pub fn from_parts(
        arity: usize,
        field: Field,
        modules: impl IntoIterator<Item = (Bidegree, usize)>,
        diffs: impl IntoIterator<Item = (usize, Bidegree, Matrix)>,
    ) -> Result<Self> {
        check_arity(arity)?;
        let mut out = Multicomplex::zero(arity, field);
        for (at, r) in modules {
            if r > 0 {
                out.modules.insert(at, r);
            }
        }
        for (i, at, m) in diffs {
            out.set_diff(i, at, m)?;
        }
        Ok(out)
    }

    /// Replaces the block of `d_i` at `at`.
    pub fn set_diff(&mut self, i: usize, at: Bidegree, m: Matrix) -> Result<()> {
        if i >= self.arity {
            return Err(Error::Shape {
                at: at.to_string(),
                detail: format!("d_{i} does not exist for N = {}", self.arity),
            });
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), m.field().to_string()));
        }
        let to = at + Bidegree::of_diff(i);
        let want = (self.rank(to), self.rank(at));
        if m.shape() != want {
            return Err(Error::Shape {
                at: at.to_string(),
                detail: format!(
                    "d_{i} block is {}x{}, expected {}x{} (rank at {to} x rank at {at})",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                ),
            });
        }
        if m.is_zero() {
            self.diffs.remove(&(i, at));
        } else {
            self.diffs.insert((i, at), m);
        }
        Ok(())
    }

    pub fn modules(&self) -> &BTreeMap<Bidegree, usize> {
        &self.modules
    }

    /// Nonzero blocks keyed by `(i, source bidegree)`.
    pub fn diff_blocks(&self) -> &BTreeMap<(usize, Bidegree), Matrix> {
        &self.diffs
    }

    pub fn support(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.modules.keys().copied()
    }

    pub fn hull(&self) -> Option<Window> {
        Window::hull(self.support())
    }

    pub fn is_zero(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.modules.values().sum()
    }

    /// All relation failures; empty iff `self` is an N-multicomplex.
    pub fn validate(&self) -> Vec<Violation> {
        self.support()
            .flat_map(|at| {
                relation_residuals(self, at).into_iter().map(move |(l, residual)| Violation { l, at, residual })
            })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `A^inv`: `(A^inv)^{p,q} = A^{inv(p,q)}` and `(d^inv)_i = d_{N-1-i}`.
    pub fn involve(&self) -> Multicomplex {
        let n = self.arity;
        Multicomplex {
            arity: n,
            field: self.field,
            modules: self.modules.iter().map(|(b, r)| (b.involve(n), *r)).collect(),
            diffs: self.diffs.iter().map(|((i, b), m)| ((n - 1 - i, b.involve(n)), m.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Multicomplex) -> Result<Multicomplex> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut modules = self.modules.clone();
        for (b, r) in &other.modules {
            *modules.entry(*b).or_default() += r;
        }
        let mut out = Multicomplex { arity: self.arity, field: self.field, modules, diffs: BTreeMap::new() };
        let keys: std::collections::BTreeSet<_> = self.diffs.keys().chain(other.diffs.keys()).copied().collect();
        for (i, at) in keys {
            let block = Matrix::block_diagonal(self.field, &[self.diff(i, at), other.diff(i, at)]);
            out.set_diff(i, at, block)?;
        }
        Ok(out)
    }

    /// Restriction of any graded object to a window. Maps leaving the window
    /// are dropped, so the result is a genuine multicomplex only when the
    /// window is closed under the relevant structure maps.
    pub fn from_graded(g: &dyn Graded, window: Window) -> Multicomplex {
        let mut out = Multicomplex::zero(g.arity(), g.field());
        for at in window.iter() {
            let r = g.rank(at);
            if r > 0 {
                out.modules.insert(at, r);
            }
        }
        let support: Vec<Bidegree> = out.support().collect();
        for at in support {
            for i in 0..g.arity() {
                let to = at + Bidegree::of_diff(i);
                if !window.contains(to) || out.rank(to) == 0 {
                    continue;
                }
                let m = g.diff(i, at);
                if !m.is_zero() {
                    out.diffs.insert((i, at), m);
                }
            }
        }
        out
    }
}

impl Graded for Multicomplex {
    fn arity(&self) -> usize {
        self.arity
    }

    fn field(&self) -> Field {
        self.field
    }

    fn rank(&self, at: Bidegree) -> usize {
        self.modules.get(&at).copied().unwrap_or(0)
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        match self.diffs.get(&(i, at)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.field, self.rank(at + Bidegree::of_diff(i)), self.rank(at)),
        }
    }

    fn extent(&self) -> Extent {
        match self.hull() {
            Some(w) => Extent::Finite(w),
            None => Extent::Empty,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: i64, q: i64) -> Bidegree {
        Bidegree::new(p, q)
    }

    /// `K = kx ⊕ k d_0 x` for N = 4.
    pub(crate) fn k_example() -> Multicomplex {
        let q = Field::Rational;
        Multicomplex::from_parts(4, q, [(b(0, 0), 1), (b(0, 1), 1)], [(0, b(0, 0), Matrix::from_ints(q, &[&[1]]))])
            .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(k_example().is_valid());

        let q = Field::Rational;
        let one = Matrix::from_ints(q, &[&[1]]);
        let chain = Multicomplex::from_parts(
            2,
            q,
            [(b(0, 0), 1), (b(0, 1), 1), (b(0, 2), 1)],
            [(0, b(0, 0), one.clone()), (0, b(0, 1), one.clone())],
        )
        .unwrap();
        let v = chain.validate();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].l, v[0].at), (0, b(0, 0)));

        let arrow = Multicomplex::from_parts(2, q, [(b(0, 0), 1), (b(-1, 0), 1)], [(1, b(0, 0), one)]).unwrap();
        assert!(arrow.is_valid());
    }

    #[test]
    fn shape_errors_precede_validation() {
        let q = Field::Rational;
        let bad =
            Multicomplex::from_parts(2, q, [(b(0, 0), 1), (b(0, 1), 2)], [(0, b(0, 0), Matrix::from_ints(q, &[&[1]]))]);
        assert!(matches!(bad, Err(Error::Shape { .. })));
        assert!(Multicomplex::from_parts(2, q, [(b(0, 0), 1)], [(2, b(0, 0), Matrix::zeros(q, 0, 1))]).is_err());
    }

    #[test]
    fn involution_examples() {
        let q = Field::Rational;
        let a = Multicomplex::point(2, q, b(1, 0)).involve();
        assert_eq!(a.modules().iter().next(), Some((&b(0, -1), &1)));
        let c = Multicomplex::point(4, q, b(1, 1)).involve();
        assert_eq!(c.modules().iter().next(), Some((&b(-1, -1), &1)));
        let k = k_example();
        let ki = k.involve();
        assert!(ki.is_valid());
        assert_eq!(ki.involve(), k);
        // d_0 of K becomes d_3 of K^inv.
        assert_eq!(ki.diff_blocks().keys().next().unwrap().0, 3);
    }

    #[test]
    fn direct_sum_with_zero_is_identical() {
        let k = k_example();
        assert_eq!(k.direct_sum(&Multicomplex::zero(4, Field::Rational)).unwrap(), k);
        let kk = k.direct_sum(&k).unwrap();
        assert!(kk.is_valid());
        assert_eq!(kk.total_rank(), 4);
        assert!(k.direct_sum(&Multicomplex::zero(2, Field::Rational)).is_err());
    }

    #[test]
    fn maps_beyond_arity_are_zero() {
        let k = k_example();
        for i in 4..7 {
            assert!(k.diff(i, b(0, 0)).is_zero());
        }
    }
}
