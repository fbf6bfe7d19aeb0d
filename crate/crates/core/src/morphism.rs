use std::collections::{BTreeMap, BTreeSet};

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{strictness_failures, Graded, GradedMap};
use crate::linalg::{kernel, rank, Matrix, Subspace, Vector};
use crate::multicomplex::Multicomplex;

/// A strict (bidegree-preserving) morphism between finite multicomplexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Multicomplex,
    target: Multicomplex,
    blocks: BTreeMap<Bidegree, Matrix>,
}

/// `d_i f != f d_i` at a source bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismViolation {
    pub i: usize,
    pub at: Bidegree,
}

impl Morphism {
    pub fn new(
        source: Multicomplex,
        target: Multicomplex,
        blocks: impl IntoIterator<Item = (Bidegree, Matrix)>,
    ) -> Result<Self> {
        if source.arity() != target.arity() {
            return Err(Error::ArityMismatch(source.arity(), target.arity()));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
        }
        let mut out = Morphism { source, target, blocks: BTreeMap::new() };
        for (at, m) in blocks {
            let want = (out.target.rank(at), out.source.rank(at));
            if m.shape() != want {
                return Err(Error::Shape {
                    at: at.to_string(),
                    detail: format!("block is {}x{}, expected {}x{}", m.rows(), m.cols(), want.0, want.1),
                });
            }
            if m.field() != out.source.field() {
                return Err(Error::FieldMismatch(out.source.field().to_string(), m.field().to_string()));
            }
            if !m.is_zero() {
                out.blocks.insert(at, m);
            }
        }
        Ok(out)
    }

    /// Builds and checks strictness.
    pub fn strict(
        source: Multicomplex,
        target: Multicomplex,
        blocks: impl IntoIterator<Item = (Bidegree, Matrix)>,
    ) -> Result<Self> {
        let f = Morphism::new(source, target, blocks)?;
        if let Some(v) = f.validate().first() {
            return Err(Error::Shape {
                at: v.at.to_string(),
                detail: format!("not strict: d_{} f != f d_{}", v.i, v.i),
            });
        }
        Ok(f)
    }

    pub fn identity(a: &Multicomplex) -> Self {
        let blocks = a.modules().iter().map(|(b, r)| (*b, Matrix::identity(a.field(), *r))).collect();
        Morphism { source: a.clone(), target: a.clone(), blocks }
    }

    pub fn zero(source: &Multicomplex, target: &Multicomplex) -> Result<Self> {
        Morphism::new(source.clone(), target.clone(), [])
    }

    /// Restricts a lazy map to explicit finite source and target.
    pub fn from_graded(map: &dyn GradedMap, source: Multicomplex, target: Multicomplex) -> Result<Self> {
        let blocks: Vec<_> = source.support().map(|at| (at, map.block(at))).collect();
        Morphism::new(source, target, blocks)
    }

    pub fn source_complex(&self) -> &Multicomplex {
        &self.source
    }

    pub fn target_complex(&self) -> &Multicomplex {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<Bidegree, Matrix> {
        &self.blocks
    }

    pub fn hull(&self) -> Option<Window> {
        Window::hull(self.source.support().chain(self.target.support()))
    }

    pub fn validate(&self) -> Vec<MorphismViolation> {
        strictness_failures(self, self.source.support().collect::<Vec<_>>())
            .into_iter()
            .map(|(i, at)| MorphismViolation { i, at })
            .collect()
    }

    pub fn is_strict(&self) -> bool {
        self.validate().is_empty()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if self.target != g.source {
            return Err(Error::Unsupported("composition of non-composable morphisms".into()));
        }
        let blocks: Vec<_> = self.source.support().map(|at| (at, g.block(at).mul(&self.block(at)))).collect();
        Morphism::new(self.source.clone(), g.target.clone(), blocks)
    }

    pub fn involve(&self) -> Morphism {
        let n = self.source.arity();
        Morphism {
            source: self.source.involve(),
            target: self.target.involve(),
            blocks: self.blocks.iter().map(|(b, m)| (b.involve(n), m.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Morphism) -> Result<Morphism> {
        let source = self.source.direct_sum(&other.source)?;
        let target = self.target.direct_sum(&other.target)?;
        let keys: BTreeSet<Bidegree> = source.support().collect();
        let field = source.field();
        let blocks: Vec<_> = keys
            .into_iter()
            .map(|at| (at, Matrix::block_diagonal(field, &[self.block(at), other.block(at)])))
            .collect();
        Morphism::new(source, target, blocks)
    }

    /// Bidegreewise invertible, hence an isomorphism of multicomplexes.
    pub fn is_isomorphism(&self) -> bool {
        let points: BTreeSet<Bidegree> = self.source.support().chain(self.target.support()).collect();
        points.into_iter().all(|at| {
            let m = self.block(at);
            m.rows() == m.cols() && rank(&m) == m.rows()
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.target.support().all(|at| rank(&self.block(at)) == self.target.rank(at))
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let mut blocks = Vec::new();
        for at in self.target.support() {
            blocks.push((at, self.block(at).inverse()?));
        }
        if self.source.support().any(|at| self.target.rank(at) == 0) {
            return None;
        }
        Morphism::new(self.target.clone(), self.source.clone(), blocks).ok()
    }
}

/// All strict morphisms `A -> B` as a subspace of the concatenated
/// (row-major) block entries.
#[derive(Clone, Debug)]
pub struct StrictHom {
    source: Multicomplex,
    target: Multicomplex,
    /// `(bidegree, offset)` for every bidegree where both sides are nonzero.
    layout: Vec<(Bidegree, usize)>,
    pub space: Subspace,
}

impl StrictHom {
    pub fn new(source: &Multicomplex, target: &Multicomplex) -> Result<StrictHom> {
        if source.arity() != target.arity() {
            return Err(Error::ArityMismatch(source.arity(), target.arity()));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
        }
        let field = source.field();
        let mut layout = Vec::new();
        let mut total = 0;
        let mut offset_of = BTreeMap::new();
        for at in source.support() {
            let (r, c) = (target.rank(at), source.rank(at));
            if r > 0 {
                layout.push((at, total));
                offset_of.insert(at, total);
                total += r * c;
            }
        }
        // d_i^B f_t - f_{t'} d_i^A = 0 for t' = t + (-i, 1-i).
        let mut rows: Vec<Vector> = Vec::new();
        for at in source.support() {
            for i in 0..source.arity() {
                let to = at + Bidegree::of_diff(i);
                let (sa, ta) = (source.rank(at), target.rank(to));
                if ta == 0 {
                    continue;
                }
                let db = target.diff(i, at);
                let da = source.diff(i, at);
                let mid_b = target.rank(at);
                let mid_a = source.rank(to);
                for r in 0..ta {
                    for c in 0..sa {
                        let mut row = vec![field.zero(); total];
                        if let Some(&off) = offset_of.get(&at) {
                            for k in 0..mid_b {
                                let x = row[off + k * sa + c].add(db.get(r, k));
                                row[off + k * sa + c] = x;
                            }
                        }
                        if let Some(&off) = offset_of.get(&to) {
                            for k in 0..mid_a {
                                let x = row[off + r * mid_a + k].sub(da.get(k, c));
                                row[off + r * mid_a + k] = x;
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let space = if rows.is_empty() {
            Subspace::full(field, total)
        } else {
            kernel(&Matrix::from_rows(field, total, rows)?)
        };
        Ok(StrictHom { source: source.clone(), target: target.clone(), layout, space })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The morphism with the given entry vector.
    pub fn morphism(&self, v: &[Scalar]) -> Morphism {
        let field = self.source.field();
        let blocks: BTreeMap<Bidegree, Matrix> = self
            .layout
            .iter()
            .map(|&(at, off)| {
                let (r, c) = (self.target.rank(at), self.source.rank(at));
                let rows = (0..r).map(|i| v[off + i * c..off + (i + 1) * c].to_vec()).collect();
                (at, Matrix::from_rows(field, c, rows).expect("block shape"))
            })
            .collect();
        Morphism { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    /// Entry vector of a morphism with the same source and target.
    pub fn entries(&self, f: &Morphism) -> Vector {
        let mut v = Vec::new();
        for &(at, _) in &self.layout {
            let m = f.block(at);
            for i in 0..m.rows() {
                v.extend_from_slice(m.row(i));
            }
        }
        v
    }

    pub fn basis(&self) -> Vec<Morphism> {
        self.space.basis().iter().map(|v| self.morphism(v)).collect()
    }
}

/// The kernel of a strict morphism with its inclusion.
pub fn kernel_inclusion(f: &Morphism) -> Morphism {
    let a = &f.source;
    let field = a.field();
    let kernels: BTreeMap<Bidegree, Subspace> = a.support().map(|at| (at, kernel(&f.block(at)))).collect();
    let modules = kernels.iter().map(|(at, k)| (*at, k.dim()));
    let mut diffs = Vec::new();
    for (at, k) in &kernels {
        for i in 0..a.arity() {
            let to = *at + Bidegree::of_diff(i);
            let Some(kt) = kernels.get(&to) else { continue };
            if k.dim() == 0 || kt.dim() == 0 {
                continue;
            }
            let d = a.diff(i, *at);
            let cols: Vec<Vector> =
                k.basis().iter().map(|v| kt.coordinates(&d.mul_vec(v)).expect("kernel is a subcomplex")).collect();
            diffs.push((i, *at, Matrix::from_columns(field, kt.dim(), &cols)));
        }
    }
    let sub = Multicomplex::from_parts(a.arity(), field, modules, diffs).expect("kernel shapes");
    let blocks: Vec<_> = kernels.iter().filter(|(_, k)| k.dim() > 0).map(|(at, k)| (*at, k.basis_matrix())).collect();
    Morphism::new(sub, a.clone(), blocks).expect("inclusion shapes")
}

impl GradedMap for Morphism {
    fn source(&self) -> &dyn Graded {
        &self.source
    }

    fn target(&self) -> &dyn Graded {
        &self.target
    }

    fn block(&self, at: Bidegree) -> Matrix {
        match self.blocks.get(&at) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.source.field(), self.target.rank(at), self.source.rank(at)),
        }
    }
}
