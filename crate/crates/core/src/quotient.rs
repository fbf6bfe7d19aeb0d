//! Quotients of graded objects by submodules generated from seed vectors,
//! computed lazily one bidegree at a time.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::bidegree::{Bidegree, Window};
use crate::field::Field;
use crate::graded::{Extent, Graded, GradedMap};
use crate::linalg::{quotient, Matrix, QuotientPresentation, Subspace, Vector};

/// `G / S` where `S` is the smallest family of subspaces closed under every
/// `d_i` containing: everything outside `keep` (if set), the images of the
/// listed structure maps, and explicitly killed vectors.
pub struct QuotientModule<G> {
    inner: G,
    keep: Option<Window>,
    images_of: Vec<usize>,
    killed: BTreeMap<Bidegree, Vec<Vector>>,
    sub: RwLock<HashMap<Bidegree, Subspace>>,
    pres: RwLock<HashMap<Bidegree, Arc<QuotientPresentation>>>,
}

impl<G: Graded> QuotientModule<G> {
    pub fn new(inner: G) -> Self {
        QuotientModule {
            inner,
            keep: None,
            images_of: Vec::new(),
            killed: BTreeMap::new(),
            sub: RwLock::new(HashMap::new()),
            pres: RwLock::new(HashMap::new()),
        }
    }

    /// Kill every bidegree outside `window`, together with whatever the
    /// killed region maps into it.
    pub fn keeping(mut self, window: Window) -> Self {
        self.keep = Some(window);
        self.clear();
        self
    }

    /// Kill the images of the listed structure maps.
    pub fn killing_images(mut self, maps: &[usize]) -> Self {
        self.images_of = maps.to_vec();
        self.clear();
        self
    }

    /// Kill further vectors of `inner` at `at`.
    pub fn kill(&mut self, at: Bidegree, vectors: Vec<Vector>) {
        self.killed.entry(at).or_default().extend(vectors);
        self.clear();
    }

    fn clear(&mut self) {
        self.sub.get_mut().expect("submodule cache").clear();
        self.pres.get_mut().expect("quotient cache").clear();
    }

    pub fn inner(&self) -> &G {
        &self.inner
    }

    /// The killed subspace of `inner` at `at`.
    pub fn submodule(&self, at: Bidegree) -> Subspace {
        if let Some(s) = self.sub.read().expect("submodule cache").get(&at) {
            return s.clone();
        }
        let field = self.inner.field();
        let dim = self.inner.rank(at);
        let s = if dim == 0 {
            Subspace::zero(field, 0)
        } else if self.keep.is_some_and(|w| !w.contains(at)) {
            Subspace::full(field, dim)
        } else {
            let mut gens: Vec<Vector> = self.killed.get(&at).cloned().unwrap_or_default();
            for i in 0..self.inner.arity() {
                let from = at - Bidegree::of_diff(i);
                if self.inner.rank(from) == 0 {
                    continue;
                }
                let d = self.inner.diff(i, from);
                if self.images_of.contains(&i) {
                    gens.extend(d.columns());
                } else {
                    gens.extend(self.submodule(from).basis().iter().map(|v| d.mul_vec(v)));
                }
            }
            Subspace::span(field, dim, gens)
        };
        self.sub.write().expect("submodule cache").insert(at, s.clone());
        s
    }

    /// The quotient at `at` with chosen representatives.
    pub fn presentation(&self, at: Bidegree) -> Arc<QuotientPresentation> {
        if let Some(p) = self.pres.read().expect("quotient cache").get(&at) {
            return p.clone();
        }
        let full = Subspace::full(self.inner.field(), self.inner.rank(at));
        let p = Arc::new(quotient(&full, &self.submodule(at)).expect("submodule lies in the module"));
        self.pres.write().expect("quotient cache").insert(at, p.clone());
        p
    }

    /// Matrix of the projection `inner -> quotient` at `at`.
    pub fn projection_block(&self, at: Bidegree) -> Matrix {
        let p = self.presentation(at);
        let field = self.inner.field();
        let n = self.inner.rank(at);
        let cols: Vec<Vector> = (0..n)
            .map(|k| {
                let mut e = vec![field.zero(); n];
                e[k] = field.one();
                p.coordinates(&e).expect("every vector has a class")
            })
            .collect();
        Matrix::from_columns(field, p.dim(), &cols)
    }
}

impl<G: Graded> Graded for QuotientModule<G> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn field(&self) -> Field {
        self.inner.field()
    }

    fn rank(&self, at: Bidegree) -> usize {
        if self.inner.rank(at) == 0 {
            return 0;
        }
        self.presentation(at).dim()
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        let field = self.field();
        let to = at + Bidegree::of_diff(i);
        let (src, tgt) = (self.rank(at), self.rank(to));
        if src == 0 || tgt == 0 || i >= self.arity() {
            return Matrix::zeros(field, tgt, src);
        }
        let d = self.inner.diff(i, at);
        let target = self.presentation(to);
        let cols: Vec<Vector> = self
            .presentation(at)
            .representatives()
            .iter()
            .map(|v| target.coordinates(&d.mul_vec(v)).expect("submodule is closed"))
            .collect();
        Matrix::from_columns(field, tgt, &cols)
    }

    fn extent(&self) -> Extent {
        match (self.keep, self.inner.extent()) {
            (_, Extent::Empty) => Extent::Empty,
            (Some(w), _) => Extent::Finite(w),
            (None, e) => e,
        }
    }
}

/// The projection `G -> G / S`.
pub struct Projection<'a, G> {
    pub quotient: &'a QuotientModule<G>,
}

impl<G: Graded> GradedMap for Projection<'_, G> {
    fn source(&self) -> &dyn Graded {
        &self.quotient.inner
    }

    fn target(&self) -> &dyn Graded {
        self.quotient
    }

    fn block(&self, at: Bidegree) -> Matrix {
        self.quotient.projection_block(at)
    }
}
