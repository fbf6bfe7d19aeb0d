//! The adjunction `q ⊣ j` between bicomplexes and 4-multicomplexes.
//!
//! `j(M)^{p,q} = M^{q,2q-p}` with `d_1 = d_0^M`, `d_2 = d_1^M` and `d_0 = d_3 = 0`.
//! `q(L)^{p,q} = q'(L)^{2p-q,p}` where `q'(L) = L / (A_4 δ_0 L + A_4 δ_3 L)`,
//! with `d_0, d_1` induced by `δ_1, δ_2`. The counit `q j = id` is the identity
//! and the unit `L -> j q L` is the projection onto `q'(L)`.

use serde::Serialize;

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Extent, Graded, GradedMap};
use crate::linalg::{rank, Matrix, Vector};
use crate::model::{is_fibration, is_weak_equivalence};
use crate::morphism::{Morphism, StrictHom};
use crate::multicomplex::Multicomplex;
use crate::quotient::QuotientModule;
use crate::random::{Sampler, SamplerConfig};

/// Bicomplex bidegree read by `j(M)` at `(p,q)`.
pub fn j_source(at: Bidegree) -> Bidegree {
    Bidegree::new(at.q, 2 * at.q - at.p)
}

/// Where `M^{a,b}` sits in `j(M)`.
pub fn j_place(m_at: Bidegree) -> Bidegree {
    Bidegree::new(2 * m_at.p - m_at.q, m_at.p)
}

/// `q'(L)` bidegree read by `q(L)` at `(p,q)`.
pub fn q_source(at: Bidegree) -> Bidegree {
    Bidegree::new(2 * at.p - at.q, at.p)
}

/// Where `q'(L)^{s,t}` sits in `q(L)`.
pub fn q_place(l_at: Bidegree) -> Bidegree {
    Bidegree::new(l_at.q, 2 * l_at.q - l_at.p)
}

fn j_window(w: Window) -> Window {
    Window::new(2 * w.pmin - w.qmax, 2 * w.pmax - w.qmin, w.pmin, w.pmax)
}

fn q_window(w: Window) -> Window {
    Window::new(w.qmin, w.qmax, 2 * w.qmin - w.pmax, 2 * w.qmax - w.pmin)
}

/// `j(M)`, evaluated lazily.
pub struct JFunctor<G> {
    inner: G,
}

impl<G: Graded> JFunctor<G> {
    pub fn new(inner: G) -> Result<Self> {
        if inner.arity() != 2 {
            return Err(Error::ArityMismatch(2, inner.arity()));
        }
        Ok(JFunctor { inner })
    }
}

impl<G: Graded> Graded for JFunctor<G> {
    fn arity(&self) -> usize {
        4
    }

    fn field(&self) -> Field {
        self.inner.field()
    }

    fn rank(&self, at: Bidegree) -> usize {
        self.inner.rank(j_source(at))
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        match i {
            1 | 2 => self.inner.diff(i - 1, j_source(at)),
            _ => Matrix::zeros(self.field(), self.rank(at + Bidegree::of_diff(i)), self.rank(at)),
        }
    }

    fn extent(&self) -> Extent {
        match self.inner.extent() {
            Extent::Finite(w) => Extent::Finite(j_window(w)),
            e => e,
        }
    }
}

/// `q(L)`, evaluated lazily on top of the quotient `q'(L)`.
pub struct QFunctor<G> {
    quotient: QuotientModule<G>,
}

impl<G: Graded> QFunctor<G> {
    pub fn new(inner: G) -> Result<Self> {
        if inner.arity() != 4 {
            return Err(Error::ArityMismatch(4, inner.arity()));
        }
        Ok(QFunctor { quotient: q_prime(inner) })
    }

    /// The underlying `q'(L)`.
    pub fn quotient(&self) -> &QuotientModule<G> {
        &self.quotient
    }
}

/// `L / (A_4 δ_0 L + A_4 δ_3 L)` as a 4-multicomplex.
pub fn q_prime<G: Graded>(l: G) -> QuotientModule<G> {
    QuotientModule::new(l).killing_images(&[0, 3])
}

impl<G: Graded> Graded for QFunctor<G> {
    fn arity(&self) -> usize {
        2
    }

    fn field(&self) -> Field {
        self.quotient.field()
    }

    fn rank(&self, at: Bidegree) -> usize {
        self.quotient.rank(q_source(at))
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        match i {
            0 | 1 => self.quotient.diff(i + 1, q_source(at)),
            _ => Matrix::zeros(self.field(), self.rank(at + Bidegree::of_diff(i)), self.rank(at)),
        }
    }

    fn extent(&self) -> Extent {
        match self.quotient.extent() {
            Extent::Finite(w) => Extent::Finite(q_window(w)),
            e => e,
        }
    }
}

fn materialize(g: &dyn Graded) -> Multicomplex {
    match g.extent() {
        Extent::Finite(w) => Multicomplex::from_graded(g, w),
        _ => Multicomplex::zero(g.arity(), g.field()),
    }
}

pub fn j(m: &Multicomplex) -> Result<Multicomplex> {
    Ok(materialize(&JFunctor::new(m)?))
}

pub fn q(l: &Multicomplex) -> Result<Multicomplex> {
    Ok(materialize(&QFunctor::new(l)?))
}

pub fn j_map(f: &Morphism) -> Result<Morphism> {
    let source = j(f.source_complex())?;
    let target = j(f.target_complex())?;
    let blocks: Vec<_> = f.blocks().iter().map(|(at, m)| (j_place(*at), m.clone())).collect();
    Morphism::new(source, target, blocks)
}

/// `q(f)`: `f` applied to representatives of `q'(L)`, read in `q'(L')`.
pub fn q_map(f: &Morphism) -> Result<Morphism> {
    let (l, l2) = (f.source_complex(), f.target_complex());
    let qs = QFunctor::new(l)?;
    let qt = QFunctor::new(l2)?;
    let field = l.field();
    let mut blocks = Vec::new();
    for at in l.support() {
        let (src, tgt) = (qs.quotient.presentation(at), qt.quotient.presentation(at));
        if src.dim() == 0 || tgt.dim() == 0 {
            continue;
        }
        let fm = f.block(at);
        let cols: Vec<Vector> = src
            .representatives()
            .iter()
            .map(|v| tgt.coordinates(&fm.mul_vec(v)).map_err(|_| Error::IllDefined { page: 0, at }))
            .collect::<Result<_>>()?;
        blocks.push((q_place(at), Matrix::from_columns(field, tgt.dim(), &cols)));
    }
    Morphism::new(materialize(&qs), materialize(&qt), blocks)
}

/// `η_L : L -> j q L`.
pub fn unit(l: &Multicomplex) -> Result<Morphism> {
    let qm = QFunctor::new(l)?;
    let target = j(&materialize(&qm))?;
    let blocks: Vec<_> = l.support().map(|at| (at, qm.quotient.projection_block(at))).collect();
    Morphism::new(l.clone(), target, blocks)
}

/// `η_L` for an object with infinite support. `j q L` is `q'(L)` with its own
/// bidegrees, since the two regradings cancel.
pub struct Unit<G> {
    quotient: QuotientModule<G>,
}

impl<G: Graded> Unit<G> {
    pub fn new(l: G) -> Result<Self> {
        if l.arity() != 4 {
            return Err(Error::ArityMismatch(4, l.arity()));
        }
        Ok(Unit { quotient: q_prime(l) })
    }
}

impl<G: Graded> GradedMap for Unit<G> {
    fn source(&self) -> &dyn Graded {
        self.quotient.inner()
    }

    fn target(&self) -> &dyn Graded {
        &self.quotient
    }

    fn block(&self, at: Bidegree) -> Matrix {
        self.quotient.projection_block(at)
    }
}

/// `η_{L'} ∘ f = j q (f) ∘ η_L`.
pub fn unit_is_natural(f: &Morphism) -> Result<bool> {
    let left = f.then(&unit(f.target_complex())?)?;
    let right = unit(f.source_complex())?.then(&j_map(&q_map(f)?)?)?;
    Ok(left == right)
}

/// `q(η_L) = id_{q L}` and `η_{j M} = id_{j M}` (with `j` of the identity counit).
pub fn triangle_identities(l: &Multicomplex, m: &Multicomplex) -> Result<bool> {
    let first = q_map(&unit(l)?)?;
    let second = unit(&j(m)?)?;
    Ok(first == Morphism::identity(&q(l)?) && second == Morphism::identity(&j(m)?))
}

/// Dimensions of both sides of `Hom(q L, M) ≅ Hom(L, j M)` and the rank of
/// the transport `g ↦ j(g) ∘ η_L` between them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomBijection {
    pub left_dim: usize,
    pub right_dim: usize,
    pub transported_rank: usize,
}

impl HomBijection {
    pub fn holds(&self) -> bool {
        self.left_dim == self.right_dim && self.transported_rank == self.left_dim
    }
}

pub fn hom_bijection(l: &Multicomplex, m: &Multicomplex) -> Result<HomBijection> {
    let left = StrictHom::new(&q(l)?, m)?;
    let right = StrictHom::new(l, &j(m)?)?;
    let eta = unit(l)?;
    let images: Vec<Vector> =
        left.basis().iter().map(|g| Ok(right.entries(&eta.then(&j_map(g)?)?))).collect::<Result<_>>()?;
    let transported_rank =
        if images.is_empty() { 0 } else { rank(&Matrix::from_columns(l.field(), right.space.ambient_dim(), &images)) };
    Ok(HomBijection { left_dim: left.dim(), right_dim: right.dim(), transported_rank })
}

/// Outcome of sampling the two implications behind the Quillen adjunction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SmokeReport {
    pub samples: usize,
    /// `f` surjective.
    pub surjective: usize,
    /// `f` surjective and `j(f)` a fibration.
    pub fibrations_preserved: usize,
    /// `f ∈ E_{0,0}`.
    pub equivalences: usize,
    /// `f ∈ E_{0,0}` and `j(f) ∈ E_{r,s}`.
    pub equivalences_preserved: usize,
}

impl SmokeReport {
    pub fn passed(&self) -> bool {
        self.surjective == self.fibrations_preserved && self.equivalences == self.equivalences_preserved
    }
}

/// Samples bicomplex morphisms `f` and checks that surjective `f` give
/// `(r,s)`-fibrations `j(f)` and that `f ∈ E_{0,0}` gives `j(f) ∈ E_{r,s}`;
/// both hold for `r, s <= 1`.
pub fn quillen_adjunction_smoke(r: usize, s: usize, samples: usize, seed: u64, field: Field) -> Result<SmokeReport> {
    let cfg = SamplerConfig::new(2, field).region(Window::new(0, 3, 0, 3));
    let mut sampler = Sampler::new(seed, cfg);
    let mut report = SmokeReport { samples, ..Default::default() };
    for _ in 0..samples {
        let f = sampler.morphism();
        let jf = j_map(&f)?;
        if f.is_surjective() {
            report.surjective += 1;
            if is_fibration(&jf, r, s)?.holds {
                report.fibrations_preserved += 1;
            }
        }
        if is_weak_equivalence(&f, 0, 0)?.holds {
            report.equivalences += 1;
            if is_weak_equivalence(&jf, r, s)?.holds {
                report.equivalences_preserved += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
