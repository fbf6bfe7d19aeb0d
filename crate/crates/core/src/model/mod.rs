//! Membership in the classes of the model structures `(N-mult)_{r,s}`:
//! weak equivalences, fibrations, and lifting against generating maps.

use serde::Serialize;

use crate::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};
use crate::graded::{Extent, Graded, GradedMap, InvolutedMap};
use crate::linalg::{kernel, Matrix, Subspace, Vector};
use crate::parallel::par_map;
use crate::representables::{generating_sets, iota, zw, GeneratingKind, GeneratingMap, Presentation, Side};
use crate::spectral::{induced_page_map, map_points};

/// A page and bidegree where an induced map fails to be bijective (weak
/// equivalence) or surjective (fibration). `at` is native.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Certificate {
    pub side: Side,
    pub page: usize,
    pub at: Bidegree,
}

/// A yes/no answer with the failures that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    fn from_failures(mut certificates: Vec<Certificate>) -> Self {
        certificates.sort();
        Verdict { holds: certificates.is_empty(), certificates }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub is_weak_equivalence: bool,
    pub is_fibration: bool,
    pub weak_equivalence_certificates: Vec<Certificate>,
    pub fibration_certificates: Vec<Certificate>,
}

/// Which native bidegrees a check visits.
#[derive(Clone, Copy, Debug)]
pub enum Scope {
    /// The support hull of source and target, inflated per page.
    Hull,
    /// A fixed native window, for objects with infinite support.
    Window(Window),
}

impl Scope {
    fn points(&self, f: &dyn GradedMap, side: Side, page: usize) -> Vec<Bidegree> {
        match self {
            Scope::Hull => map_points(f, side, page),
            Scope::Window(w) => w.bidegrees(),
        }
    }
}

fn check_pages(
    f: &dyn GradedMap,
    side: Side,
    pages: impl Iterator<Item = usize>,
    scope: Scope,
    test: impl Fn(&crate::spectral::PageMap) -> bool,
) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for page in pages {
        for (at, m) in induced_page_map(f, side, page, scope.points(f, side, page))? {
            if !test(&m) {
                out.push(Certificate { side, page, at });
            }
        }
    }
    Ok(out)
}

fn require_finite(f: &dyn GradedMap) -> Result<()> {
    match f.source().extent().union(f.target().extent()) {
        Extent::Unbounded => Err(Error::Unsupported("infinite support needs an explicit window".into())),
        _ => Ok(()),
    }
}

/// `f ∈ E_{r,s}`: isomorphism on `'E_{r+1}` and on `''E_{s+1}`.
pub fn is_weak_equivalence(f: &dyn GradedMap, r: usize, s: usize) -> Result<Verdict> {
    require_finite(f)?;
    is_weak_equivalence_in(f, r, s, Scope::Hull)
}

pub fn is_weak_equivalence_in(f: &dyn GradedMap, r: usize, s: usize, scope: Scope) -> Result<Verdict> {
    let mut fails = check_pages(f, Side::First, std::iter::once(r + 1), scope, |m| m.is_isomorphism())?;
    fails.extend(check_pages(f, Side::Second, std::iter::once(s + 1), scope, |m| m.is_isomorphism())?);
    Ok(Verdict::from_failures(fails))
}

/// Only the first-side half of [`is_weak_equivalence_in`].
pub fn is_first_side_equivalence_in(f: &dyn GradedMap, r: usize, scope: Scope) -> Result<Verdict> {
    let fails = check_pages(f, Side::First, std::iter::once(r + 1), scope, |m| m.is_isomorphism())?;
    Ok(Verdict::from_failures(fails))
}

/// Surjective on `'E_i` for `i <= r` and on `''E_j` for `j <= s`.
pub fn is_fibration(f: &dyn GradedMap, r: usize, s: usize) -> Result<Verdict> {
    require_finite(f)?;
    is_fibration_in(f, r, s, Scope::Hull)
}

pub fn is_fibration_in(f: &dyn GradedMap, r: usize, s: usize, scope: Scope) -> Result<Verdict> {
    let mut fails = check_pages(f, Side::First, 0..=r, scope, |m| m.is_surjective())?;
    fails.extend(check_pages(f, Side::Second, 0..=s, scope, |m| m.is_surjective())?);
    Ok(Verdict::from_failures(fails))
}

pub fn classify(f: &dyn GradedMap, r: usize, s: usize) -> Result<ClassVerdict> {
    let we = is_weak_equivalence(f, r, s)?;
    let fib = is_fibration(f, r, s)?;
    Ok(ClassVerdict {
        is_weak_equivalence: we.holds,
        is_fibration: fib.holds,
        weak_equivalence_certificates: we.certificates,
        fibration_certificates: fib.certificates,
    })
}

fn span_of(field: crate::field::Field, dim: usize, m: &Matrix, basis: &Matrix) -> Subspace {
    Subspace::span(field, dim, m.mul(basis).columns())
}

/// Right lifting property of `f` against one generating map.
///
/// `0 -> ZW_k(p,q)` lifts iff `f` is onto on generator images satisfying the
/// relations, i.e. on `Hom(ZW_k(p,q), -)`. For `ι : Z -> W`, every square
/// `(u, v)` with `f u = v ι` must be `(h ι, f h)` for some `h : W -> A`.
pub fn has_rlp(f: &dyn GradedMap, g: &GeneratingMap) -> bool {
    match g.side {
        Side::First => lifts(f, g.kind, g.at),
        Side::Second => lifts(&InvolutedMap::new(f), g.kind, g.at),
    }
}

fn lifts(f: &dyn GradedMap, kind: GeneratingKind, at: Bidegree) -> bool {
    let (a, b) = (f.source(), f.target());
    let n = a.arity();
    let field = a.field();
    match kind {
        GeneratingKind::J { k } => {
            let pres = Presentation::of(&zw(n, field, k, at));
            let ha = pres.hom(a);
            let hb = pres.hom(b);
            if hb.dim() == 0 {
                return true;
            }
            let pushed = span_of(field, hb.total, &pres.pushforward(f), &ha.space.basis_matrix());
            pushed.dim() == hb.dim()
        }
        GeneratingKind::I { r } => {
            let i = iota(n, field, r, at);
            let (pz, pw) = (&i.presentation.source, &i.presentation.target);
            let hza = pz.hom(a);
            let hwb = pw.hom(b);
            if hza.dim() == 0 && hwb.dim() == 0 {
                return true;
            }
            let hwa = pw.hom(a);
            let bu = hza.space.basis_matrix();
            let bv = hwb.space.basis_matrix();
            let bh = hwa.space.basis_matrix();
            // Squares: f∘u - v∘ι = 0 in Hom(Z, B) coordinates.
            let fu = pz.pushforward(f).mul(&bu);
            let vi = i.presentation.pullback(b).mul(&bv);
            let hzb_total = fu.rows();
            let system = Matrix::hstack(field, hzb_total, &[fu, vi.neg()]);
            let total = hza.total + hwb.total;
            let sq = kernel(&system);
            let squares: Vec<Vector> = sq
                .basis()
                .iter()
                .map(|xy| {
                    let (x, y) = xy.split_at(bu.cols());
                    let mut out = bu.mul_vec(x);
                    out.extend(bv.mul_vec(y));
                    out
                })
                .collect();
            let squares = Subspace::span(field, total, squares);
            if squares.is_zero() {
                return true;
            }
            let top = i.presentation.pullback(a).mul(&bh);
            let bottom = pw.pushforward(f).mul(&bh);
            let lifted = Matrix::vstack(field, bh.cols(), &[top, bottom]);
            let lifted = Subspace::span(field, total, lifted.columns());
            lifted.contains_subspace(&squares)
        }
    }
}

/// Native window over which generating parameters are quantified: outside
/// it every Hom space in a lifting problem vanishes.
pub fn rlp_window(f: &dyn GradedMap, r: usize, s: usize) -> Option<Window> {
    f.source().extent().union(f.target().extent()).window().map(|w| w.inflate(r.max(s) + 2))
}

/// Generating maps in `maps` against which `f` fails to lift, sorted.
pub fn rlp_failures(f: &dyn GradedMap, maps: &[GeneratingMap]) -> Vec<GeneratingMap> {
    let ok = par_map(maps.to_vec(), |g| (g, has_rlp(f, &g)));
    ok.into_iter().filter(|(_, ok)| !ok).map(|(g, _)| g).collect()
}

/// Two independent routes to the same class membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub by_lifting: bool,
    pub by_pages: bool,
    pub agree: bool,
    /// Generating maps without a lift.
    pub failing_maps: Vec<String>,
    pub certificates: Vec<Certificate>,
}

fn cross(by_lifting: Vec<GeneratingMap>, by_pages: Vec<Certificate>) -> CrossCheck {
    let l = by_lifting.is_empty();
    let p = by_pages.is_empty();
    CrossCheck {
        by_lifting: l,
        by_pages: p,
        agree: l == p,
        failing_maps: by_lifting.iter().map(|g| g.to_string()).collect(),
        certificates: by_pages,
    }
}

/// RLP against `I_{r,s}` versus fibration and weak equivalence.
pub fn acyclic_fibration_crosscheck(f: &dyn GradedMap, r: usize, s: usize) -> Result<CrossCheck> {
    require_finite(f)?;
    let maps = match rlp_window(f, r, s) {
        Some(w) => generating_sets(f.source().arity(), r, s, w).cofibrations,
        None => Vec::new(),
    };
    let mut pages = is_fibration(f, r, s)?.certificates;
    pages.extend(is_weak_equivalence(f, r, s)?.certificates);
    pages.sort();
    Ok(cross(rlp_failures(f, &maps), pages))
}

/// RLP against `J_{r,s}` versus fibration.
pub fn fibration_crosscheck(f: &dyn GradedMap, r: usize, s: usize) -> Result<CrossCheck> {
    require_finite(f)?;
    let maps = match rlp_window(f, r, s) {
        Some(w) => generating_sets(f.source().arity(), r, s, w).trivial_cofibrations,
        None => Vec::new(),
    };
    Ok(cross(rlp_failures(f, &maps), is_fibration(f, r, s)?.certificates))
}

/// Dimension of `Hom(ZW_k(p,q), A)` from the presentation, for comparing
/// against witness cycles.
pub fn hom_from_zw(a: &dyn Graded, k: usize, at: Bidegree) -> usize {
    Presentation::of(&zw(a.arity(), a.field(), k, at)).hom(a).dim()
}
