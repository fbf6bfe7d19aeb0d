//! Representing objects: `ZW_k(p,q)`, `ZW_∞(p,q)`, `BW_r(p,q-1)`, the maps
//! `ι_r` between them, and the generating sets of the model structures.

mod cone;
mod presentation;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Word;
use crate::bidegree::{Bidegree, Window};
use crate::field::Field;
use crate::graded::{Graded, GradedMap};
use crate::linalg::Matrix;

pub use cone::{Combination, ConeModule, Elem, Piece, PieceKind};
pub use presentation::{HomSpace, Presentation, PresentationMap, Term};

/// `ZW_k(p,q)`: free on `x` at `(p,q)` for `k = 0`, otherwise witness
/// generators `a_0 … a_{k-1}` with `a_j` at `(p-j, q-j)`.
pub fn zw(n: usize, field: Field, k: usize, at: Bidegree) -> ConeModule {
    ConeModule::new(n, field, vec![zw_piece(k, at, "a")])
}

fn zw_piece(k: usize, at: Bidegree, tag: &str) -> Piece {
    if k == 0 {
        Piece::new(PieceKind::Free, at, "x")
    } else {
        Piece::new(PieceKind::Witness(Some(k)), at, tag)
    }
}

/// The colimit `ZW_∞(p,q)`.
pub fn zw_infinity(n: usize, field: Field, at: Bidegree) -> ConeModule {
    ConeModule::new(n, field, vec![Piece::new(PieceKind::Witness(None), at, "a")])
}

/// Below this many generators, `ZW_s(p,q)` agrees with `ZW_∞(p,q)` at `at`.
pub fn stabilization_bound(base: Bidegree, at: Bidegree) -> usize {
    (base.p - at.p + 2).max(1) as usize
}

/// `BW_r(p, q-1)`, given the bidegree `(p, q-1)` of its middle summand.
pub fn bw(n: usize, field: Field, r: usize, at: Bidegree) -> ConeModule {
    let (p, q) = (at.p, at.q + 1);
    let pieces = match r {
        0 => vec![],
        1 => vec![Piece::new(PieceKind::Free, at, "a")],
        _ => {
            let r_ = r as i64;
            vec![
                Piece::new(PieceKind::Witness(Some(r - 1)), Bidegree::new(p + r_ - 1, q + r_ - 2), "b"),
                Piece::new(PieceKind::Free, at, "a"),
                Piece::new(PieceKind::Witness(Some(r - 1)), Bidegree::new(p - 1, q - 1), "c"),
            ]
        }
    };
    ConeModule::new(n, field, pieces)
}

/// The one-dimensional multicomplex `k(p,q)` as a cone module.
pub fn point(n: usize, field: Field, at: Bidegree) -> ConeModule {
    ConeModule::new(n, field, vec![Piece::new(PieceKind::Point, at, "x")])
}

/// A module map determined by generator images.
pub struct ConeMap {
    source: Arc<ConeModule>,
    target: Arc<ConeModule>,
    /// Images of `(piece, generator)`; missing entries map to zero.
    images: HashMap<(usize, usize), Combination>,
}

impl ConeMap {
    pub fn new(source: Arc<ConeModule>, target: Arc<ConeModule>, images: HashMap<(usize, usize), Combination>) -> Self {
        ConeMap { source, target, images }
    }

    pub fn source_module(&self) -> &Arc<ConeModule> {
        &self.source
    }

    pub fn target_module(&self) -> &Arc<ConeModule> {
        &self.target
    }
}

impl GradedMap for ConeMap {
    fn source(&self) -> &dyn Graded {
        &*self.source
    }

    fn target(&self) -> &dyn Graded {
        &*self.target
    }

    fn block(&self, at: Bidegree) -> Matrix {
        let src = self.source.basis(at);
        let tgt = self.target.basis(at);
        let field = self.source.field();
        let mut m = Matrix::zeros(field, tgt.len(), src.len());
        if tgt.is_empty() {
            return m;
        }
        for (col, e) in src.iter().enumerate() {
            let Some(img) = self.images.get(&(e.piece, e.gen)) else { continue };
            let v = self.target.coordinates(at, &self.target.act(&e.word, img));
            for (row, x) in v.into_iter().enumerate() {
                m.set(row, col, x);
            }
        }
        m
    }
}

fn single(target: &ConeModule, piece: usize, gen: usize, word: &[u8], c: i64) -> Combination {
    let mut out = Combination::new();
    for (e, x) in target.reduce(piece, gen, &Word(word.to_vec())) {
        cone::add_into(&mut out, e, c * x);
    }
    out
}

fn merge(acc: &mut Combination, other: Combination) {
    for (e, c) in other {
        cone::add_into(acc, e, c);
    }
}

/// `ι_r : ZW_r(p,q) -> BW_r(p,q-1)` in both module and presentation form.
pub struct Iota {
    pub map: ConeMap,
    pub presentation: PresentationMap,
}

/// The image of `a_m` as terms `(coeff, letter, target piece, generator)`;
/// piece indices refer to `bw(n, _, r, _)`.
fn iota_terms(n: usize, r: usize, m: usize) -> Vec<(i64, Option<usize>, usize, usize)> {
    let mut out = Vec::new();
    let a_piece = if r == 1 { 0 } else { 1 };
    if m < n {
        out.push((1, Some(m), a_piece, 0));
    }
    if r >= 2 {
        for i in m + 1..=r + m - 1 {
            if i >= n {
                break;
            }
            let sign = if (m + i).is_multiple_of(2) { 1 } else { -1 };
            out.push((sign, Some(i), 0, r + m - 1 - i));
        }
        if m >= 1 {
            out.push((1, None, 2, m - 1));
        }
    }
    out
}

/// `a_m ↦ d_m a + (-1)^m Σ_{i=m+1}^{r+m-1} (-1)^i d_i b_{r+m-1-i} + [m ≥ 1] c_{m-1}`.
pub fn iota(n: usize, field: Field, r: usize, at: Bidegree) -> Iota {
    assert!(r >= 1, "ι_r needs r >= 1");
    let source = Arc::new(zw(n, field, r, at));
    let target = Arc::new(bw(n, field, r, Bidegree::new(at.p, at.q - 1)));
    let src_pres = Presentation::of(&source);
    let tgt_pres = Presentation::of(&target);
    // Flat generator index of (piece, gen) in the target presentation.
    let flat = |piece: usize, gen: usize| -> usize {
        if r == 1 {
            0
        } else {
            match piece {
                0 => gen,
                1 => r - 1,
                _ => r + gen,
            }
        }
    };
    let mut images = HashMap::new();
    let mut pres_images = Vec::new();
    for m in 0..r {
        let mut comb = Combination::new();
        let mut terms = Vec::new();
        for (c, letter, piece, gen) in iota_terms(n, r, m) {
            let word: Vec<u8> = letter.map(|i| vec![i as u8]).unwrap_or_default();
            merge(&mut comb, single(&target, piece, gen, &word, c));
            terms.push(Term::new(c, &word, flat(piece, gen)));
        }
        images.insert((0, m), comb);
        pres_images.push(terms);
    }
    Iota {
        map: ConeMap::new(source, target, images),
        presentation: PresentationMap { source: src_pres, target: tgt_pres, images: pres_images },
    }
}

/// `q_r : ZW_r(0,0) -> k(0,0)`, `a_0 ↦ x`, everything else to zero. With
/// `r = None` this is `π : ZW_∞(0,0) -> k(0,0)`.
pub fn q_projection(n: usize, field: Field, r: Option<usize>) -> ConeMap {
    let source = Arc::new(match r {
        Some(r) => zw(n, field, r, Bidegree::ZERO),
        None => zw_infinity(n, field, Bidegree::ZERO),
    });
    let target = Arc::new(point(n, field, Bidegree::ZERO));
    let mut images = HashMap::new();
    images.insert((0, 0), single(&target, 0, 0, &[], 1));
    ConeMap::new(source, target, images)
}

/// Which spectral sequence a generating map belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::First => "first",
            Side::Second => "second",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "first" | "'" => Ok(Side::First),
            "second" | "''" => Ok(Side::Second),
            _ => Err(crate::error::Error::Parse(format!("unknown side `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GeneratingKind {
    /// `0 -> ZW_k(p,q)`.
    J { k: usize },
    /// `ι_r : ZW_r(p,q) -> BW_r(p,q-1)`.
    I { r: usize },
}

/// A member of `'I`, `'J`, `''I` or `''J`. Second-side maps are involution
/// images: lifting against them is lifting against the first-side map with
/// the same parameters after applying the involution to everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratingMap {
    pub kind: GeneratingKind,
    pub side: Side,
    pub at: Bidegree,
}

impl GeneratingMap {
    fn sort_key(&self) -> (u8, Side, usize, Bidegree) {
        match self.kind {
            GeneratingKind::J { k } => (0, self.side, k, self.at),
            GeneratingKind::I { r } => (1, self.side, r, self.at),
        }
    }

    /// Bidegree of the first-side generator after the involution, i.e. where
    /// the map lives in native coordinates.
    pub fn native_at(&self, n: usize) -> Bidegree {
        match self.side {
            Side::First => self.at,
            Side::Second => self.at.involve(n),
        }
    }
}

impl PartialOrd for GeneratingMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeneratingMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for GeneratingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = match self.side {
            Side::First => "'",
            Side::Second => "''",
        };
        match self.kind {
            GeneratingKind::J { k } => write!(f, "{prime}J: 0 -> ZW_{k}({})", self.at),
            GeneratingKind::I { r } => write!(f, "{prime}I: iota_{r}: ZW_{r}({}) -> BW_{r}", self.at),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GeneratingSets {
    pub cofibrations: Vec<GeneratingMap>,
    pub trivial_cofibrations: Vec<GeneratingMap>,
}

fn first_side(r: usize, side: Side, window: Window) -> (Vec<GeneratingMap>, Vec<GeneratingMap>) {
    let mut i = Vec::new();
    let mut j = Vec::new();
    for at in window.iter() {
        for k in 1..r {
            i.push(GeneratingMap { kind: GeneratingKind::J { k }, side, at });
        }
        i.push(GeneratingMap { kind: GeneratingKind::I { r: r + 1 }, side, at });
        for k in 0..=r {
            j.push(GeneratingMap { kind: GeneratingKind::J { k }, side, at });
        }
    }
    (i, j)
}

/// `I_{r,s} = 'I_r ∪ ''I_s` and `J_{r,s} = 'J_r ∪ ''J_s` with parameters in
/// `window` (first side) and in the involuted window (second side).
pub fn generating_sets(n: usize, r: usize, s: usize, window: Window) -> GeneratingSets {
    let (mut i, mut j) = first_side(r, Side::First, window);
    let (i2, j2) = first_side(s, Side::Second, window.involve(n));
    i.extend(i2);
    j.extend(j2);
    i.sort();
    j.sort();
    GeneratingSets { cofibrations: i, trivial_cofibrations: j }
}

#[cfg(test)]
mod tests;
