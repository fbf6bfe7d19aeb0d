use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::algebra::{self, RewriteSystem, Word};
use crate::bidegree::Bidegree;
use crate::field::Field;
use crate::graded::{Extent, Graded};
use crate::linalg::Matrix;

/// Shape of one summand of a cone module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceKind {
    /// Free on one generator `x` (the representing object of `A ↦ A^{p,q}`).
    Free,
    /// Witness generators `a_0, a_1, …` with `a_j` at `base - (j, j)`, subject
    /// to `δ_0 a_u = Σ_{j=1}^{u} (-1)^{j+1} δ_j a_{u-j}`. `None` means
    /// infinitely many generators.
    Witness(Option<usize>),
    /// One-dimensional, all structure maps zero.
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub kind: PieceKind,
    pub base: Bidegree,
    /// Generator name prefix, e.g. `a`, `b`, `x`.
    pub tag: String,
}

impl Piece {
    pub fn new(kind: PieceKind, base: Bidegree, tag: &str) -> Self {
        Piece { kind, base, tag: tag.to_string() }
    }

    pub fn generator_degree(&self, j: usize) -> Bidegree {
        self.base.down(j)
    }

    /// Generator indices that can contribute at `at`: words never raise `p`.
    fn generators_at(&self, at: Bidegree) -> std::ops::Range<usize> {
        let reach = self.base.p - at.p;
        if reach < 0 {
            return 0..0;
        }
        match self.kind {
            PieceKind::Free | PieceKind::Point => 0..1,
            PieceKind::Witness(Some(k)) => 0..k.min(reach as usize + 1),
            PieceKind::Witness(None) => 0..reach as usize + 1,
        }
    }

    pub fn generator_name(&self, j: usize) -> String {
        match self.kind {
            PieceKind::Witness(_) => format!("{}{}", self.tag, j),
            _ => self.tag.clone(),
        }
    }
}

/// Basis element `word · g_{gen}` of a piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub piece: usize,
    pub gen: usize,
    pub word: Word,
}

/// Integer combination of basis elements.
pub type Combination = BTreeMap<Elem, i64>;

pub(crate) fn add_into(acc: &mut Combination, e: Elem, c: i64) {
    if c == 0 {
        return;
    }
    let x = acc.entry(e.clone()).or_insert(0);
    *x += c;
    if *x == 0 {
        acc.remove(&e);
    }
}

/// A direct sum of free, witness and point pieces over `A_N`, materialized one
/// bidegree at a time and memoized.
pub struct ConeModule {
    arity: usize,
    field: Field,
    pieces: Vec<Piece>,
    bases: RwLock<HashMap<Bidegree, Arc<Vec<Elem>>>>,
    diffs: RwLock<HashMap<(usize, Bidegree), Matrix>>,
}

impl std::fmt::Debug for ConeModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConeModule")
            .field("arity", &self.arity)
            .field("field", &self.field)
            .field("pieces", &self.pieces)
            .finish()
    }
}

impl ConeModule {
    pub fn new(arity: usize, field: Field, pieces: Vec<Piece>) -> Self {
        ConeModule { arity, field, pieces, bases: RwLock::new(HashMap::new()), diffs: RwLock::new(HashMap::new()) }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Basis at `at`, ordered by piece, generator, then word.
    pub fn basis(&self, at: Bidegree) -> Arc<Vec<Elem>> {
        if let Some(b) = self.bases.read().expect("basis cache").get(&at) {
            return b.clone();
        }
        let mut out = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            for j in piece.generators_at(at) {
                let rel = at - piece.generator_degree(j);
                match piece.kind {
                    PieceKind::Point => {
                        if rel == Bidegree::ZERO {
                            out.push(Elem { piece: pi, gen: 0, word: Word::empty() });
                        }
                    }
                    PieceKind::Free => {
                        for w in algebra::basis(self.arity, rel) {
                            out.push(Elem { piece: pi, gen: j, word: w });
                        }
                    }
                    PieceKind::Witness(_) => {
                        for w in algebra::basis(self.arity, rel) {
                            if w.letters().last() != Some(&0) {
                                out.push(Elem { piece: pi, gen: j, word: w });
                            }
                        }
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.bases.write().expect("basis cache").insert(at, out.clone());
        out
    }

    pub fn degree_of(&self, e: &Elem) -> Bidegree {
        self.pieces[e.piece].generator_degree(e.gen) + e.word.bidegree()
    }

    /// Rewrites `word · g_{gen}` (any word) into basis elements.
    pub fn reduce(&self, piece: usize, gen: usize, word: &Word) -> Combination {
        let sys = RewriteSystem::get(self.arity);
        let mut acc = Combination::new();
        for (w, c) in sys.normal_form_word(word).terms() {
            self.reduce_normal(sys, piece, gen, w, c, &mut acc);
        }
        acc
    }

    fn reduce_normal(&self, sys: &RewriteSystem, piece: usize, gen: usize, w: &Word, c: i64, acc: &mut Combination) {
        match self.pieces[piece].kind {
            PieceKind::Point => {
                if w.is_empty() {
                    add_into(acc, Elem { piece, gen: 0, word: w.clone() }, c);
                }
            }
            PieceKind::Free => add_into(acc, Elem { piece, gen, word: w.clone() }, c),
            PieceKind::Witness(_) => {
                let letters = w.letters();
                if letters.last() != Some(&0) {
                    add_into(acc, Elem { piece, gen, word: w.clone() }, c);
                    return;
                }
                // w = w'' δ_0 and δ_0 a_j = Σ_{t=1}^{j} (-1)^{t+1} δ_t a_{j-t}
                let stem = &letters[..letters.len() - 1];
                for t in 1..=gen.min(self.arity - 1) {
                    let sign = if t % 2 == 1 { 1 } else { -1 };
                    let mut v = stem.to_vec();
                    v.push(t as u8);
                    for (u, x) in sys.normal_form_word(&Word(v)).terms() {
                        self.reduce_normal(sys, piece, gen - t, u, c * sign * x, acc);
                    }
                }
            }
        }
    }

    /// `word · combination`, reduced.
    pub fn act(&self, word: &Word, comb: &Combination) -> Combination {
        let mut acc = Combination::new();
        for (e, c) in comb {
            for (f, x) in self.reduce(e.piece, e.gen, &word.concat(&e.word)) {
                add_into(&mut acc, f, c * x);
            }
        }
        acc
    }

    /// Coordinates of a combination living in bidegree `at`.
    pub fn coordinates(&self, at: Bidegree, comb: &Combination) -> Vec<crate::field::Scalar> {
        let basis = self.basis(at);
        let mut v = vec![self.field.zero(); basis.len()];
        for (e, c) in comb {
            let k = basis.binary_search(e).unwrap_or_else(|_| panic!("{e:?} is not a basis element at {at}"));
            v[k] = self.field.from_i64(*c);
        }
        v
    }

    pub fn element_name(&self, e: &Elem) -> String {
        let g = self.pieces[e.piece].generator_name(e.gen);
        if e.word.is_empty() {
            g
        } else {
            format!("{}*{}", e.word, g)
        }
    }
}

impl Graded for ConeModule {
    fn arity(&self) -> usize {
        self.arity
    }

    fn field(&self) -> Field {
        self.field
    }

    fn rank(&self, at: Bidegree) -> usize {
        self.basis(at).len()
    }

    fn diff(&self, i: usize, at: Bidegree) -> Matrix {
        if let Some(m) = self.diffs.read().expect("diff cache").get(&(i, at)) {
            return m.clone();
        }
        let to = at + Bidegree::of_diff(i);
        let src = self.basis(at);
        let tgt = self.basis(to);
        let mut m = Matrix::zeros(self.field, tgt.len(), src.len());
        if i < self.arity && !src.is_empty() && !tgt.is_empty() {
            let letter = Word(vec![i as u8]);
            for (col, e) in src.iter().enumerate() {
                for (f, c) in self.reduce(e.piece, e.gen, &letter.concat(&e.word)) {
                    let row = tgt.binary_search(&f).expect("image lies in target basis");
                    m.set(row, col, self.field.from_i64(c));
                }
            }
        }
        self.diffs.write().expect("diff cache").insert((i, at), m.clone());
        m
    }

    fn extent(&self) -> Extent {
        if self.pieces.is_empty() {
            Extent::Empty
        } else {
            Extent::Unbounded
        }
    }
}
