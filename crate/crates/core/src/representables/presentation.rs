//! Finite presentations of cone modules and the Hom spaces they corepresent.

use crate::algebra::Word;
use crate::bidegree::Bidegree;
use crate::graded::{act_matrix, Graded};
use crate::linalg::{kernel, Matrix, Subspace};

use super::cone::{ConeModule, PieceKind};

/// `coeff · word · generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub word: Word,
    pub generator: usize,
}

impl Term {
    pub fn new(coeff: i64, word: &[u8], generator: usize) -> Self {
        Term { coeff, word: Word(word.to_vec()), generator }
    }
}

/// Generators with bidegrees, and relations `Σ terms = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub arity: usize,
    pub generators: Vec<(String, Bidegree)>,
    pub relations: Vec<Vec<Term>>,
}

impl Presentation {
    /// Presentation of a cone module with finitely many generators.
    pub fn of(m: &ConeModule) -> Presentation {
        let n = m.arity();
        let mut generators = Vec::new();
        let mut relations = Vec::new();
        for piece in m.pieces() {
            let first = generators.len();
            match piece.kind {
                PieceKind::Free => generators.push((piece.generator_name(0), piece.base)),
                PieceKind::Point => {
                    generators.push((piece.generator_name(0), piece.base));
                    for i in 0..n {
                        relations.push(vec![Term::new(1, &[i as u8], first)]);
                    }
                }
                PieceKind::Witness(Some(k)) => {
                    for j in 0..k {
                        generators.push((piece.generator_name(j), piece.generator_degree(j)));
                    }
                    for u in 0..k {
                        let mut rel = vec![Term::new(1, &[0], first + u)];
                        for j in 1..=u.min(n - 1) {
                            // δ_0 a_u - Σ (-1)^{j+1} δ_j a_{u-j}
                            let sign = if j % 2 == 1 { -1 } else { 1 };
                            rel.push(Term::new(sign, &[j as u8], first + u - j));
                        }
                        relations.push(rel);
                    }
                }
                PieceKind::Witness(None) => {
                    panic!("infinitely generated modules have no finite presentation")
                }
            }
        }
        Presentation { arity: n, generators, relations }
    }

    /// Offsets of each generator's block in the coordinate space of
    /// generator images in `x`.
    pub fn layout(&self, x: &dyn Graded) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.generators.len());
        let mut total = 0;
        for (_, deg) in &self.generators {
            offsets.push(total);
            total += x.rank(*deg);
        }
        (offsets, total)
    }

    /// `Hom(P, X)` as the subspace of generator images satisfying every
    /// relation.
    pub fn hom(&self, x: &dyn Graded) -> HomSpace {
        let (offsets, total) = self.layout(x);
        let field = x.field();
        let mut blocks = Vec::new();
        for rel in &self.relations {
            let Some(first) = rel.first() else { continue };
            let deg = self.generators[first.generator].1 + first.word.bidegree();
            let rows = x.rank(deg);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(field, rows, total);
            for t in rel {
                let at = self.generators[t.generator].1;
                debug_assert_eq!(at + t.word.bidegree(), deg);
                let width = x.rank(at);
                if width == 0 {
                    continue;
                }
                let a = act_matrix(x, &t.word.indices(), at).scale(&field.from_i64(t.coeff));
                m.add_block(0, offsets[t.generator], &a);
            }
            blocks.push(m);
        }
        let space = if blocks.is_empty() {
            Subspace::full(field, total)
        } else {
            kernel(&Matrix::vstack(field, total, &blocks))
        };
        HomSpace { offsets, total, space }
    }

    /// Matrix of `h ↦ (f ∘ h)` on generator-image coordinates.
    pub fn pushforward(&self, f: &dyn crate::graded::GradedMap) -> Matrix {
        let blocks: Vec<Matrix> = self.generators.iter().map(|(_, deg)| f.block(*deg)).collect();
        Matrix::block_diagonal(f.source().field(), &blocks)
    }
}

/// Generator images of all morphisms `P -> X`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub offsets: Vec<usize>,
    pub total: usize,
    pub space: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// A map between presented modules, given by images of source generators as
/// combinations of words on target generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationMap {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<Vec<Term>>,
}

impl PresentationMap {
    /// Matrix of precomposition `Hom(target, X) -> Hom(source, X)` on
    /// generator-image coordinates.
    pub fn pullback(&self, x: &dyn Graded) -> Matrix {
        let (src_off, src_total) = self.source.layout(x);
        let (tgt_off, tgt_total) = self.target.layout(x);
        let field = x.field();
        let mut m = Matrix::zeros(field, src_total, tgt_total);
        for (g, terms) in self.images.iter().enumerate() {
            let g_deg = self.source.generators[g].1;
            if x.rank(g_deg) == 0 {
                continue;
            }
            for t in terms {
                let at = self.target.generators[t.generator].1;
                debug_assert_eq!(at + t.word.bidegree(), g_deg);
                if x.rank(at) == 0 {
                    continue;
                }
                let a = act_matrix(x, &t.word.indices(), at).scale(&field.from_i64(t.coeff));
                m.add_block(src_off[g], tgt_off[t.generator], &a);
            }
        }
        m
    }
}
