//! Seeded generators of valid multicomplexes and strict morphisms.
//!
//! A random multicomplex is a quotient of a sum of cone modules (free,
//! witness and point pieces) with generators in a box: everything outside
//! the box is killed, then random vectors are killed until every rank is at
//! most the cap, and finally each bidegree gets a random change of basis.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bidegree::{Bidegree, Window};
use crate::field::{Field, Scalar};
use crate::graded::{Graded, GradedMap};
use crate::linalg::{rank, Matrix, Vector};
use crate::morphism::{kernel_inclusion, Morphism, StrictHom};
use crate::multicomplex::Multicomplex;
use crate::quotient::{Projection, QuotientModule};
use crate::representables::{ConeModule, Piece, PieceKind};

#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub arity: usize,
    pub field: Field,
    /// Support box.
    pub region: Window,
    pub max_rank: usize,
    pub max_generators: usize,
}

impl SamplerConfig {
    pub fn new(arity: usize, field: Field) -> Self {
        SamplerConfig { arity, field, region: Window::new(0, 4, 0, 4), max_rank: 3, max_generators: 3 }
    }

    pub fn region(mut self, region: Window) -> Self {
        self.region = region;
        self
    }

    pub fn max_rank(mut self, max_rank: usize) -> Self {
        self.max_rank = max_rank;
        self
    }

    pub fn max_generators(mut self, max_generators: usize) -> Self {
        self.max_generators = max_generators;
        self
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub config: SamplerConfig,
}

impl Sampler {
    pub fn new(seed: u64, config: SamplerConfig) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), config }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn field(&self) -> Field {
        self.config.field
    }

    pub fn scalar(&mut self) -> Scalar {
        let x = self.rng.gen_range(-3..=3);
        self.field().from_i64(x)
    }

    pub fn vector(&mut self, n: usize) -> Vector {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = self.scalar();
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn invertible(&mut self, n: usize) -> Matrix {
        loop {
            let m = self.matrix(n, n);
            if rank(&m) == n {
                return m;
            }
        }
    }

    fn bidegree_in(&mut self, w: Window) -> Bidegree {
        Bidegree::new(self.rng.gen_range(w.pmin..=w.pmax), self.rng.gen_range(w.qmin..=w.qmax))
    }

    fn piece(&mut self, base: Bidegree, tag: &str) -> Piece {
        let kind = match self.rng.gen_range(0..6) {
            0..=2 => PieceKind::Free,
            3 | 4 => PieceKind::Witness(Some(self.rng.gen_range(1..=3))),
            _ => PieceKind::Point,
        };
        Piece::new(kind, base, tag)
    }

    /// A random valid multicomplex supported in the configured box.
    pub fn multicomplex(&mut self) -> Multicomplex {
        let cfg = self.config;
        let count = self.rng.gen_range(1..=cfg.max_generators.max(1));
        let pieces: Vec<Piece> = (0..count)
            .map(|k| {
                let base = self.bidegree_in(cfg.region);
                self.piece(base, &format!("g{k}"))
            })
            .collect();
        let cone = ConeModule::new(cfg.arity, cfg.field, pieces);
        let mut quotient = QuotientModule::new(cone).keeping(cfg.region);
        let mut points = cfg.region.bidegrees();
        points.sort_by_key(|t| (t.total(), t.p));
        // Occasional extra kills vary the shape beyond the rank cap.
        for &t in &points {
            let n = quotient.inner().rank(t);
            if n > 0 && self.rng.gen_bool(0.15) {
                let v = self.vector(n);
                quotient.kill(t, vec![v]);
            }
        }
        loop {
            let mut changed = false;
            for &t in &points {
                let r = quotient.rank(t);
                if r > cfg.max_rank {
                    let n = quotient.inner().rank(t);
                    let vs = (0..r - cfg.max_rank).map(|_| self.vector(n)).collect();
                    quotient.kill(t, vs);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let plain = Multicomplex::from_graded(&quotient, cfg.region);
        self.rebase(&plain).target_complex().clone()
    }

    /// A random isomorphism out of `a`, by change of basis at every bidegree.
    pub fn rebase(&mut self, a: &Multicomplex) -> Morphism {
        let changes: Vec<(Bidegree, Matrix)> =
            a.support().collect::<Vec<_>>().into_iter().map(|at| (at, self.invertible(a.rank(at)))).collect();
        let mut diffs = Vec::new();
        for ((i, at), d) in a.diff_blocks() {
            let to = *at + Bidegree::of_diff(*i);
            let g_to = &changes.iter().find(|(b, _)| *b == to).expect("target in support").1;
            let g_at = &changes.iter().find(|(b, _)| b == at).expect("source in support").1;
            let g_at_inv = g_at.inverse().expect("invertible");
            diffs.push((*i, *at, g_to.mul(d).mul(&g_at_inv)));
        }
        let target =
            Multicomplex::from_parts(a.arity(), a.field(), a.modules().clone(), diffs).expect("shapes are preserved");
        Morphism::new(a.clone(), target, changes).expect("isomorphism shapes")
    }

    /// A random element of the space of strict morphisms `a -> b`.
    pub fn hom_element(&mut self, a: &Multicomplex, b: &Multicomplex) -> Morphism {
        let hom = StrictHom::new(a, b).expect("same arity and field");
        let field = self.field();
        let mut v = vec![field.zero(); hom.space.ambient_dim()];
        for basis in hom.space.basis().to_vec() {
            let c = self.scalar();
            for (x, y) in v.iter_mut().zip(basis.iter()) {
                *x = x.add(&c.mul(y));
            }
        }
        hom.morphism(&v)
    }

    /// A random proper quotient map out of `a`.
    pub fn projection(&mut self, a: &Multicomplex) -> Morphism {
        let mut q = QuotientModule::new(a.clone());
        let support: Vec<Bidegree> = a.support().collect();
        if let Some(&t) = support.choose(&mut self.rng) {
            let v = self.vector(a.rank(t));
            q.kill(t, vec![v]);
        }
        let target = match a.hull() {
            Some(h) => Multicomplex::from_graded(&q, h),
            None => Multicomplex::zero(a.arity(), a.field()),
        };
        let pi = Projection { quotient: &q };
        let blocks: Vec<_> = support.iter().map(|&at| (at, pi.block(at))).collect();
        Morphism::new(a.clone(), target, blocks).expect("projection shapes")
    }

    /// One of several morphism shapes, chosen at random.
    pub fn morphism(&mut self) -> Morphism {
        let a = self.multicomplex();
        match self.rng.gen_range(0..9) {
            0 => Morphism::identity(&a),
            1 => self.rebase(&a),
            2 | 3 => self.projection(&a),
            4 => kernel_inclusion(&self.projection(&a)),
            5 => {
                let b = self.multicomplex();
                self.hom_element(&a, &b)
            }
            6 => {
                let p = self.projection(&a);
                let iso = self.rebase(p.target_complex());
                p.then(&iso).expect("composable")
            }
            7 => {
                // f ⊕ (X -> 0) or f ⊕ (0 -> X)
                let f = self.projection(&a);
                let x = self.multicomplex();
                let z = Multicomplex::zero(a.arity(), a.field());
                let extra = if self.rng.gen_bool(0.5) {
                    Morphism::zero(&x, &z).expect("zero map")
                } else {
                    Morphism::zero(&z, &x).expect("zero map")
                };
                f.direct_sum(&extra).expect("same arity")
            }
            _ => {
                let x = self.multicomplex();
                let f = self.projection(&a);
                f.direct_sum(&Morphism::identity(&x)).expect("same arity")
            }
        }
    }

    /// A composable pair `a -> b -> c`.
    pub fn composable_pair(&mut self) -> (Morphism, Morphism) {
        let f = self.morphism();
        let g = match self.rng.gen_range(0..4) {
            0 => self.rebase(f.target_complex()),
            1 => self.projection(f.target_complex()),
            2 => Morphism::identity(f.target_complex()),
            _ => {
                let c = self.multicomplex();
                self.hom_element(f.target_complex(), &c)
            }
        };
        (f, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid_and_capped() {
        for n in 2..=4 {
            for field in [Field::Rational, Field::Prime(5)] {
                let cfg = SamplerConfig::new(n, field);
                let mut s = Sampler::new(7 + n as u64, cfg);
                for _ in 0..10 {
                    let a = s.multicomplex();
                    assert!(a.is_valid());
                    assert!(a.modules().values().all(|r| *r <= 3));
                    assert!(a.support().all(|t| cfg.region.contains(t)));
                    let f = s.morphism();
                    assert!(f.is_strict(), "N={n}");
                }
            }
        }
    }

    #[test]
    fn seeds_reproduce() {
        let cfg = SamplerConfig::new(3, Field::Rational);
        let a = Sampler::new(42, cfg).multicomplex();
        let b = Sampler::new(42, cfg).multicomplex();
        assert_eq!(a, b);
    }

    #[test]
    fn samples_are_not_all_trivial() {
        let cfg = SamplerConfig::new(3, Field::Rational);
        let mut s = Sampler::new(1, cfg);
        let nontrivial = (0..20).filter(|_| !s.multicomplex().diff_blocks().is_empty()).count();
        assert!(nontrivial >= 5);
    }
}
