use super::*;
use crate::model::{is_weak_equivalence_in, Scope};
use crate::representables::zw;
use crate::spectral::{page, Side};

const Q: Field = Field::Rational;

fn b(p: i64, q: i64) -> Bidegree {
    Bidegree::new(p, q)
}

fn one() -> Matrix {
    Matrix::from_ints(Q, &[&[1]])
}

fn arrow(n: usize) -> Multicomplex {
    Multicomplex::from_parts(n, Q, [(b(0, 0), 1), (b(0, 1), 1)], [(0, b(0, 0), one())]).unwrap()
}

#[test]
fn regradings_invert() {
    for p in -3..=3 {
        for q_ in -3..=3 {
            let at = b(p, q_);
            assert_eq!(j_source(j_place(at)), at);
            assert_eq!(q_source(q_place(at)), at);
            // j q reads q'(L) at the same bidegree.
            assert_eq!(q_source(j_source(at)), at);
        }
    }
}

#[test]
fn j_of_a_point() {
    let m = Multicomplex::point(2, Q, b(0, 0));
    assert_eq!(j(&m).unwrap(), Multicomplex::point(4, Q, b(0, 0)));
}

#[test]
fn j_of_an_arrow() {
    let jm = j(&arrow(2)).unwrap();
    let expected = Multicomplex::from_parts(4, Q, [(b(0, 0), 1), (b(-1, 0), 1)], [(1, b(0, 0), one())]).unwrap();
    assert_eq!(jm, expected);
    assert!(jm.is_valid());
    assert_eq!(page(&jm, Side::First, 1).unwrap().dims().len(), 2);
    assert!(page(&jm, Side::First, 2).unwrap().is_zero());
}

#[test]
fn q_kills_d0_images() {
    let k = arrow(4);
    assert_eq!(q(&k).unwrap(), Multicomplex::point(2, Q, b(0, 0)));
    assert!(q(&Multicomplex::zero(4, Q)).unwrap().is_zero());
}

#[test]
fn unit_of_k_is_not_an_equivalence() {
    let eta = unit(&arrow(4)).unwrap();
    assert!(eta.is_strict());
    assert!(!is_weak_equivalence(&eta, 1, 1).unwrap().holds);
}

#[test]
fn counit_and_triangles_on_samples() {
    let mut s = Sampler::new(3, SamplerConfig::new(2, Q).region(Window::new(0, 3, 0, 3)));
    let mut s4 = Sampler::new(4, SamplerConfig::new(4, Q).region(Window::new(0, 2, 0, 2)));
    for _ in 0..10 {
        let m = s.multicomplex();
        let l = s4.multicomplex();
        assert!(j(&m).unwrap().is_valid());
        assert!(q(&l).unwrap().is_valid());
        assert_eq!(q(&j(&m).unwrap()).unwrap(), m);
        assert!(unit(&j(&m).unwrap()).unwrap().is_isomorphism());
        assert!(triangle_identities(&l, &m).unwrap());
        assert!(hom_bijection(&l, &m).unwrap().holds());
    }
}

#[test]
fn unit_is_natural_on_samples() {
    let mut s4 = Sampler::new(5, SamplerConfig::new(4, Q).region(Window::new(0, 2, 0, 2)));
    for _ in 0..10 {
        let f = s4.morphism();
        assert!(unit_is_natural(&f).unwrap());
    }
}

#[test]
fn involution_is_preserved() {
    let mut s = Sampler::new(6, SamplerConfig::new(2, Q));
    let mut s4 = Sampler::new(7, SamplerConfig::new(4, Q).region(Window::new(0, 2, 0, 2)));
    for _ in 0..10 {
        let m = s.multicomplex();
        assert_eq!(j(&m.involve()).unwrap(), j(&m).unwrap().involve());
        let l = s4.multicomplex();
        assert_eq!(q(&l.involve()).unwrap(), q(&l).unwrap().involve());
    }
}

#[test]
fn unit_of_witness_cones() {
    for s in 1..=3 {
        let eta = Unit::new(zw(4, Q, s, b(0, 0))).unwrap();
        for radius in [3, 4] {
            let scope = Scope::Window(Window::point(b(0, 0)).inflate(radius));
            assert!(is_weak_equivalence_in(&eta, 1, 1, scope).unwrap().holds, "s={s} radius={radius}");
        }
    }
}

#[test]
fn smoke_identity_and_samples() {
    let report = quillen_adjunction_smoke(1, 1, 20, 11, Q).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.surjective > 0 && report.equivalences > 0);
}
