use super::*;
use crate::graded::{relation_residuals, strictness_failures};

const Q: Field = Field::Rational;

fn b(p: i64, q: i64) -> Bidegree {
    Bidegree::new(p, q)
}

fn window(center: Bidegree, r: usize) -> Window {
    Window::point(center).inflate(r)
}

#[test]
fn zw_bicomplex_k1_ranks() {
    let m = zw(2, Q, 1, b(0, 0));
    assert_eq!(m.rank(b(0, 0)), 1);
    assert_eq!(m.rank(b(-1, 0)), 1);
    assert_eq!(m.rank(b(0, 1)), 0);
    assert_eq!(m.rank(b(-1, 1)), 0);
    let total: usize = window(b(0, 0), 4).iter().map(|t| m.rank(t)).sum();
    assert_eq!(total, 2);
}

#[test]
fn module_rule_in_low_degree() {
    for n in 2..6 {
        let m = zw(n, Q, 3, b(0, 0));
        // d_0 a_1 = d_1 a_0
        assert_eq!(m.reduce(0, 1, &Word(vec![0])), m.reduce(0, 0, &Word(vec![1])));
        assert!(m.reduce(0, 0, &Word(vec![0])).is_empty());
    }
}

#[test]
fn materialized_windows_satisfy_relations() {
    for n in 2..=4 {
        for k in 0..=4 {
            let m = zw(n, Q, k, b(0, 0));
            for at in window(b(0, 0), 4).iter() {
                assert!(relation_residuals(&m, at).is_empty(), "N={n} k={k} at {at}");
            }
        }
    }
}

#[test]
fn equation_e_holds() {
    for n in 2..=4 {
        for k in 1..=4 {
            let m = zw(n, Q, k, b(1, -1));
            let mut sum = Combination::new();
            for j in 1..=k.min(n - 1) {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                merge(&mut sum, single(&m, 0, k - j, &[j as u8], sign));
            }
            assert!(m.act(&Word(vec![0]), &sum).is_empty(), "N={n} k={k}");
        }
    }
}

#[test]
fn splitting_off_the_last_generator() {
    for n in 2..=4 {
        for k in 1..=4 {
            let big = zw(n, Q, k, b(0, 0));
            let small = zw(n, Q, k - 1, b(0, 0));
            for at in window(b(0, 0), 4).iter() {
                let new = big.basis(at).iter().filter(|e| e.gen == k - 1).count();
                let old = if k == 1 { 0 } else { small.rank(at) };
                assert_eq!(big.rank(at), old + new, "N={n} k={k} at {at}");
            }
        }
    }
}

#[test]
fn zw_infinity_stabilizes() {
    for n in [2, 3, 4] {
        let inf = zw_infinity(n, Q, b(0, 0));
        assert_eq!(inf.rank(b(0, 0)), 1);
        assert_eq!(inf.rank(b(1, 0)), 0);
        for at in window(b(-2, -2), 3).iter() {
            let s = stabilization_bound(b(0, 0), at);
            assert_eq!(inf.rank(at), zw(n, Q, s, b(0, 0)).rank(at));
            assert_eq!(inf.rank(at), zw(n, Q, s + 1, b(0, 0)).rank(at));
        }
    }
}

#[test]
fn bw_generator_counts() {
    assert!(bw(3, Q, 0, b(0, -1)).pieces().is_empty());
    let one = bw(3, Q, 1, b(0, -1));
    assert_eq!(Presentation::of(&one).generators, vec![("a".to_string(), b(0, -1))]);
    assert_eq!(Presentation::of(&bw(3, Q, 2, b(0, -1))).generators.len(), 3);
    assert_eq!(Presentation::of(&bw(3, Q, 4, b(0, -1))).generators.len(), 7);
}

#[test]
fn iota_low_components() {
    assert_eq!(iota_terms(4, 1, 0), vec![(1, Some(0), 0, 0)]);
    assert_eq!(iota_terms(4, 2, 0), vec![(1, Some(0), 1, 0), (-1, Some(1), 0, 0)]);
    assert_eq!(iota_terms(4, 2, 1), vec![(1, Some(1), 1, 0), (-1, Some(2), 0, 0), (1, None, 2, 0)]);
}

#[test]
fn iota_is_strict() {
    for n in 2..=4 {
        for r in 1..=4 {
            let at = b(1, 0);
            let i = iota(n, Q, r, at);
            let pts = window(at, r + 2).bidegrees();
            assert!(strictness_failures(&i.map, pts).is_empty(), "N={n} r={r}");
        }
    }
}

#[test]
fn projections_are_strict_and_surjective_at_base() {
    for n in [2, 4] {
        for r in [Some(1), Some(3), None] {
            let q = q_projection(n, Q, r);
            let pts = window(b(0, 0), 3).bidegrees();
            assert!(strictness_failures(&q, pts).is_empty());
            assert_eq!(q.block(b(0, 0)), Matrix::from_ints(Q, &[&[1]]));
        }
    }
    // δ_1 a_0 lies in the kernel for N = 2, r = 1.
    let q = q_projection(2, Q, Some(1));
    assert_eq!(q.source().rank(b(-1, 0)), 1);
    assert_eq!(q.block(b(-1, 0)).shape(), (0, 1));
}

#[test]
fn generating_set_shapes() {
    let w = Window::point(b(0, 0));
    let g = generating_sets(2, 0, 0, w);
    let first: Vec<_> = g.cofibrations.iter().filter(|m| m.side == Side::First).collect();
    assert_eq!(first.len(), 1);
    assert_eq!(first[0].kind, GeneratingKind::I { r: 1 });
    let j: Vec<_> = g.trivial_cofibrations.iter().filter(|m| m.side == Side::First).collect();
    assert_eq!(j.len(), 1);
    assert_eq!(j[0].kind, GeneratingKind::J { k: 0 });

    let g = generating_sets(2, 3, 1, Window::point(b(2, 1)));
    let second: Vec<_> = g.trivial_cofibrations.iter().filter(|m| m.side == Side::Second).collect();
    assert_eq!(second.len(), 2);
    // For N = 2 the involution is (p,q) ↦ (-q,-p).
    assert_eq!(second[0].at, b(-1, -2));
    let first_i = g.cofibrations.iter().filter(|m| m.side == Side::First).count();
    assert_eq!(first_i, 3);
}
