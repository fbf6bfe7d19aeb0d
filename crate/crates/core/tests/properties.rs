//! Randomized invariants over seeded samples.

use proptest::prelude::*;

use mspectra::document::{parse_morphism, parse_multicomplex, print_morphism, print_multicomplex};
use mspectra::model::{hom_from_zw, is_weak_equivalence};
use mspectra::random::{Sampler, SamplerConfig};
use mspectra::spectral::{page, witness_cycles, Side};
use mspectra::{Field, Morphism};

fn field(prime: bool) -> Field {
    if prime {
        Field::Prime(5)
    } else {
        Field::Rational
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn witness_cycles_represent_maps_out_of_zw(seed in any::<u64>(), n in 2usize..=4, k in 0usize..=3, prime in any::<bool>()) {
        let a = Sampler::new(seed, SamplerConfig::new(n, field(prime))).multicomplex();
        for at in a.support() {
            prop_assert_eq!(hom_from_zw(&a, k, at), witness_cycles(&a, k, at).dim());
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 2usize..=5, prime in any::<bool>()) {
        let mut s = Sampler::new(seed, SamplerConfig::new(n, field(prime)));
        let a = s.multicomplex();
        let text = print_multicomplex(&a, false);
        prop_assert_eq!(&parse_multicomplex(&text).unwrap().complex, &a);
        let f = s.morphism();
        let text = print_morphism(&f);
        prop_assert_eq!(print_morphism(&parse_morphism(&text, None).unwrap()), text);
    }

    #[test]
    fn pages_are_invariant_under_change_of_basis(seed in any::<u64>(), n in 2usize..=4, r in 0usize..=3) {
        let mut s = Sampler::new(seed, SamplerConfig::new(n, Field::Rational));
        let a = s.multicomplex();
        let iso = s.rebase(&a);
        for side in [Side::First, Side::Second] {
            prop_assert_eq!(page(&a, side, r).unwrap().dims(), page(iso.target_complex(), side, r).unwrap().dims());
        }
        prop_assert!(is_weak_equivalence(&iso, 0, 0).unwrap().holds);
    }

    #[test]
    fn involution_swaps_the_two_spectral_sequences(seed in any::<u64>(), n in 2usize..=4, r in 0usize..=3) {
        let a = Sampler::new(seed, SamplerConfig::new(n, Field::Rational)).multicomplex();
        let b = a.involve();
        prop_assert_eq!(&b.involve(), &a);
        let first: Vec<usize> = page(&a, Side::First, r).unwrap().dims().into_values().collect();
        let mut second: Vec<usize> = page(&b, Side::Second, r).unwrap().dims().into_values().collect();
        let mut first_sorted = first.clone();
        first_sorted.sort();
        second.sort();
        prop_assert_eq!(first_sorted, second);
    }

    #[test]
    fn identity_is_an_equivalence_on_every_page(seed in any::<u64>(), n in 2usize..=4, r in 0usize..=3, s_ in 0usize..=3) {
        let a = Sampler::new(seed, SamplerConfig::new(n, Field::Rational)).multicomplex();
        prop_assert!(is_weak_equivalence(&Morphism::identity(&a), r, s_).unwrap().holds);
    }
}
