use proptest::prelude::*;
use sesqui::dist::{self, Dist, SubDist};
use sesqui::random;
use sesqui::Rational;

fn subdist() -> impl Strategy<Value = SubDist<usize>> {
    (any::<u64>(), 1usize..=4, 1u64..=64).prop_map(|(seed, n, d)| random::subdist(&mut random::rng(seed), n, d))
}

fn maybe_dist() -> impl Strategy<Value = Option<Dist<usize>>> {
    (any::<u64>(), 1usize..=4, 1u64..=64).prop_map(|(seed, n, d)| random::maybe_dist(&mut random::rng(seed), n, d))
}

fn total(s: &SubDist<(usize, usize)>) -> Rational {
    s.iter().map(|(_, w)| w.clone()).sum::<Rational>() + s.bottom()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn include_then_normalize_is_idempotent(s in subdist()) {
        let once = dist::normalize(&s);
        prop_assert_eq!(dist::normalize(&dist::include(&once)), once);
    }

    #[test]
    fn both_backward_maps_are_sections(m in maybe_dist()) {
        prop_assert_eq!(dist::normalize(&dist::include(&m)), m.clone());
        prop_assert_eq!(dist::cast_blackhole(&dist::include(&m)), m);
    }

    #[test]
    fn tensor_conserves_mass(a in subdist(), b in subdist()) {
        prop_assert!(total(&a.tensor(&b)).is_one());
    }

    #[test]
    fn normalization_commutes_with_tensor(a in subdist(), b in subdist()) {
        prop_assert_eq!(
            dist::normalize(&dist::tensor_sub(&a, &b)),
            dist::tensor_maybe(&dist::normalize(&a), &dist::normalize(&b))
        );
    }

    #[test]
    fn normalize_fails_exactly_without_mass(s in subdist()) {
        prop_assert_eq!(dist::normalize(&s).is_none(), s.mass().is_zero());
        prop_assert_eq!(dist::cast_blackhole(&s).is_none(), !s.is_total());
    }

    #[test]
    fn normalized_weights_are_proportional(s in subdist()) {
        if let Some(d) = dist::normalize(&s) {
            let mass = s.mass();
            for (a, w) in s.iter() {
                prop_assert_eq!(d.weight(a), w / &mass);
            }
        }
    }

    #[test]
    fn option_dist_round_trip(s in subdist()) {
        prop_assert_eq!(SubDist::from_option_dist(&s.to_option_dist()), s);
    }
}
