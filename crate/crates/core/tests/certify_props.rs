use proptest::prelude::*;

use anosov_core::certify::{gap_profile, gap_profile_with_budget, qi_profile, Verdict, DEFAULT_SLOPE_THRESHOLD, LABEL};
use anosov_core::reps::{schottky_sl2r, tensor_rep};
use anosov_core::words::ball_size;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn profiles_are_exhaustive_and_deterministic(spread in 2.0f64..6.0, radius in 2usize..=5) {
        let r = schottky_sl2r(2, spread).unwrap();
        let p = gap_profile(&r, 1, radius, DEFAULT_SLOPE_THRESHOLD).unwrap();
        prop_assert_eq!(&p.label, LABEL);
        prop_assert_eq!(p.samples.len(), radius);
        prop_assert_eq!(p.samples.iter().map(|s| s.words as u128).sum::<u128>(), ball_size(2, radius) - 1);
        prop_assert!(p.samples.iter().all(|s| s.min <= s.max));
        prop_assert_eq!(gap_profile(&r, 1, radius, DEFAULT_SLOPE_THRESHOLD).unwrap(), p);
    }

    #[test]
    fn extending_the_radius_extends_the_samples(spread in 2.0f64..6.0, radius in 2usize..=4) {
        let r = schottky_sl2r(2, spread).unwrap();
        let short = gap_profile(&r, 1, radius, DEFAULT_SLOPE_THRESHOLD).unwrap();
        let long = gap_profile(&r, 1, radius + 1, DEFAULT_SLOPE_THRESHOLD).unwrap();
        prop_assert_eq!(&long.samples[..radius], &short.samples[..]);
        // A pass may only turn into a fail with a logged relabel.
        let passes_then_fails = long.verdict_by_radius.windows(2).any(|w| w[0].1 == Verdict::Pass && w[1].1 == Verdict::Fail);
        prop_assert_eq!(passes_then_fails, !long.relabels.is_empty());
    }

    #[test]
    fn qi_bounds_are_ordered(s1 in 2.0f64..5.0, s2 in 2.0f64..5.0) {
        let t = tensor_rep(&schottky_sl2r(2, s1).unwrap(), &schottky_sl2r(2, s2).unwrap()).unwrap();
        let q = qi_profile(&t, 4, DEFAULT_SLOPE_THRESHOLD).unwrap();
        prop_assert!(q.samples.iter().all(|s| s.min <= s.max && s.min >= -1e-9));
        prop_assert_eq!(q.verdict, Verdict::Pass);
        let (j, k) = (q.j.unwrap(), q.k.unwrap());
        for s in &q.samples {
            let l = s.length as f64;
            prop_assert!(l / j - k.ln() <= s.min + 1e-9 && s.max <= j * l + k.ln() + 1e-9);
        }
    }
}

#[test]
fn budget_truncation_is_inconclusive() {
    let r = schottky_sl2r(3, 4.0).unwrap();
    let p = gap_profile_with_budget(&r, 1, 6, DEFAULT_SLOPE_THRESHOLD, 1000).unwrap();
    assert_eq!(p.verdict, Verdict::Inconclusive);
    assert!(p.radius < 6);
    assert!(gap_profile(&r, 2, 3, DEFAULT_SLOPE_THRESHOLD).is_err());
}
