use std::collections::BTreeMap;

use proptest::prelude::*;

use anosov_core::linalg::{exterior_power, kronecker, SquareMatrix};
use anosov_core::reps::{build_named, schottky_sl2r, tensor_rep, RepSpec};
use anosov_core::words::{Letter, Word};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len).prop_map(|ranks| Word::reduce(ranks.into_iter().map(Letter::from_rank)))
}

fn close(a: &SquareMatrix, b: &SquareMatrix, rel: f64) -> bool {
    a.approx_eq(b, rel * a.max_abs().max(b.max_abs()).max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_is_a_homomorphism(spread in 2.0f64..6.0, u in word(2, 5), v in word(2, 5)) {
        let r = schottky_sl2r(2, spread).unwrap();
        prop_assert!(r.homomorphism_defect(&u, &v) < 1e-13);
        let id = r.eval(&u.mul(&u.inverse()));
        prop_assert!(close(&id, &SquareMatrix::identity(2), 1e-15));
    }

    #[test]
    fn json_round_trip_keeps_every_bit(spread in 5.0f64..8.0, rank in 2usize..=4) {
        let r = schottky_sl2r(rank, spread).unwrap();
        let back = RepSpec::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), r.to_json());
        prop_assert_eq!(back.images(), r.images());
    }

    #[test]
    fn exterior_rep_evaluates_to_exterior_powers(spread in 2.0f64..5.0, u in word(2, 4)) {
        let base = tensor_rep(&schottky_sl2r(2, spread).unwrap(), &schottky_sl2r(2, spread + 1.0).unwrap()).unwrap();
        let e = base.exterior(2).unwrap();
        // Minors of the double-double product: minors of the rounded
        // double product lose too much to cancellation to serve as oracle.
        let oracle = base.eval_precise(&u).exterior_power(2).to_matrix().unwrap();
        prop_assert!(close(&e.eval(&u), &oracle, 1e-13));
        prop_assert!(close(&exterior_power(&base.eval(&Word::empty()), 2).unwrap(), &e.eval(&Word::empty()), 0.0));
    }

    #[test]
    fn tensor_evaluates_to_kronecker(s1 in 2.0f64..5.0, s2 in 2.0f64..5.0, u in word(2, 4)) {
        let (a, b) = (schottky_sl2r(2, s1).unwrap(), schottky_sl2r(2, s2).unwrap());
        let t = tensor_rep(&a, &b).unwrap();
        prop_assert_eq!(t.tensor_factors, Some((2, 2)));
        prop_assert!(close(&t.eval(&u), &kronecker(&a.eval(&u), &b.eval(&u)).unwrap(), 1e-12));
    }

    #[test]
    fn pattern_builds_are_reproducible(n in prop::sample::select(vec![5.0, 7.0]), s in -6.0f64..-2.0, seed in 0u64..4) {
        let params: BTreeMap<String, f64> = [("n".to_string(), n), ("s".to_string(), s)].into();
        let a = build_named("thm41_pattern", &params, seed).unwrap();
        let b = build_named("thm41_pattern", &params, seed).unwrap();
        prop_assert_eq!(a.rep.to_json(), b.rep.to_json());
        prop_assert_eq!(a.manifest_json(), b.manifest_json());
        prop_assert_eq!(a.rep.dim(), 3 * n as usize);
        prop_assert!(a.manifest.gates.iter().all(|g| g.passes));
    }
}

#[test]
fn bad_gates_are_reported() {
    let params: BTreeMap<String, f64> = [("n".to_string(), 6.0)].into();
    assert!(build_named("thm41_pattern", &params, 0).is_err());
    let params: BTreeMap<String, f64> = [("x".to_string(), 2.0)].into();
    let err = build_named("thm1ii_d12", &params, 7).unwrap_err().to_string();
    assert!(err.contains("fails"), "{err}");
}
