mod common;

use proptest::prelude::*;

use robustlab::attacks::corner_search_attack;
use robustlab::construction1::{
    exact_adv_loss_ltf, exact_std_loss_ltf, ltf_predict, optimal_ltf_attack, rounding_predict,
    LinearThresholdClassifier, RoundingClassifier,
};
use robustlab::construction2::{
    decode_z, encode, robust_classify, simple_classify, z_from_hex, z_to_hex, C2Params,
};
use robustlab::estimate::LossEstimate;
use robustlab::Label;

fn signs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1.0 } else { -1.0 }), n)
}

fn label() -> impl Strategy<Value = Label> {
    prop::bool::ANY.prop_map(|b| if b { Label::PLUS } else { Label::MINUS })
}

fn nonzero_weights(max_n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..=max_n).prop_filter("some weight nonzero", |w| w.iter().any(|&v| v != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_attack_matches_corner_search(
        (w, x) in nonzero_weights(10).prop_flat_map(|w| { let n = w.len(); (Just(w), signs(n)) }),
        y in label(),
        eps in prop::sample::select(vec![0.1, 0.5, 0.9]),
    ) {
        let c = LinearThresholdClassifier::from_integers(&w).unwrap();
        let closed = optimal_ltf_attack(&c, &x, y, eps).unwrap();
        let brute = corner_search_attack(&c, &x, y, eps, 12).unwrap();
        prop_assert_eq!(closed.success, brute.success);
        let moved: Vec<f64> = x.iter().zip(&closed.delta).map(|(a, d)| a + d).collect();
        prop_assert_eq!(ltf_predict(&c, &moved).unwrap() != y, closed.success);
        prop_assert!(closed.delta.iter().all(|d| d.abs() <= eps));
    }

    #[test]
    fn exact_losses_match_enumeration(
        w in nonzero_weights(7),
        eps in prop::sample::select(vec![0.25, 0.5, 0.75]),
        p in prop::sample::select(vec![0.51, 0.6, 0.8]),
    ) {
        let c = LinearThresholdClassifier::from_integers(&w).unwrap();
        let wf: Vec<f64> = w.iter().map(|&v| v as f64).collect();
        let (std, adv) = common::enumerate_ltf(&wf, p, eps);
        prop_assert!((exact_std_loss_ltf(&c, p).unwrap().value - std).abs() < 1e-10);
        prop_assert!((exact_adv_loss_ltf(&c, p, eps).unwrap().value - adv).abs() < 1e-10);
    }

    #[test]
    fn adversarial_loss_dominates_and_grows(w in nonzero_weights(12), e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let c = LinearThresholdClassifier::from_integers(&w).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let std = exact_std_loss_ltf(&c, 0.51).unwrap().value;
        let a_lo = exact_adv_loss_ltf(&c, 0.51, lo).unwrap().value;
        let a_hi = exact_adv_loss_ltf(&c, 0.51, hi).unwrap().value;
        prop_assert!(std <= a_lo + 1e-12);
        prop_assert!(a_lo <= a_hi + 1e-12);
    }

    #[test]
    fn rounding_attack_succeeds_iff_majority_wrong(x in (1usize..=8).prop_flat_map(signs), y in label(), eps in 0.01f64..0.999) {
        let out = corner_search_attack(&RoundingClassifier, &x, y, eps, 12).unwrap();
        let majority = LinearThresholdClassifier::majority(x.len()).unwrap();
        prop_assert_eq!(out.success, ltf_predict(&majority, &x).unwrap() != y);
        prop_assert_eq!(rounding_predict(&x).unwrap(), ltf_predict(&majority, &x).unwrap());
    }

    #[test]
    fn encoding_decodes(
        (z, a, b) in (1usize..=12).prop_flat_map(|n| (
            prop::collection::vec(prop::bool::ANY, n),
            prop::collection::vec(0.0f64..1.0, n),
            prop::collection::vec(0.0f64..1.0, n),
        )),
        key_seed in 0u64..1000,
        eps in 0.01f64..0.124,
        noise in prop::collection::vec(-1.0f64..=1.0, 48),
    ) {
        let n = z.len();
        let params = C2Params::with_seeded_oracle(n, eps, key_seed).unwrap();
        let ex = encode(&params, &z, &a, &b).unwrap();
        let g = params.oracle.eval(&z).unwrap();
        let x = ex.x();
        prop_assert_eq!(x.len(), 4 * n);
        prop_assert_eq!(decode_z(&ex.beta), z.clone());
        prop_assert_eq!(simple_classify(&x, eps).unwrap(), Label::from_bit(g));
        let moved: Vec<f64> = x.iter().zip(&noise).map(|(v, u)| v + eps * u).collect();
        prop_assert_eq!(robust_classify(&moved, &params.oracle).unwrap(), Label::from_bit(g));
        prop_assert_eq!(z_from_hex(&z_to_hex(&z), n).unwrap(), z);
    }

    #[test]
    fn estimate_interval_brackets_value(errors in 0u64..=1000, extra in 0u64..100_000, conf in 0.5f64..0.999) {
        let m = errors + extra.max(1);
        let e = LossEstimate::from_counts(errors, m, conf).unwrap();
        prop_assert!(e.lower() <= e.value && e.value <= e.upper());
        prop_assert!(0.0 <= e.lower() && e.upper() <= 1.0);
        prop_assert!(e.contains(e.value));
    }
}
