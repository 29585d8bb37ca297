//! Checks on the reference computations used by the acceptance gate.

mod common;

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn binomial_pmf_normalized_with_right_mean() {
    for (n, p) in [(1, 0.51), (11, 0.51), (2001, 0.51), (40, 0.9)] {
        let pmf = common::binomial_pmf(n, p);
        let total: f64 = pmf.iter().sum();
        let mean: f64 = pmf.iter().enumerate().map(|(j, m)| j as f64 * m).sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!((mean - n as f64 * p).abs() < 1e-8 * n as f64);
    }
    let pmf = common::binomial_pmf(3, 0.51);
    assert!((pmf[3] - 0.132651).abs() < 1e-15);
}

#[test]
fn exact_scaled_comparison() {
    // 0.1 as f64 is slightly above one tenth, so 0.1 * 30 lies above 3
    assert_eq!(common::cmp_int_to_scaled(3, 0.1, 30), Ordering::Less);
    assert_eq!(common::cmp_int_to_scaled(3, 0.5, 6), Ordering::Equal);
    assert_eq!(common::cmp_int_to_scaled(4, 0.5, 7), Ordering::Greater);
    assert_eq!(common::cmp_int_to_scaled(-1, 0.0, 5), Ordering::Less);
    assert_eq!(common::cmp_int_to_scaled(9, 0.9, 10), Ordering::Less);
}

#[test]
fn sum_law_and_losses_on_small_cases() {
    let law = common::signed_sum_law(&[1, 1, 1], 0.51);
    assert_eq!(law.iter().map(|(s, _)| *s).collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
    assert!((common::ltf_std_loss(&[1, 1, 1], 0.51) - 0.485002).abs() < 1e-15);
    assert!((common::ltf_adv_loss(&[1, 1, 1], 0.51, 0.5) - 0.867349).abs() < 1e-15);
    // one coordinate cannot be flipped by eps < 1
    assert!((common::ltf_adv_loss(&[1], 0.51, 0.5) - 0.49).abs() < 1e-15);
    let (s, a) = common::enumerate_ltf(&[1.0, 1.0, 1.0], 0.51, 0.5);
    assert!((s - 0.485002).abs() < 1e-15 && (a - 0.867349).abs() < 1e-15);
    // even n: a tie goes to +1, so only y = -1 errs on it
    let (s2, _) = common::enumerate_ltf(&[1.0, 1.0], 0.51, 0.25);
    assert!((s2 - common::ltf_std_loss(&[1, 1], 0.51)).abs() < 1e-15);
}

#[test]
fn irwin_hall_known_values() {
    assert!((common::irwin_hall_cdf(1, 0.3) - 0.3).abs() < 1e-15);
    assert!((common::irwin_hall_cdf(2, 0.5) - 0.125).abs() < 1e-15);
    assert!((common::irwin_hall_cdf(2, 1.5) - 0.875).abs() < 1e-15);
    assert!((common::irwin_hall_cdf(7, 3.5) - 0.5).abs() < 1e-12);
}

#[test]
fn noisy_oracle_matches_irwin_hall() {
    for n in [1usize, 3, 5, 9] {
        for eps in [0.3, 0.5, 0.9] {
            let p = 0.51;
            let pmf = common::binomial_pmf(n, p);
            let exact: f64 = pmf
                .iter()
                .enumerate()
                .map(|(agree, m)| {
                    let s = 2.0 * agree as f64 - n as f64;
                    // U = 2 eps * IH_n - n eps
                    m * common::irwin_hall_cdf(n, (-s + n as f64 * eps) / (2.0 * eps))
                })
                .sum();
            let grid = common::majority_noisy_loss(n, p, eps, 2000);
            assert!((exact - grid).abs() < 1e-6, "n={n} eps={eps}: {exact} vs {grid}");
        }
    }
}

#[test]
fn ks_helpers_behave() {
    let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
    assert!((common::ks_vs_uniform(grid.clone()) - 0.0005).abs() < 1e-12);
    assert_eq!(common::ks_two_sample(grid.clone(), grid.clone()), 0.0);
    let shifted: Vec<f64> = grid.iter().map(|v| v + 0.1).collect();
    assert!((common::ks_two_sample(grid, shifted) - 0.1).abs() < 2e-3);
    assert!((common::ks_two_sample_critical(100, 100, 0.01) - 1.6276 * 0.02f64.sqrt()).abs() < 1e-3);

    // agrees with the library's statistics on random data
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: Vec<f64> = (0..5000).map(|_| rng.random()).collect();
    let b: Vec<f64> = (0..4000).map(|_| rng.random::<f64>().powf(1.1)).collect();
    let lib2 = robustlab::stats::ks_two_sample_statistic(&mut a.clone(), &mut b.clone());
    assert!((lib2 - common::ks_two_sample(a.clone(), b)).abs() < 1e-15);
    let lib1 = robustlab::stats::ks_uniform_statistic(&mut a.clone());
    assert!((lib1 - common::ks_vs_uniform(a)).abs() < 1e-15);
}
