//! Loss estimates and the Monte Carlo engine shared by both constructions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{streams, RngSeed};
use crate::types::{linf_norm, Classifier, ExampleSource, Perturber};

pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Slack allowed on `||delta||_inf <= eps` before a perturber is rejected.
pub const BUDGET_TOLERANCE: f64 = 1e-12;

/// Samples per parallel work item.
const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// Whether an estimate targets the loss itself or only bounds it from below
/// (adversarial loss measured with an adversary not known to be optimal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    Value,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossEstimate {
    pub value: f64,
    pub method: Method,
    pub samples: u64,
    /// Two-sided Hoeffding half-width; 0 for exact values.
    pub half_width: f64,
    pub confidence: f64,
    pub tightness: Tightness,
}

impl LossEstimate {
    pub fn exact(value: f64) -> Self {
        LossEstimate {
            value,
            method: Method::Exact,
            samples: 0,
            half_width: 0.0,
            confidence: 1.0,
            tightness: Tightness::Value,
        }
    }

    pub fn from_counts(errors: u64, samples: u64, confidence: f64) -> Result<Self> {
        let half_width = hoeffding_half_width(samples, confidence)?;
        Ok(LossEstimate {
            value: errors as f64 / samples as f64,
            method: Method::MonteCarlo,
            samples,
            half_width,
            confidence,
            tightness: Tightness::Value,
        })
    }

    /// Lower end of the confidence interval, clipped to `[0, 1]`.
    pub fn lower(&self) -> f64 {
        (self.value - self.half_width).max(0.0)
    }

    /// Upper end of the confidence interval, clipped to `[0, 1]`.
    pub fn upper(&self) -> f64 {
        (self.value + self.half_width).min(1.0)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower() <= p && p <= self.upper()
    }

    /// `|value - p| <= k * half_width`; exact estimates compare to `1e-12`.
    pub fn within(&self, p: f64, k: f64) -> bool {
        (self.value - p).abs() <= k * self.half_width + 1e-12
    }
}

/// Half-width `sqrt(ln(2 / (1 - confidence)) / (2 m))` of the two-sided
/// Hoeffding interval for the mean of `m` variables bounded in `[0, 1]`.
pub fn hoeffding_half_width(m: u64, confidence: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Parameter("sample count must be >= 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Parameter(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    Ok(((2.0 / (1.0 - confidence)).ln() / (2.0 * m as f64)).sqrt())
}

/// Monte Carlo estimate of `E[1{f(x + delta) != y}]`.
///
/// Sample `i` draws `(x, y)` from `seed.child(DATA).rng_for(i)` and its
/// perturbation from `seed.child(PERTURB).rng_for(i)`, and the error count is
/// an integer sum, so the result does not depend on the rayon pool size.
pub fn monte_carlo_loss(
    source: &dyn ExampleSource,
    classifier: &dyn Classifier,
    perturber: Option<&dyn Perturber>,
    m: u64,
    seed: RngSeed,
    confidence: f64,
) -> Result<LossEstimate> {
    let (est, _) = monte_carlo_loss_tagged(source, classifier, perturber, m, seed, confidence)?;
    Ok(est)
}

/// Same as [`monte_carlo_loss`], also reporting whether every perturbation
/// was a per-instance worst case.
pub(crate) fn monte_carlo_loss_tagged(
    source: &dyn ExampleSource,
    classifier: &dyn Classifier,
    perturber: Option<&dyn Perturber>,
    m: u64,
    seed: RngSeed,
    confidence: f64,
) -> Result<(LossEstimate, bool)> {
    // validate before spending any samples
    hoeffding_half_width(m, confidence)?;
    let data = seed.child(streams::DATA);
    let noise = seed.child(streams::PERTURB);

    let sample = |i: u64| -> Result<(u64, bool)> {
        let ex = source.sample(&mut data.rng_for(i));
        let (point, worst) = match perturber {
            None => (ex.x, false),
            Some(p) => {
                let pert = p.perturb(classifier, &ex.x, ex.y, &mut noise.rng_for(i))?;
                if pert.delta.len() != ex.x.len() {
                    return Err(Error::DimensionMismatch { expected: ex.x.len(), got: pert.delta.len() });
                }
                let norm = linf_norm(&pert.delta);
                if norm > p.budget() + BUDGET_TOLERANCE {
                    return Err(Error::BudgetViolation { norm, eps: p.budget() });
                }
                let moved = ex.x.iter().zip(&pert.delta).map(|(a, d)| a + d).collect();
                (moved, pert.worst_case)
            }
        };
        let wrong = classifier.predict(&point)? != ex.y;
        Ok((wrong as u64, worst))
    };

    let chunks = m.div_ceil(CHUNK);
    let (errors, all_worst) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(m)).try_fold((0u64, true), |acc, i| -> Result<(u64, bool)> {
                let (e, w) = sample(i)?;
                Ok((acc.0 + e, acc.1 && w))
            })
        })
        .try_reduce(|| (0, true), |a, b| Ok((a.0 + b.0, a.1 && b.1)))?;

    let est = LossEstimate::from_counts(errors, m, confidence)?;
    Ok((est, perturber.is_some() && all_worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SampleRng;
    use crate::types::{FnClassifier, Label, LabelAlphabet, LabeledExample, Perturbation};
    use rand::Rng;

    /// One coordinate, `y = +1` w.p. `q`; `x = y`.
    struct Coin(f64);

    impl ExampleSource for Coin {
        fn dim(&self) -> usize {
            1
        }
        fn alphabet(&self) -> LabelAlphabet {
            LabelAlphabet::Signed
        }
        fn sample(&self, rng: &mut SampleRng) -> LabeledExample {
            let y = Label::from_sign(rng.random_bool(self.0));
            LabeledExample::new(vec![y.as_f64()], y)
        }
    }

    struct Oversized;

    impl Perturber for Oversized {
        fn budget(&self) -> f64 {
            0.1
        }
        fn perturb(&self, _: &dyn Classifier, x: &[f64], _: Label, _: &mut SampleRng) -> Result<Perturbation> {
            Ok(Perturbation { delta: vec![0.2; x.len()], worst_case: false })
        }
    }

    #[test]
    fn half_width_values() {
        let hw = hoeffding_half_width(10_000, 0.95).unwrap();
        assert!((hw - 0.013581).abs() < 1e-6, "{hw}");
        let hw1 = hoeffding_half_width(1, 0.5).unwrap();
        assert!((hw1 - (4f64.ln() / 2.0).sqrt()).abs() < 1e-15);
        assert!((hw1 - 0.8326).abs() < 1e-4);
        let a = hoeffding_half_width(250, 0.99).unwrap();
        let b = hoeffding_half_width(1000, 0.99).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn half_width_errors() {
        assert!(hoeffding_half_width(0, 0.95).is_err());
        assert!(hoeffding_half_width(10, 1.0).is_err());
        assert!(hoeffding_half_width(10, 0.0).is_err());
    }

    #[test]
    fn always_wrong_and_always_right() {
        let src = Coin(0.5);
        let wrong = FnClassifier(|x: &[f64]| Ok(Label::from_sign(x[0] < 0.0)));
        let right = FnClassifier(|x: &[f64]| Ok(Label::from_sign(x[0] > 0.0)));
        let e = monte_carlo_loss(&src, &wrong, None, 2000, RngSeed::new(3), 0.99).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.method, Method::MonteCarlo);
        assert_eq!(e.upper(), 1.0);
        let e = monte_carlo_loss(&src, &right, None, 2000, RngSeed::new(3), 0.99).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.lower(), 0.0);
    }

    #[test]
    fn budget_violation_is_reported() {
        let right = FnClassifier(|x: &[f64]| Ok(Label::from_sign(x[0] > 0.0)));
        let err = monte_carlo_loss(&Coin(0.5), &right, Some(&Oversized), 10, RngSeed::new(1), 0.9).unwrap_err();
        assert!(matches!(err, Error::BudgetViolation { .. }));
    }

    #[test]
    fn deterministic_across_pool_sizes() {
        let src = Coin(0.3);
        let always_plus = FnClassifier(|_: &[f64]| Ok(Label::PLUS));
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_loss(&src, &always_plus, None, 50_000, RngSeed::new(11), 0.99).unwrap())
        };
        let a = run(1);
        let b = run(8);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.within(0.7, 3.0));
    }

    #[test]
    fn hoeffding_coverage() {
        // always predicting +1 on Coin(0.3) has loss exactly 0.7
        let src = Coin(0.3);
        let always_plus = FnClassifier(|_: &[f64]| Ok(Label::PLUS));
        let conf = 0.9;
        let covered = (0..1000u64)
            .filter(|&r| {
                let e = monte_carlo_loss(&src, &always_plus, None, 400, RngSeed::with_stream(r, 99), conf).unwrap();
                e.contains(0.7)
            })
            .count();
        assert!(covered as f64 / 1000.0 >= conf - 0.03, "coverage {covered}/1000");
    }
}
