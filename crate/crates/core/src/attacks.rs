//! Adversaries and the adversarial-loss harness.
//!
//! The max over the l-inf ball in the adversarial loss is not computable for a
//! black-box classifier, so adversarial loss is always measured against a
//! concrete adversary. The estimate is tagged [`Tightness::Value`] only when
//! every perturbation the adversary produced was a per-instance worst case;
//! otherwise it is a lower bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{monte_carlo_loss_tagged, LossEstimate, Tightness};
use crate::rng::{RngSeed, SampleRng};
use crate::types::{Classifier, ExampleSource, Label, Perturbation, Perturber};

pub const DEFAULT_CORNER_DIM_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub delta: Vec<f64>,
    pub success: bool,
    /// Signed decision score `sign(y) * score(x + delta)`; `None` for black-box classifiers.
    pub margin: Option<f64>,
    /// `success` is the true max over the ball, not just a witness search.
    pub exact: bool,
}

/// `+1` for the positive class of either alphabet (`+1` or `1`), `-1` otherwise.
pub fn label_sign(y: Label) -> f64 {
    if y.value() > 0 {
        1.0
    } else {
        -1.0
    }
}

fn shifted(x: &[f64], delta: &[f64]) -> Vec<f64> {
    x.iter().zip(delta).map(|(a, d)| a + d).collect()
}

/// Tries `delta = 0` and every corner of `{-eps, +eps}^d`.
///
/// Exact for classifiers that are monotone in each coordinate on the cube
/// (linear threshold functions, the rounding majority); a certified witness
/// search otherwise.
pub fn corner_search_attack(
    classifier: &dyn Classifier,
    x: &[f64],
    y: Label,
    eps: f64,
    dim_limit: usize,
) -> Result<AttackOutcome> {
    let d = x.len();
    if d > dim_limit || d >= 63 {
        return Err(Error::Resource(format!("corner search over dimension {d} exceeds limit {dim_limit}")));
    }
    let exact = classifier.corner_search_exact(eps);
    let sign = label_sign(y);

    let zero = vec![0.0; d];
    if classifier.predict(x)? != y {
        let margin = classifier.score(x).map(|s| sign * s);
        return Ok(AttackOutcome { delta: zero, success: true, margin, exact });
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut delta = vec![0.0; d];
    for mask in 0u64..(1u64 << d) {
        for (i, di) in delta.iter_mut().enumerate() {
            *di = if mask >> i & 1 == 1 { eps } else { -eps };
        }
        let point = shifted(x, &delta);
        if classifier.predict(&point)? != y {
            let margin = classifier.score(&point).map(|s| sign * s);
            return Ok(AttackOutcome { delta, success: true, margin, exact });
        }
        if let Some(m) = classifier.score(&point).map(|s| sign * s) {
            if best.as_ref().is_none_or(|(b, _)| m < *b) {
                best = Some((m, delta.clone()));
            }
        }
    }
    Ok(match best {
        Some((m, delta)) => AttackOutcome { delta, success: false, margin: Some(m), exact },
        None => AttackOutcome { delta: zero, success: false, margin: None, exact },
    })
}

/// Brute-force adversary backed by [`corner_search_attack`].
#[derive(Debug, Clone, Copy)]
pub struct CornerSearch {
    pub eps: f64,
    pub dim_limit: usize,
}

impl CornerSearch {
    pub fn new(eps: f64) -> Self {
        CornerSearch { eps, dim_limit: DEFAULT_CORNER_DIM_LIMIT }
    }
}

impl Perturber for CornerSearch {
    fn budget(&self) -> f64 {
        self.eps
    }

    fn perturb(&self, classifier: &dyn Classifier, x: &[f64], y: Label, _: &mut SampleRng) -> Result<Perturbation> {
        let out = corner_search_attack(classifier, x, y, self.eps, self.dim_limit)?;
        Ok(Perturbation { delta: out.delta, worst_case: out.exact })
    }
}

/// Independent `Uniform[-eps, eps]` noise on every coordinate.
#[derive(Debug, Clone, Copy)]
pub struct UniformNoise {
    eps: f64,
}

impl UniformNoise {
    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::Parameter(format!("noise radius must be >= 0, got {eps}")));
        }
        Ok(UniformNoise { eps })
    }

    pub fn draw(&self, dim: usize, rng: &mut SampleRng) -> Vec<f64> {
        (0..dim).map(|_| self.eps * (2.0 * rng.random::<f64>() - 1.0)).collect()
    }
}

impl Perturber for UniformNoise {
    fn budget(&self) -> f64 {
        self.eps
    }

    fn perturb(&self, _: &dyn Classifier, x: &[f64], _: Label, rng: &mut SampleRng) -> Result<Perturbation> {
        Ok(Perturbation { delta: self.draw(x.len(), rng), worst_case: false })
    }
}

pub fn uniform_noise_perturber(eps: f64) -> Result<UniformNoise> {
    UniformNoise::new(eps)
}

/// Uniformly random corner of the cube; a cheap random adversary.
#[derive(Debug, Clone, Copy)]
pub struct RandomCorner {
    pub eps: f64,
}

impl Perturber for RandomCorner {
    fn budget(&self) -> f64 {
        self.eps
    }

    fn perturb(&self, _: &dyn Classifier, x: &[f64], _: Label, rng: &mut SampleRng) -> Result<Perturbation> {
        let delta = x.iter().map(|_| if rng.random::<bool>() { self.eps } else { -self.eps }).collect();
        Ok(Perturbation { delta, worst_case: false })
    }
}

/// Monte Carlo adversarial loss of `classifier` against `adversary`.
///
/// Tagged as a value only when the adversary reported a worst-case
/// perturbation for every sample.
pub fn adversarial_loss(
    classifier: &dyn Classifier,
    source: &dyn ExampleSource,
    adversary: &dyn Perturber,
    m: u64,
    seed: RngSeed,
    confidence: f64,
) -> Result<LossEstimate> {
    let (mut est, worst) = monte_carlo_loss_tagged(source, classifier, Some(adversary), m, seed, confidence)?;
    est.tightness = if worst { Tightness::Value } else { Tightness::LowerBound };
    Ok(est)
}
