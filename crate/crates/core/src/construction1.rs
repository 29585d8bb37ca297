//! Construction 1: `y` uniform on `{-1, +1}`, each `x_i = y` with probability
//! `p` and `-y` otherwise.
//!
//! Linear threshold functions reach exponentially small standard loss here but
//! every one of them is broken by an `eps`-bounded adversary with constant
//! probability; rounding each coordinate to `{-1, +1}` before the majority
//! vote undoes any sub-unit perturbation.
//!
//! The exact evaluators work on the law of `S = sum_i w_i z_i` with
//! `z_i = y x_i` i.i.d. `+1` w.p. `p`, computed by lattice convolution for
//! integer weights.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::{label_sign, AttackOutcome, UniformNoise};
use crate::error::{Error, Result};
use crate::estimate::{monte_carlo_loss, LossEstimate, DEFAULT_CONFIDENCE};
use crate::rng::{RngSeed, SampleRng};
use crate::types::{
    Classifier, ExampleSource, Label, LabelAlphabet, LabeledExample, Perturbation, PerturbationBudget, Perturber,
};

pub const DEFAULT_AGREEMENT: f64 = 0.51;

/// Label assigned when the decision score is exactly zero.
pub const TIE_LABEL: Label = Label::PLUS;

/// Largest `sum |w_i|` accepted by the lattice convolution.
pub const MAX_LATTICE_L1: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C1Params {
    pub n: usize,
    /// Probability that a coordinate agrees with the label.
    pub p: f64,
    pub budget: PerturbationBudget,
}

impl C1Params {
    pub fn new(n: usize, p: f64, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        if !(p > 0.5 && p < 1.0) {
            return Err(Error::Parameter(format!("agreement probability must lie in (0.5, 1), got {p}")));
        }
        Ok(C1Params { n, p, budget: PerturbationBudget::new(eps)? })
    }

    /// Parameters restricted to the theorem range `eps in (0.01, 1)`.
    pub fn for_theorem(n: usize, p: f64, eps: f64) -> Result<Self> {
        let mut params = C1Params::new(n, p, eps)?;
        params.budget = PerturbationBudget::for_construction1(eps)?;
        Ok(params)
    }

    pub fn eps(&self) -> f64 {
        self.budget.eps()
    }

    /// Mean of `y x_i`.
    pub fn coordinate_mean(&self) -> f64 {
        2.0 * self.p - 1.0
    }
}

pub fn sample_c1(params: &C1Params, rng: &mut SampleRng) -> LabeledExample {
    let y = Label::from_sign(rng.random_bool(0.5));
    let yv = y.as_f64();
    let x = (0..params.n).map(|_| if rng.random_bool(params.p) { yv } else { -yv }).collect();
    LabeledExample::new(x, y)
}

impl ExampleSource for C1Params {
    fn dim(&self) -> usize {
        self.n
    }

    fn alphabet(&self) -> LabelAlphabet {
        LabelAlphabet::Signed
    }

    fn sample(&self, rng: &mut SampleRng) -> LabeledExample {
        sample_c1(self, rng)
    }
}

/// `f_w(x) = sign(<w, x>)` with `sign(0) = +1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearThresholdClassifier {
    w: Vec<f64>,
    integer_weights: bool,
}

impl LinearThresholdClassifier {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Parameter("weight vector is empty".into()));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("weights must be finite".into()));
        }
        if w.iter().all(|&v| v == 0.0) {
            return Err(Error::Parameter("weight vector is identically zero".into()));
        }
        let integer_weights = w.iter().all(|v| v.fract() == 0.0 && v.abs() <= 2f64.powi(52));
        Ok(LinearThresholdClassifier { w, integer_weights })
    }

    pub fn from_integers(w: &[i64]) -> Result<Self> {
        LinearThresholdClassifier::new(w.iter().map(|&v| v as f64).collect())
    }

    /// The majority vote `w = (1, ..., 1)`.
    pub fn majority(n: usize) -> Result<Self> {
        LinearThresholdClassifier::new(vec![1.0; n])
    }

    /// `w = 1^k 0^(n-k)`, the support-`k` member of the `{0,1}`-weight subclass.
    pub fn support(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Parameter(format!("support size {k} outside [1, {n}]")));
        }
        let mut w = vec![0.0; n];
        w[..k].iter_mut().for_each(|v| *v = 1.0);
        LinearThresholdClassifier::new(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn has_integer_weights(&self) -> bool {
        self.integer_weights
    }

    pub fn integer_weights(&self) -> Option<Vec<i64>> {
        self.integer_weights.then(|| self.w.iter().map(|&v| v as i64).collect())
    }

    pub fn l1_norm(&self) -> f64 {
        self.w.iter().map(|v| v.abs()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.w.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn decision_score(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch { expected: self.w.len(), got: x.len() });
        }
        Ok(self.w.iter().zip(x).map(|(w, x)| w * x).sum())
    }
}

pub fn ltf_predict(c: &LinearThresholdClassifier, x: &[f64]) -> Result<Label> {
    let s = c.decision_score(x)?;
    Ok(if s > 0.0 {
        Label::PLUS
    } else if s < 0.0 {
        Label::MINUS
    } else {
        TIE_LABEL
    })
}

impl Classifier for LinearThresholdClassifier {
    fn predict(&self, x: &[f64]) -> Result<Label> {
        ltf_predict(self, x)
    }

    fn score(&self, x: &[f64]) -> Option<f64> {
        self.decision_score(x).ok()
    }

    fn corner_search_exact(&self, _eps: f64) -> bool {
        true
    }
}

/// `sign(sum_i Round(x_i))`, `Round` mapping positives to `+1` and negatives
/// to `-1`; a zero sum goes to `+1`. An exactly-zero coordinate is an error.
pub fn rounding_predict(x: &[f64]) -> Result<Label> {
    let mut total: i64 = 0;
    for (i, &v) in x.iter().enumerate() {
        if v > 0.0 {
            total += 1;
        } else if v < 0.0 {
            total -= 1;
        } else {
            return Err(Error::Boundary(i));
        }
    }
    Ok(Label::from_sign(total >= 0))
}

/// The robust rounding classifier.
#[derive(Debug, Clone, Copy, Default)]
pub struct RoundingClassifier;

impl Classifier for RoundingClassifier {
    fn predict(&self, x: &[f64]) -> Result<Label> {
        rounding_predict(x)
    }

    // monotone in every coordinate, so extremes over a box sit at its corners
    fn corner_search_exact(&self, _eps: f64) -> bool {
        true
    }
}

/// Exact law of `S = sum_i w_i z_i` with `z_i` i.i.d., `P[z_i = +1] = p`.
///
/// Stored on the half lattice: `S = 2t - L` for `t in 0..=L`, `L = ||w||_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSumDistribution {
    l1: i64,
    masses: Vec<f64>,
}

impl WeightedSumDistribution {
    pub fn l1(&self) -> i64 {
        self.l1
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    /// `(s, P[S = s])` in increasing `s`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses.iter().enumerate().map(move |(t, &m)| (2 * t as i64 - self.l1, m))
    }

    pub fn prob(&self, s: i64) -> f64 {
        let twice_t = s + self.l1;
        if twice_t < 0 || twice_t % 2 != 0 || twice_t / 2 > self.l1 {
            return 0.0;
        }
        self.masses[(twice_t / 2) as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(s, m)| s as f64 * m).sum()
    }

    /// `P[pred(S)]`.
    pub fn prob_where(&self, pred: impl Fn(i64) -> bool) -> f64 {
        self.iter().filter(|&(s, _)| pred(s)).map(|(_, m)| m).sum()
    }
}

pub fn weighted_sum_distribution(w: &[i64], p: f64) -> Result<WeightedSumDistribution> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("probability {p} outside [0, 1]")));
    }
    let l1 = w.iter().try_fold(0i64, |acc, v| acc.checked_add(v.checked_abs()?));
    let l1 = match l1 {
        Some(l) if l <= MAX_LATTICE_L1 => l,
        _ => return Err(Error::Resource(format!("||w||_1 exceeds lattice limit {MAX_LATTICE_L1}"))),
    };
    let mut masses = vec![0.0; l1 as usize + 1];
    masses[0] = 1.0;
    let mut reach = 0usize;
    for &wi in w.iter().filter(|&&v| v != 0) {
        let step = wi.unsigned_abs() as usize;
        // t grows by |w_i| exactly when sign(w_i) z_i = +1
        let up = if wi > 0 { p } else { 1.0 - p };
        for t in (0..=reach).rev() {
            let m = masses[t];
            masses[t + step] += up * m;
            masses[t] = (1.0 - up) * m;
        }
        reach += step;
    }
    Ok(WeightedSumDistribution { l1, masses })
}

fn lattice_law(c: &LinearThresholdClassifier, p: f64) -> Result<WeightedSumDistribution> {
    let w = c
        .integer_weights()
        .ok_or_else(|| Error::UnsupportedExact("exact loss needs integer weights".into()))?;
    weighted_sum_distribution(&w, p)
}

/// Exact standard loss of an integer-weight LTF.
///
/// With `y = +1` the classifier errs iff `S < 0`; with `y = -1` it sees
/// `<w, x> = -S` and errs iff `S <= 0` (ties go to `+1`).
pub fn exact_std_loss_ltf(c: &LinearThresholdClassifier, p: f64) -> Result<LossEstimate> {
    let law = lattice_law(c, p)?;
    let value = 0.5 * law.prob_where(|s| s < 0) + 0.5 * law.prob_where(|s| s <= 0);
    Ok(LossEstimate::exact(value.clamp(0.0, 1.0)))
}

/// Compares the integer `s` with the real product `eps * l` without rounding.
fn cmp_to_shift(s: i64, eps: f64, l: i64) -> Ordering {
    let lf = l as f64;
    let prod = eps * lf;
    let err = eps.mul_add(lf, -prod);
    match (s as f64).partial_cmp(&prod).unwrap_or(Ordering::Equal) {
        Ordering::Equal => 0.0f64.partial_cmp(&err).unwrap_or(Ordering::Equal),
        ord => ord,
    }
}

/// Exact adversarial loss of an integer-weight LTF against the optimal
/// `eps`-bounded adversary, which lowers `y <w, x>` by `eps ||w||_1`.
///
/// The classifier survives on `y = +1` iff `S >= eps L`, on `y = -1` iff
/// `S > eps L`.
pub fn exact_adv_loss_ltf(c: &LinearThresholdClassifier, p: f64, eps: f64) -> Result<LossEstimate> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("eps must be >= 0, got {eps}")));
    }
    let law = lattice_law(c, p)?;
    let l = law.l1();
    let survive_pos = law.prob_where(|s| cmp_to_shift(s, eps, l) != Ordering::Less);
    let survive_neg = law.prob_where(|s| cmp_to_shift(s, eps, l) == Ordering::Greater);
    Ok(LossEstimate::exact((1.0 - 0.5 * (survive_pos + survive_neg)).clamp(0.0, 1.0)))
}

/// Closed-form optimal attack `delta = -eps y sign(w)` (0 where `w_i = 0`).
pub fn optimal_ltf_attack(c: &LinearThresholdClassifier, x: &[f64], y: Label, eps: f64) -> Result<AttackOutcome> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: x.len() });
    }
    let ys = label_sign(y);
    let delta: Vec<f64> = c
        .weights()
        .iter()
        .map(|&w| if w > 0.0 { -eps * ys } else if w < 0.0 { eps * ys } else { 0.0 })
        .collect();
    let point: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + d).collect();
    let margin = ys * c.decision_score(&point)?;
    let success = ltf_predict(c, &point)? != y;
    Ok(AttackOutcome { delta, success, margin: Some(margin), exact: true })
}

/// Adversary applying [`optimal_ltf_attack`] to whatever linear classifier it faces.
#[derive(Debug, Clone)]
pub struct OptimalLtfAdversary {
    pub target: LinearThresholdClassifier,
    pub eps: f64,
}

impl Perturber for OptimalLtfAdversary {
    fn budget(&self) -> f64 {
        self.eps
    }

    fn perturb(&self, _: &dyn Classifier, x: &[f64], y: Label, _: &mut SampleRng) -> Result<Perturbation> {
        let out = optimal_ltf_attack(&self.target, x, y, self.eps)?;
        Ok(Perturbation { delta: out.delta, worst_case: true })
    }
}

/// Noise-robust loss of an LTF, by Monte Carlo at the default confidence.
pub fn noisy_loss_ltf(
    c: &LinearThresholdClassifier,
    p: f64,
    eps: f64,
    m: u64,
    seed: RngSeed,
) -> Result<LossEstimate> {
    noisy_loss_ltf_at(c, p, eps, m, seed, DEFAULT_CONFIDENCE)
}

pub fn noisy_loss_ltf_at(
    c: &LinearThresholdClassifier,
    p: f64,
    eps: f64,
    m: u64,
    seed: RngSeed,
    confidence: f64,
) -> Result<LossEstimate> {
    let params = C1Params::new(c.dim(), p, eps)?;
    let noise = UniformNoise::new(eps)?;
    monte_carlo_loss(&params, c, Some(&noise), m, seed, confidence)
}

/// Azuma-Hoeffding bound `exp(-delta^2 ||w||_1^2 / (2 ||w||_2^2))` on the
/// probability that an LTF survives the optimal attack, with
/// `delta = eps - (2p - 1)`.
///
/// Uses the exact coordinate mean `2p - 1` (0.02 at `p = 0.51`).
pub fn azuma_success_bound(c: &LinearThresholdClassifier, p: f64, eps: f64) -> Result<f64> {
    let delta = eps - (2.0 * p - 1.0);
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Hypothesis(format!("need eps > 2p - 1, got eps = {eps}, p = {p}")));
    }
    let ratio = c.l1_norm() / c.l2_norm();
    Ok((-delta * delta * ratio * ratio / 2.0).exp())
}
