//! Domain types shared by both constructions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SampleRng;

/// Class label. Construction 1 uses `{-1, +1}`, Construction 2 uses `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub i8);

impl Label {
    pub const PLUS: Label = Label(1);
    pub const MINUS: Label = Label(-1);
    pub const ZERO: Label = Label(0);
    pub const ONE: Label = Label(1);

    pub fn from_sign(positive: bool) -> Label {
        if positive {
            Label::PLUS
        } else {
            Label::MINUS
        }
    }

    pub fn from_bit(bit: bool) -> Label {
        Label(bit as i8)
    }

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

/// Label alphabet of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelAlphabet {
    /// `{-1, +1}`
    Signed,
    /// `{0, 1}`
    Binary,
}

impl LabelAlphabet {
    pub fn contains(self, y: Label) -> bool {
        match self {
            LabelAlphabet::Signed => y.0 == 1 || y.0 == -1,
            LabelAlphabet::Binary => y.0 == 0 || y.0 == 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub x: Vec<f64>,
    pub y: Label,
}

impl LabeledExample {
    pub fn new(x: Vec<f64>, y: Label) -> Self {
        LabeledExample { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// l-inf perturbation radius.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PerturbationBudget {
    eps: f64,
}

impl PerturbationBudget {
    /// Any finite `eps >= 0`. Zero is allowed so that degenerate runs
    /// (noise of width zero, the null attack) go through the same code.
    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::Parameter(format!("eps must be finite and >= 0, got {eps}")));
        }
        Ok(PerturbationBudget { eps })
    }

    /// Budget satisfying the Construction 1 theorem hypothesis `eps in (0.01, 1)`.
    pub fn for_construction1(eps: f64) -> Result<Self> {
        if !(eps > 0.01 && eps < 1.0) {
            return Err(Error::Hypothesis(format!("construction 1 needs eps in (0.01, 1), got {eps}")));
        }
        Ok(PerturbationBudget { eps })
    }

    /// Budget satisfying the Construction 2 theorem hypothesis `eps in (0, 1/8)`.
    pub fn for_construction2(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.125) {
            return Err(Error::Hypothesis(format!("construction 2 needs eps in (0, 1/8), got {eps}")));
        }
        Ok(PerturbationBudget { eps })
    }

    pub fn eps(self) -> f64 {
        self.eps
    }
}

/// l-inf norm of a vector; 0 for the empty vector.
pub fn linf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// A classifier `R^d -> labels`. Implementations are pure and thread-safe.
pub trait Classifier: Sync {
    fn predict(&self, x: &[f64]) -> Result<Label>;

    /// Real-valued decision score, when the classifier has one.
    fn score(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// True when evaluating the `2^d` corners of the radius-`eps` cube
    /// (plus the center) finds a misclassifying point whenever one exists.
    fn corner_search_exact(&self, _eps: f64) -> bool {
        false
    }
}

/// Adapter turning a closure into a [`Classifier`].
pub struct FnClassifier<F>(pub F);

impl<F> Classifier for FnClassifier<F>
where
    F: Fn(&[f64]) -> Result<Label> + Sync,
{
    fn predict(&self, x: &[f64]) -> Result<Label> {
        (self.0)(x)
    }
}

/// A data distribution over labeled examples.
pub trait ExampleSource: Sync {
    fn dim(&self) -> usize;
    fn alphabet(&self) -> LabelAlphabet;
    fn sample(&self, rng: &mut SampleRng) -> LabeledExample;
}

/// Perturbation proposed for one example.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub delta: Vec<f64>,
    /// The perturbation is a per-instance maximizer of the 0/1 loss for the
    /// classifier it was computed against.
    pub worst_case: bool,
}

impl Perturbation {
    pub fn zero(dim: usize) -> Self {
        Perturbation { delta: vec![0.0; dim], worst_case: false }
    }
}

/// A rule choosing `delta` from `(x, y)`; random perturbers draw from `rng`,
/// adversaries may inspect the classifier.
pub trait Perturber: Sync {
    fn budget(&self) -> f64;

    fn perturb(
        &self,
        classifier: &dyn Classifier,
        x: &[f64],
        y: Label,
        rng: &mut SampleRng,
    ) -> Result<Perturbation>;
}
