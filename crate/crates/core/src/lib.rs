//! Exact and Monte Carlo evaluation of standard, noise-robust and adversarial
//! 0/1 loss on two synthetic classification tasks where linear classifiers
//! are accurate but provably non-robust, while more complex classifiers are
//! robust.
//!
//! * [`construction1`]: `+-1` coordinates agreeing with the label w.p. `p`;
//!   linear threshold functions, the rounding majority, exact lattice losses.
//! * [`construction2`]: a pseudorandom label encoded in a fragile `alpha`
//!   channel and a robust `beta` channel.
//! * [`tradeoff`]: the support-size sweep and its `gamma` inequality.
//! * [`attacks`], [`estimate`]: adversaries and the Monte Carlo harness.

pub mod attacks;
pub mod circle;
pub mod cli;
pub mod construction1;
pub mod construction2;
pub mod error;
pub mod estimate;
pub mod format;
pub mod rng;
pub mod stats;
pub mod tradeoff;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use estimate::{hoeffding_half_width, monte_carlo_loss, LossEstimate, Method, Tightness};
pub use rng::RngSeed;
pub use types::{Classifier, ExampleSource, Label, LabeledExample, PerturbationBudget, Perturber};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
