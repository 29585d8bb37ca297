//! Robustness/accuracy frontier of the `{0,1}`-weight linear classifiers on
//! Construction 1.
//!
//! For support size `k` the optimal adversary's success is at most
//! `exp(-delta^2 k / 2)` while the standard loss is at least `(1-p)^k`, so
//! `AdvLoss + StdLoss^gamma >= 1` with `gamma = delta^2 / (2 ln(1/(1-p)))`.

use serde::{Deserialize, Serialize};

use crate::construction1::{exact_adv_loss_ltf, exact_std_loss_ltf, LinearThresholdClassifier};
use crate::error::{Error, Result};

/// Required `bound_lhs >= 1 - BOUND_SLACK`.
pub const BOUND_SLACK: f64 = 1e-10;

/// Exponent as printed with the coordinate mean taken to be `0.01`:
/// `(eps - 0.01)^2 / (2 ln(1/0.49))`.
pub fn gamma_paper(eps: f64) -> Result<f64> {
    if !(eps > 0.01 && eps < 1.0) {
        return Err(Error::Hypothesis(format!("gamma needs eps in (0.01, 1), got {eps}")));
    }
    Ok((eps - 0.01).powi(2) / (2.0 * (1.0 / 0.49f64).ln()))
}

/// Exponent certified with the exact coordinate mean `2p - 1`:
/// `(eps - (2p - 1))^2 / (2 ln(1/(1-p)))`.
pub fn gamma_valid(eps: f64, p: f64) -> Result<f64> {
    let margin = eps - (2.0 * p - 1.0);
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::Hypothesis(format!("need eps > 2p - 1, got eps = {eps}, p = {p}")));
    }
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::Parameter(format!("p must lie in (0.5, 1), got {p}")));
    }
    Ok(margin * margin / (2.0 * (1.0 / (1.0 - p)).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub k: usize,
    pub eps: f64,
    pub p: f64,
    pub n: usize,
    pub std_loss: f64,
    pub adv_loss: f64,
    pub gamma_paper: f64,
    pub gamma_valid: f64,
    pub bound_lhs_paper: f64,
    pub bound_lhs_valid: f64,
}

impl TradeoffRow {
    /// `adv_loss + std_loss^gamma`.
    pub fn bound_lhs(&self, gamma: f64) -> f64 {
        self.adv_loss + self.std_loss.powf(gamma)
    }
}

pub const CSV_HEADER: &str =
    "k,eps,p,n,std_loss,adv_loss,gamma_paper,gamma_valid,bound_lhs_paper,bound_lhs_valid";

/// One row per support size, using `w = 1^k 0^(n-k)`; coordinates of the
/// distribution are exchangeable so the losses depend on `k` only.
pub fn sweep_support(n: usize, eps: f64, p: f64, ks: &[usize]) -> Result<Vec<TradeoffRow>> {
    let gp = gamma_paper(eps)?;
    let gv = gamma_valid(eps, p)?;
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    ks.iter()
        .map(|&k| {
            let c = LinearThresholdClassifier::support(k, n)?;
            let std_loss = exact_std_loss_ltf(&c, p)?.value;
            let adv_loss = exact_adv_loss_ltf(&c, p, eps)?.value;
            Ok(TradeoffRow {
                k,
                eps,
                p,
                n,
                std_loss,
                adv_loss,
                gamma_paper: gp,
                gamma_valid: gv,
                bound_lhs_paper: adv_loss + std_loss.powf(gp),
                bound_lhs_valid: adv_loss + std_loss.powf(gv),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub gamma: f64,
    pub rows_checked: usize,
    /// Smallest `bound_lhs - 1` over the rows.
    pub min_slack: f64,
    pub tightest: TradeoffRow,
    /// First row with `bound_lhs < 1 - BOUND_SLACK`, if any.
    pub counterexample: Option<TradeoffRow>,
}

impl TradeoffReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn into_result(self) -> Result<TradeoffReport> {
        match self.counterexample {
            None => Ok(self),
            Some(row) => Err(Error::Verification(format!(
                "AdvLoss + StdLoss^{} = {} < 1 at k = {}, eps = {}, n = {}",
                self.gamma,
                row.bound_lhs(self.gamma),
                row.k,
                row.eps,
                row.n
            ))),
        }
    }
}

pub fn verify_tradeoff(rows: &[TradeoffRow], gamma: f64) -> Result<TradeoffReport> {
    let first = rows.first().ok_or_else(|| Error::Parameter("no rows to verify".into()))?;
    let mut tightest = *first;
    let mut min_slack = f64::INFINITY;
    let mut counterexample = None;
    for row in rows {
        let slack = row.bound_lhs(gamma) - 1.0;
        if slack < min_slack {
            min_slack = slack;
            tightest = *row;
        }
        if slack < -BOUND_SLACK && counterexample.is_none() {
            counterexample = Some(*row);
        }
    }
    Ok(TradeoffReport { gamma, rows_checked: rows.len(), min_slack, tightest, counterexample })
}

/// Pairs `(k, k')` where row `k'` has strictly lower standard and
/// adversarial loss than row `k` (beyond `BOUND_SLACK`).
pub fn dominated_pairs(rows: &[TradeoffRow]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in rows {
        for b in rows {
            if b.std_loss < a.std_loss - BOUND_SLACK && b.adv_loss < a.adv_loss - BOUND_SLACK {
                out.push((a.k, b.k));
            }
        }
    }
    out
}
