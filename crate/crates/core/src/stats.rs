//! Kolmogorov-Smirnov statistics used by the uniformity and independence checks.

use std::cmp::Ordering;

fn sort_finite(v: &mut [f64]) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
}

/// One-sample KS statistic `sup |F_m(t) - t|` against Uniform[0, 1].
pub fn ks_uniform_statistic(samples: &mut [f64]) -> f64 {
    sort_finite(samples);
    let m = samples.len() as f64;
    samples.iter().enumerate().fold(0.0f64, |sup, (i, &x)| {
        let t = x.clamp(0.0, 1.0);
        let lo = t - i as f64 / m;
        let hi = (i + 1) as f64 / m - t;
        sup.max(lo).max(hi)
    })
}

/// Two-sample KS statistic `sup |F_a(t) - F_b(t)|`.
pub fn ks_two_sample_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    sort_finite(a);
    sort_finite(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Asymptotic coefficient `c(alpha) = sqrt(-ln(alpha / 2) / 2)`; `c(0.01) = 1.6276`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Asymptotic two-sample critical value `c(alpha) * sqrt((n + m) / (n m))`.
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}
