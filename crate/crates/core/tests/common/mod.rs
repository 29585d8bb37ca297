//! Reference computations written independently of the library.
#![allow(dead_code)]

use std::cmp::Ordering;

/// `ln k!` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// `P[Bin(n, p) = j]` for all `j`, evaluated in log space.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let lf = ln_factorials(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=n)
        .map(|j| (lf[n] - lf[j] - lf[n - j] + j as f64 * lp + (n - j) as f64 * lq).exp())
        .collect()
}

/// Exact sign of `s - eps * l` for integers `s`, `l >= 0`, treating the f64
/// `eps` as the rational it represents.
pub fn cmp_int_to_scaled(s: i64, eps: f64, l: i64) -> Ordering {
    assert!(eps >= 0.0 && eps.is_finite());
    if eps == 0.0 {
        return s.cmp(&0);
    }
    let bits = eps.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    // eps = mant * 2^e
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let rhs = mant as i128 * l as i128;
    if e >= 0 {
        (s as i128).cmp(&(rhs << e))
    } else {
        let sh = (-e) as u32;
        assert!(sh < 100, "scale too large for this oracle");
        ((s as i128) << sh).cmp(&rhs)
    }
}

/// Distribution of `sum_i w_i z_i` with `z_i = +1` w.p. `p`, as (value, mass)
/// pairs sorted by value. Plain map-based convolution.
pub fn signed_sum_law(w: &[i64], p: f64) -> Vec<(i64, f64)> {
    let mut law = std::collections::BTreeMap::from([(0i64, 1.0f64)]);
    for &wi in w {
        let mut next = std::collections::BTreeMap::new();
        for (&s, &m) in &law {
            *next.entry(s + wi).or_insert(0.0) += m * p;
            *next.entry(s - wi).or_insert(0.0) += m * (1.0 - p);
        }
        law = next;
    }
    law.into_iter().collect()
}

/// Standard loss of `sign(<w, x>)` (ties to +1) under the agreement model.
pub fn ltf_std_loss(w: &[i64], p: f64) -> f64 {
    let law = signed_sum_law(w, p);
    // y = +1 errs iff S < 0; y = -1 errs iff S <= 0
    let neg: f64 = law.iter().filter(|(s, _)| *s < 0).map(|(_, m)| m).sum();
    let zero: f64 = law.iter().filter(|(s, _)| *s == 0).map(|(_, m)| m).sum();
    neg + 0.5 * zero
}

/// Adversarial loss of the LTF when every coordinate can move by `eps`;
/// the best attack lowers the correct-class margin by `eps * ||w||_1`.
pub fn ltf_adv_loss(w: &[i64], p: f64, eps: f64) -> f64 {
    let l: i64 = w.iter().map(|v| v.abs()).sum();
    let law = signed_sum_law(w, p);
    let mut survive = 0.0;
    for (s, m) in law {
        match cmp_int_to_scaled(s, eps, l) {
            Ordering::Greater => survive += m,
            Ordering::Equal => survive += 0.5 * m,
            Ordering::Less => {}
        }
    }
    1.0 - survive
}

fn sign_plus(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Brute force over every `x in {+-1}^n`, both labels and every corner of
/// the `eps`-box: returns `(std_loss, adv_loss)` of `sign(<w, x>)`.
pub fn enumerate_ltf(w: &[f64], p: f64, eps: f64) -> (f64, f64) {
    let n = w.len();
    let (mut std_loss, mut adv_loss) = (0.0, 0.0);
    for y in [1i8, -1] {
        for xm in 0u32..(1 << n) {
            let x: Vec<f64> = (0..n).map(|i| if xm >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let agree = x.iter().filter(|&&v| v == y as f64).count();
            let prob = 0.5 * p.powi(agree as i32) * (1.0 - p).powi((n - agree) as i32);
            let score = |pt: &[f64]| pt.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
            let clean_wrong = sign_plus(score(&x)) != y;
            if clean_wrong {
                std_loss += prob;
            }
            let mut fooled = clean_wrong;
            for dm in 0u32..(1 << n) {
                if fooled {
                    break;
                }
                let pt: Vec<f64> =
                    (0..n).map(|i| x[i] + if dm >> i & 1 == 1 { eps } else { -eps }).collect();
                fooled = sign_plus(score(&pt)) != y;
            }
            if fooled {
                adv_loss += prob;
            }
        }
    }
    (std_loss, adv_loss)
}

/// Noise-robust loss of the n-coordinate majority: error iff
/// `S + U < 0` (ties have probability zero), `S` the lattice sum of
/// `y x_i` and `U` a sum of `n` Uniform[-eps, eps].
///
/// The uniform sum is approximated by a sum of midpoint-grid discrete
/// uniforms with `2k` atoms each; its variance is short by a factor
/// `1 / (4 k^2)` only.
pub fn majority_noisy_loss(n: usize, p: f64, eps: f64, k: usize) -> f64 {
    let h = eps / k as f64;
    let atoms = 2 * k;
    // mass on grid index J, value (J + n/2) h - n eps, J in 0..=n(2k-1)
    let mut dens = vec![1.0 / atoms as f64; atoms];
    for _ in 1..n {
        let mut pre = vec![0.0; dens.len() + 1];
        for (i, v) in dens.iter().enumerate() {
            pre[i + 1] = pre[i] + v;
        }
        let len = dens.len() + atoms - 1;
        let next: Vec<f64> = (0..len)
            .map(|j| {
                let lo = j.saturating_sub(atoms - 1);
                let hi = j.min(dens.len() - 1);
                (pre[hi + 1] - pre[lo]) / atoms as f64
            })
            .collect();
        dens = next;
    }
    let mut cdf = vec![0.0; dens.len() + 1];
    for (i, v) in dens.iter().enumerate() {
        cdf[i + 1] = cdf[i] + v;
    }
    // P[U < t]: atom J lies below t iff J < (t + n eps) / h - n / 2
    let below = |t: f64| {
        let idx = ((t + n as f64 * eps) / h - n as f64 / 2.0).ceil();
        cdf[idx.clamp(0.0, dens.len() as f64) as usize]
    };
    let pmf = binomial_pmf(n, p);
    let mut loss = 0.0;
    for (agree, m) in pmf.iter().enumerate() {
        let s = 2.0 * agree as f64 - n as f64;
        loss += m * below(-s);
    }
    loss
}

/// `sup |F_emp - F|` against Uniform[0, 1].
pub fn ks_vs_uniform(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / m).max((i + 1) as f64 / m - x))
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic by merging sorted samples.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic two-sample KS critical value at level `alpha`.
pub fn ks_two_sample_critical(na: usize, nb: usize, alpha: f64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((na + nb) as f64 / (na as f64 * nb as f64)).sqrt()
}

/// Irwin-Hall CDF of a sum of `n` Uniform[0, 1]; stable only for small `n`.
pub fn irwin_hall_cdf(n: usize, x: f64) -> f64 {
    let lf = ln_factorials(n);
    let mut acc = 0.0;
    for k in 0..=n {
        if x - k as f64 <= 0.0 {
            break;
        }
        let binom = (lf[n] - lf[k] - lf[n - k]).exp();
        let term = binom * (x - k as f64).powi(n as i32);
        acc += if k % 2 == 0 { term } else { -term };
    }
    (acc / lf[n].exp()).clamp(0.0, 1.0)
}
