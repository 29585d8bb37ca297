//! Construction 2: a label `y = g(z)` hidden twice in a `4n`-dimensional input.
//!
//! The `alpha` half carries `g(z)` directly as a `2 eps` shift between paired
//! coordinates, which a trivial classifier reads off and an `eps`-bounded
//! adversary erases. The `beta` half carries `z` itself as `0.5`-shifts, which
//! survive any perturbation below `1/8`; a robust classifier must decode `z`
//! and evaluate `g`.
//!
//! Layout of `x` (0-based): `alpha` pair `i` sits at `(2i, 2i + 1)`, `beta`
//! pair `i` at `(2n + 2i, 2n + 2i + 1)`. All mod-1 comparisons use circular
//! distance.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circle::{circular_distance, wrap_unit};
use crate::error::{Error, Result};
use crate::rng::{streams, RngSeed, SampleRng};
use crate::stats::{ks_two_sample_critical, ks_two_sample_statistic};
use crate::types::{
    Classifier, ExampleSource, Label, LabelAlphabet, LabeledExample, Perturbation, PerturbationBudget, Perturber,
};

/// `beta` pairs at circular distance at least this decode to `z_i = 1`.
pub const DECODE_THRESHOLD: f64 = 0.25;

/// Slack on the `>= 2 eps` test of the simple classifier. An unperturbed
/// `alpha` pair is `2 eps` apart only up to the rounding of the mod-1 shift.
pub const SIMPLE_THRESHOLD_SLACK: f64 = 1e-9;

/// Circular distances below this count as zero in the independence report.
pub const ZERO_DISTANCE_TOL: f64 = 1e-9;

/// Keyed pseudorandom stand-in for an average-case hard `g: {0,1}^n -> {0,1}`:
/// the low bit of `SHA-256(key || n || packed z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HardFunctionOracle {
    key: [u8; 32],
    n: usize,
}

impl HardFunctionOracle {
    pub fn new(key: [u8; 32], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("oracle input length must be >= 1".into()));
        }
        Ok(HardFunctionOracle { key, n })
    }

    /// Oracle whose key is derived from a 64-bit seed.
    pub fn from_seed(seed: u64, n: usize) -> Result<Self> {
        let mut h = Sha256::new();
        h.update(b"robustlab/oracle-key");
        h.update(seed.to_le_bytes());
        h.update(streams::ORACLE_KEY.to_le_bytes());
        HardFunctionOracle::new(h.finalize().into(), n)
    }

    pub fn key(&self) -> &[u8; 32] {
        &self.key
    }

    pub fn key_hex(&self) -> String {
        hex::encode(self.key)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[bool]) -> Result<bool> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        let mut h = Sha256::new();
        h.update(self.key);
        h.update((self.n as u64).to_le_bytes());
        h.update(pack_bits(z));
        Ok(h.finalize()[0] & 1 == 1)
    }

    /// Fraction of `z in {0,1}^n` with `g(z) = 1`, by enumeration.
    pub fn exact_bias(&self) -> Result<f64> {
        if self.n > 24 {
            return Err(Error::Resource(format!("enumerating 2^{} inputs", self.n)));
        }
        let total = 1u64 << self.n;
        let mut z = vec![false; self.n];
        let mut ones = 0u64;
        for v in 0..total {
            for (i, bit) in z.iter_mut().enumerate() {
                *bit = v >> i & 1 == 1;
            }
            ones += self.eval(&z)? as u64;
        }
        Ok(ones as f64 / total as f64)
    }
}

/// Parses a 64-digit hex oracle key.
pub fn key_from_hex(s: &str) -> Result<[u8; 32]> {
    let bytes = hex::decode(s).map_err(|e| Error::Parameter(format!("oracle key: {e}")))?;
    bytes.try_into().map_err(|_| Error::Parameter("oracle key must be 64 hex digits".into()))
}

pub fn g_eval(oracle: &HardFunctionOracle, z: &[bool]) -> Result<bool> {
    oracle.eval(z)
}

/// Bits packed MSB-first: `z[0]` is bit 7 of byte 0.
pub fn pack_bits(z: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; z.len().div_ceil(8)];
    for (i, &b) in z.iter().enumerate() {
        if b {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// `ceil(n / 4)` hex digits of [`pack_bits`], zero-padded on the right.
pub fn z_to_hex(z: &[bool]) -> String {
    let mut s = hex::encode(pack_bits(z));
    s.truncate(z.len().div_ceil(4));
    s
}

pub fn z_from_hex(s: &str, n: usize) -> Result<Vec<bool>> {
    if s.len() != n.div_ceil(4) {
        return Err(Error::Parameter(format!("expected {} hex digits for n = {n}", n.div_ceil(4))));
    }
    let padded = if s.len() % 2 == 1 { format!("{s}0") } else { s.to_string() };
    let bytes = hex::decode(padded).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok((0..n).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C2Params {
    pub n: usize,
    pub budget: PerturbationBudget,
    pub oracle: HardFunctionOracle,
}

impl C2Params {
    /// `eps` must lie in `(0, 1/8)`.
    pub fn new(n: usize, eps: f64, oracle: HardFunctionOracle) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        if oracle.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: oracle.n() });
        }
        Ok(C2Params { n, budget: PerturbationBudget::for_construction2(eps)?, oracle })
    }

    pub fn with_seeded_oracle(n: usize, eps: f64, oracle_seed: u64) -> Result<Self> {
        C2Params::new(n, eps, HardFunctionOracle::from_seed(oracle_seed, n)?)
    }

    pub fn eps(&self) -> f64 {
        self.budget.eps()
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedExample {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub y: Label,
}

impl EncodedExample {
    /// `x = alpha ++ beta`.
    pub fn x(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.alpha.len() + self.beta.len());
        x.extend_from_slice(&self.alpha);
        x.extend_from_slice(&self.beta);
        x
    }

    pub fn labeled(&self) -> LabeledExample {
        LabeledExample::new(self.x(), self.y)
    }
}

fn check_unit_interval(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    if let Some(bad) = v.iter().find(|t| !(0.0..1.0).contains(*t)) {
        return Err(Error::Parameter(format!("{name} entries must lie in [0, 1), got {bad}")));
    }
    Ok(())
}

pub fn encode(params: &C2Params, z: &[bool], a: &[f64], b: &[f64]) -> Result<EncodedExample> {
    let n = params.n;
    check_unit_interval("a", a, n)?;
    check_unit_interval("b", b, n)?;
    let g = params.oracle.eval(z)?;
    let shift = if g { 2.0 * params.eps() } else { 0.0 };
    let alpha = a.iter().flat_map(|&ai| [ai, wrap_unit(ai + shift)]).collect();
    let beta = b
        .iter()
        .zip(z)
        .flat_map(|(&bi, &zi)| [bi, if zi { wrap_unit(bi + 0.5) } else { bi }])
        .collect();
    Ok(EncodedExample { alpha, beta, y: Label::from_bit(g) })
}

/// A draw from the construction, keeping `z` for export.
#[derive(Debug, Clone, PartialEq)]
pub struct C2Sample {
    pub z: Vec<bool>,
    pub example: EncodedExample,
}

pub fn sample_c2(params: &C2Params, rng: &mut SampleRng) -> C2Sample {
    let n = params.n;
    let z: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    // inputs satisfy encode's preconditions by construction
    let example = encode(params, &z, &a, &b).expect("sampled inputs are in range");
    C2Sample { z, example }
}

impl ExampleSource for C2Params {
    fn dim(&self) -> usize {
        4 * self.n
    }

    fn alphabet(&self) -> LabelAlphabet {
        LabelAlphabet::Binary
    }

    fn sample(&self, rng: &mut SampleRng) -> LabeledExample {
        sample_c2(self, rng).example.labeled()
    }
}

/// Construction 2 with a fresh uniformly random function per draw: every
/// sample gets its own oracle key. Averages the fixed-`g` distribution over
/// the choice of `g`, so `P[y = 1] = 1/2` exactly.
#[derive(Debug, Clone, Copy)]
pub struct RandomFunctionSource {
    pub n: usize,
    pub eps: f64,
}

impl RandomFunctionSource {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        PerturbationBudget::for_construction2(eps)?;
        Ok(RandomFunctionSource { n, eps })
    }
}

impl ExampleSource for RandomFunctionSource {
    fn dim(&self) -> usize {
        4 * self.n
    }

    fn alphabet(&self) -> LabelAlphabet {
        LabelAlphabet::Binary
    }

    fn sample(&self, rng: &mut SampleRng) -> LabeledExample {
        let key: [u8; 32] = rng.random();
        let oracle = HardFunctionOracle::new(key, self.n).expect("n >= 1");
        let params = C2Params::new(self.n, self.eps, oracle).expect("validated in new");
        sample_c2(&params, rng).example.labeled()
    }
}

fn halves(x: &[f64]) -> Result<(&[f64], &[f64])> {
    if x.is_empty() || !x.len().is_multiple_of(4) {
        return Err(Error::Parameter(format!("input length {} is not a positive multiple of 4", x.len())));
    }
    Ok(x.split_at(x.len() / 2))
}

/// `1` iff some `alpha` pair is at circular distance `>= 2 eps`.
pub fn simple_classify(x: &[f64], eps: f64) -> Result<Label> {
    let (alpha, _) = halves(x)?;
    let hit = alpha
        .chunks_exact(2)
        .any(|p| circular_distance(p[0], p[1]) >= 2.0 * eps - SIMPLE_THRESHOLD_SLACK);
    Ok(Label::from_bit(hit))
}

/// `z_i = 1` iff `beta` pair `i` is at circular distance `>= 1/4`.
pub fn decode_z(beta: &[f64]) -> Vec<bool> {
    beta.chunks_exact(2).map(|p| circular_distance(p[0], p[1]) >= DECODE_THRESHOLD).collect()
}

pub fn robust_classify(x: &[f64], oracle: &HardFunctionOracle) -> Result<Label> {
    let (_, beta) = halves(x)?;
    Ok(Label::from_bit(oracle.eval(&decode_z(beta))?))
}

/// Pattern `(+eps y, -eps y, ...)` on `alpha`, zero on `beta`.
pub fn canonical_adversary(x: &[f64], y: Label, eps: f64) -> Vec<f64> {
    let half = x.len() / 2;
    let s = if y.value() == 1 { eps } else { 0.0 };
    (0..x.len())
        .map(|i| if i >= half { 0.0 } else if i % 2 == 0 { s } else { -s })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SimpleC2Classifier {
    pub eps: f64,
}

impl Classifier for SimpleC2Classifier {
    fn predict(&self, x: &[f64]) -> Result<Label> {
        simple_classify(x, self.eps)
    }
}

#[derive(Debug, Clone)]
pub struct RobustC2Classifier {
    pub oracle: HardFunctionOracle,
}

impl Classifier for RobustC2Classifier {
    fn predict(&self, x: &[f64]) -> Result<Label> {
        robust_classify(x, &self.oracle)
    }
}

/// The label-aware `alpha`-erasing adversary.
///
/// Never reported as worst case: against the simple classifier a different
/// adversary can also turn `g(z) = 0` inputs into `1` by pulling a pair apart.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalAdversary {
    pub eps: f64,
}

impl Perturber for CanonicalAdversary {
    fn budget(&self) -> f64 {
        self.eps
    }

    fn perturb(&self, _: &dyn Classifier, x: &[f64], y: Label, _: &mut SampleRng) -> Result<Perturbation> {
        Ok(Perturbation { delta: canonical_adversary(x, y, self.eps), worst_case: false })
    }
}

/// Two-sample comparison of the attacked `alpha` between `g(z) = 0` and `g(z) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub samples: u64,
    pub group_sizes: [u64; 2],
    /// KS statistic of the first coordinate (mod 1) of each `alpha` pair.
    pub representative_ks: Vec<f64>,
    /// KS statistic of each pair's circular distance.
    pub distance_ks: Vec<f64>,
    /// Largest circular distance seen in each group.
    pub max_distance: [f64; 2],
    /// Single-test critical value at `alpha_level`.
    pub critical_value: f64,
    /// Critical value at `alpha_level / tests` (Bonferroni over all statistics).
    pub family_critical_value: f64,
    pub alpha_level: f64,
    /// Fraction of attacked `alpha` coordinates outside `[0, 1)` per group;
    /// nonzero only for `g(z) = 1`, i.e. raw magnitudes still leak the label.
    pub out_of_range_fraction: [f64; 2],
}

impl IndependenceReport {
    pub fn max_ks(&self) -> f64 {
        self.representative_ks.iter().chain(&self.distance_ks).fold(0.0, |a, &b| a.max(b))
    }

    pub fn tests(&self) -> usize {
        self.representative_ks.len() + self.distance_ks.len()
    }

    /// Family-wise test: every statistic below the Bonferroni critical value.
    pub fn passes(&self) -> bool {
        self.max_ks() < self.family_critical_value
    }

    /// Every statistic below the single-test critical value. Under the null
    /// this fails with probability up to `tests * alpha_level`.
    pub fn passes_per_test(&self) -> bool {
        self.max_ks() < self.critical_value
    }
}

pub fn alpha_independence_check(params: &C2Params, m: u64, seed: RngSeed) -> Result<IndependenceReport> {
    const LEVEL: f64 = 0.01;
    if m < 10_000 {
        return Err(Error::Parameter(format!("independence check needs m >= 10^4, got {m}")));
    }
    let n = params.n;
    let eps = params.eps();
    let data = seed.child(streams::DATA);
    let mut reps: [Vec<Vec<f64>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
    let mut dists: [Vec<Vec<f64>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
    let mut max_distance = [0.0f64; 2];
    let mut outside = [0u64; 2];
    let mut sizes = [0u64; 2];

    for i in 0..m {
        let ex = sample_c2(params, &mut data.rng_for(i)).example;
        let g = ex.y.value() as usize;
        sizes[g] += 1;
        let x = ex.x();
        let delta = canonical_adversary(&x, ex.y, eps);
        let attacked: Vec<f64> = x[..2 * n].iter().zip(&delta).map(|(a, d)| a + d).collect();
        outside[g] += attacked.iter().filter(|v| !(0.0..1.0).contains(*v)).count() as u64;
        for (j, pair) in attacked.chunks_exact(2).enumerate() {
            reps[g][j].push(wrap_unit(pair[0]));
            let d = circular_distance(pair[0], pair[1]);
            max_distance[g] = max_distance[g].max(d);
            dists[g][j].push(if d < ZERO_DISTANCE_TOL { 0.0 } else { d });
        }
    }
    if sizes[0] == 0 || sizes[1] == 0 {
        return Err(Error::Verification("one label class never occurred".into()));
    }

    let [r0, r1] = &mut reps;
    let representative_ks = r0.iter_mut().zip(r1.iter_mut()).map(|(a, b)| ks_two_sample_statistic(a, b)).collect();
    let [d0, d1] = &mut dists;
    let distance_ks = d0.iter_mut().zip(d1.iter_mut()).map(|(a, b)| ks_two_sample_statistic(a, b)).collect();

    Ok(IndependenceReport {
        samples: m,
        group_sizes: sizes,
        representative_ks,
        distance_ks,
        max_distance,
        critical_value: ks_two_sample_critical(sizes[0] as usize, sizes[1] as usize, LEVEL),
        family_critical_value: ks_two_sample_critical(
            sizes[0] as usize,
            sizes[1] as usize,
            LEVEL / (2 * n) as f64,
        ),
        alpha_level: LEVEL,
        out_of_range_fraction: [
            outside[0] as f64 / (sizes[0] * 2 * n as u64) as f64,
            outside[1] as f64 / (sizes[1] * 2 * n as u64) as f64,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::UniformNoise;

    /// Searches small seeds for an oracle with the requested value of `g(z)`.
    fn params_with_g(z: &[bool], want: bool, eps: f64) -> C2Params {
        (0..64)
            .map(|s| C2Params::with_seeded_oracle(z.len(), eps, s).unwrap())
            .find(|p| p.oracle.eval(z).unwrap() == want)
            .unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn key_hex_round_trip() {
        let o = HardFunctionOracle::from_seed(9, 4).unwrap();
        assert_eq!(&key_from_hex(&o.key_hex()).unwrap(), o.key());
        assert!(key_from_hex("abcd").is_err());
        assert!(key_from_hex(&"zz".repeat(32)).is_err());
    }

    #[test]
    fn oracle_is_deterministic_and_checks_length() {
        let o = HardFunctionOracle::from_seed(1, 3).unwrap();
        let z = [true, false, true];
        assert_eq!(o.eval(&z).unwrap(), o.eval(&z).unwrap());
        assert!(matches!(o.eval(&[true]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn oracle_balance_and_key_independence() {
        let (a, b) = (HardFunctionOracle::from_seed(1, 32).unwrap(), HardFunctionOracle::from_seed(2, 32).unwrap());
        let seed = RngSeed::new(77);
        let m = 100_000u64;
        let (mut ones, mut agree) = (0u64, 0u64);
        for i in 0..m {
            let mut rng = seed.rng_for(i);
            let z: Vec<bool> = (0..32).map(|_| rng.random()).collect();
            let (ga, gb) = (a.eval(&z).unwrap(), b.eval(&z).unwrap());
            ones += ga as u64;
            agree += (ga == gb) as u64;
        }
        assert!((ones as f64 / m as f64 - 0.5).abs() < 0.01);
        assert!((agree as f64 / m as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn hex_round_trip() {
        let z = [true, false, true, true, false, false, false, true, true];
        assert_eq!(z_to_hex(&z), "b18");
        assert_eq!(z_from_hex("b18", 9).unwrap(), z.to_vec());
        assert_eq!(z_to_hex(&[true, false]), "8");
        assert!(z_from_hex("b1", 9).is_err());
    }

    #[test]
    fn encode_worked_example() {
        let z = [true, false];
        let params = params_with_g(&z, true, 0.1);
        let e = encode(&params, &z, &[0.3, 0.95], &[0.2, 0.6]).unwrap();
        assert!(close(&e.alpha, &[0.3, 0.5, 0.95, 0.15]), "{:?}", e.alpha);
        assert!(close(&e.beta, &[0.2, 0.7, 0.6, 0.6]), "{:?}", e.beta);
        assert_eq!(e.y, Label::ONE);
        assert_eq!(e.x().len(), 8);
    }

    #[test]
    fn encode_zero_label_and_errors() {
        let z = [true, false, true];
        let params = params_with_g(&z, false, 0.1);
        let e = encode(&params, &z, &[0.1, 0.5, 0.9], &[0.2, 0.3, 0.4]).unwrap();
        assert!(e.alpha.chunks(2).all(|p| p[0] == p[1]));
        assert_eq!(e.beta[2], e.beta[3]);
        assert_eq!(e.y, Label::ZERO);
        assert!(encode(&params, &z, &[0.1, 1.0, 0.9], &[0.2, 0.3, 0.4]).is_err());
        assert!(encode(&params, &z, &[0.1, 0.5], &[0.2, 0.3, 0.4]).is_err());
    }

    #[test]
    fn params_validation() {
        let o = HardFunctionOracle::from_seed(0, 4).unwrap();
        assert!(C2Params::new(4, 0.125, o.clone()).is_err());
        assert!(C2Params::new(4, 0.0, o.clone()).is_err());
        assert!(C2Params::new(5, 0.1, o.clone()).is_err());
        assert_eq!(C2Params::new(4, 0.1, o).unwrap().dim(), 16);
    }

    #[test]
    fn simple_classifier_on_clean_inputs() {
        for seed in 0..200u64 {
            let params = C2Params::with_seeded_oracle(3, 0.1, seed % 7).unwrap();
            let s = sample_c2(&params, &mut RngSeed::new(seed).rng_for(0));
            let x = s.example.x();
            assert!(x.iter().all(|v| (0.0..1.0).contains(v)));
            assert_eq!(simple_classify(&x, 0.1).unwrap(), s.example.y);
            assert_eq!(robust_classify(&x, &params.oracle).unwrap(), s.example.y);
            assert_eq!(decode_z(&s.example.beta), s.z);
        }
        assert!(simple_classify(&[0.1, 0.2, 0.3], 0.1).is_err());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_z(&[0.2, 0.7, 0.6, 0.6]), vec![true, false]);
        assert_eq!(decode_z(&[0.2 + 0.124, 0.7 - 0.124, 0.6 - 0.124, 0.6 + 0.124]), vec![true, false]);
        assert_eq!(decode_z(&[0.0, 0.25]), vec![true]);
    }

    #[test]
    fn canonical_examples() {
        let x = [0.3, 0.5, 0.95, 0.15, 0.2, 0.7, 0.6, 0.6];
        let d = canonical_adversary(&x, Label::ONE, 0.1);
        assert_eq!(d, vec![0.1, -0.1, 0.1, -0.1, 0.0, 0.0, 0.0, 0.0]);
        let moved: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        assert!(close(&moved[..2], &[0.4, 0.4]));
        assert!(close(&moved[2..4], &[1.05, 0.05]));
        assert!(circular_distance(moved[2], moved[3]) < 1e-12);
        assert_eq!(canonical_adversary(&x, Label::ZERO, 0.1), vec![0.0; 8]);
    }

    #[test]
    fn robust_survives_attacks() {
        let params = C2Params::with_seeded_oracle(6, 0.12, 3).unwrap();
        let noise = UniformNoise::new(0.12).unwrap();
        let seed = RngSeed::new(2);
        for i in 0..300 {
            let s = sample_c2(&params, &mut seed.rng_for(i));
            let x = s.example.x();
            let d = canonical_adversary(&x, s.example.y, 0.12);
            let xa: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
            assert_eq!(robust_classify(&xa, &params.oracle).unwrap(), s.example.y);
            assert_eq!(simple_classify(&xa, 0.12).unwrap(), Label::ZERO);
            for r in 0..10 {
                let d = noise.draw(x.len(), &mut seed.child(1).rng_for(i * 10 + r));
                let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
                assert_eq!(robust_classify(&xn, &params.oracle).unwrap(), s.example.y);
            }
        }
    }

    #[test]
    fn independence_report_shape() {
        let params = C2Params::with_seeded_oracle(3, 0.1, 5).unwrap();
        assert!(alpha_independence_check(&params, 100, RngSeed::new(1)).is_err());
        let r = alpha_independence_check(&params, 20_000, RngSeed::new(1)).unwrap();
        assert_eq!(r.representative_ks.len(), 3);
        assert!(r.max_distance.iter().all(|&d| d < ZERO_DISTANCE_TOL));
        assert!(r.distance_ks.iter().all(|&k| k == 0.0));
        assert_eq!(r.out_of_range_fraction[0], 0.0);
        assert!((r.out_of_range_fraction[1] - 0.1).abs() < 0.02);
        assert_eq!(r.tests(), 6);
        assert!(r.family_critical_value > r.critical_value);
    }
}
