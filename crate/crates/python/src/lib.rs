//! Python bindings: classifiers, exact and Monte Carlo losses, the tradeoff
//! sweep, the keyed label function and the samplers of both constructions.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use robustlab::construction1 as c1;
use robustlab::construction2 as c2;
use robustlab::rng::streams;
use robustlab::{attacks, estimate, tradeoff, verify, Error, ExampleSource, Label, RngSeed};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(m) => PyIOError::new_err(m),
        Error::Resource(m) | Error::Verification(m) | Error::UnsupportedExact(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for robustlab::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn signed_label(y: i8) -> PyResult<Label> {
    match y {
        1 => Ok(Label::PLUS),
        -1 => Ok(Label::MINUS),
        _ => Err(PyValueError::new_err(format!("label must be +1 or -1, got {y}"))),
    }
}

fn binary_label(y: i8) -> PyResult<Label> {
    match y {
        0 | 1 => Ok(Label(y)),
        _ => Err(PyValueError::new_err(format!("label must be 0 or 1, got {y}"))),
    }
}

/// Loss value with its Hoeffding interval.
#[pyclass(frozen, skip_from_py_object, name = "LossEstimate", module = "robustlab_py")]
#[derive(Clone)]
pub struct PyLossEstimate {
    inner: estimate::LossEstimate,
}

#[pymethods]
impl PyLossEstimate {
    #[getter]
    fn value(&self) -> f64 {
        self.inner.value
    }
    #[getter]
    fn method(&self) -> &'static str {
        match self.inner.method {
            estimate::Method::Exact => "exact",
            estimate::Method::MonteCarlo => "monte-carlo",
        }
    }
    #[getter]
    fn samples(&self) -> u64 {
        self.inner.samples
    }
    #[getter]
    fn half_width(&self) -> f64 {
        self.inner.half_width
    }
    #[getter]
    fn confidence(&self) -> f64 {
        self.inner.confidence
    }
    #[getter]
    fn tightness(&self) -> &'static str {
        match self.inner.tightness {
            estimate::Tightness::Value => "value",
            estimate::Tightness::LowerBound => "lower_bound",
        }
    }
    fn lower(&self) -> f64 {
        self.inner.lower()
    }
    fn upper(&self) -> f64 {
        self.inner.upper()
    }
    fn __repr__(&self) -> String {
        format!(
            "LossEstimate(value={}, method='{}', samples={}, half_width={})",
            self.inner.value,
            self.method(),
            self.inner.samples,
            self.inner.half_width
        )
    }
}

impl From<estimate::LossEstimate> for PyLossEstimate {
    fn from(inner: estimate::LossEstimate) -> Self {
        PyLossEstimate { inner }
    }
}

/// `sign(<w, x>)` with ties going to +1.
#[pyclass(frozen, skip_from_py_object, name = "LinearThresholdClassifier", module = "robustlab_py")]
#[derive(Clone)]
pub struct PyLtf {
    inner: c1::LinearThresholdClassifier,
}

#[pymethods]
impl PyLtf {
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        Ok(PyLtf { inner: c1::LinearThresholdClassifier::new(weights).py_err()? })
    }

    #[staticmethod]
    fn majority(n: usize) -> PyResult<Self> {
        Ok(PyLtf { inner: c1::LinearThresholdClassifier::majority(n).py_err()? })
    }

    /// Weight vector `1^k 0^(n-k)`.
    #[staticmethod]
    fn support(k: usize, n: usize) -> PyResult<Self> {
        Ok(PyLtf { inner: c1::LinearThresholdClassifier::support(k, n).py_err()? })
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }
    fn l1_norm(&self) -> f64 {
        self.inner.l1_norm()
    }
    fn l2_norm(&self) -> f64 {
        self.inner.l2_norm()
    }
    fn decision_score(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.decision_score(&x).py_err()
    }
    fn predict(&self, x: Vec<f64>) -> PyResult<i8> {
        Ok(c1::ltf_predict(&self.inner, &x).py_err()?.value())
    }

    #[pyo3(signature = (p = c1::DEFAULT_AGREEMENT))]
    fn exact_std_loss(&self, p: f64) -> PyResult<PyLossEstimate> {
        Ok(c1::exact_std_loss_ltf(&self.inner, p).py_err()?.into())
    }

    #[pyo3(signature = (eps, p = c1::DEFAULT_AGREEMENT))]
    fn exact_adv_loss(&self, eps: f64, p: f64) -> PyResult<PyLossEstimate> {
        Ok(c1::exact_adv_loss_ltf(&self.inner, p, eps).py_err()?.into())
    }

    #[pyo3(signature = (eps, m, seed = 0, p = c1::DEFAULT_AGREEMENT, confidence = estimate::DEFAULT_CONFIDENCE))]
    fn noisy_loss(&self, py: Python<'_>, eps: f64, m: u64, seed: u64, p: f64, confidence: f64) -> PyResult<PyLossEstimate> {
        let c = self.inner.clone();
        py.detach(move || c1::noisy_loss_ltf_at(&c, p, eps, m, RngSeed::new(seed), confidence))
            .py_err()
            .map(Into::into)
    }

    /// Closed-form worst-case perturbation; returns `(delta, success)`.
    fn optimal_attack(&self, x: Vec<f64>, y: i8, eps: f64) -> PyResult<(Vec<f64>, bool)> {
        let out = c1::optimal_ltf_attack(&self.inner, &x, signed_label(y)?, eps).py_err()?;
        Ok((out.delta, out.success))
    }

    #[pyo3(signature = (eps, p = c1::DEFAULT_AGREEMENT))]
    fn azuma_bound(&self, eps: f64, p: f64) -> PyResult<f64> {
        c1::azuma_success_bound(&self.inner, p, eps).py_err()
    }

    fn __repr__(&self) -> String {
        format!("LinearThresholdClassifier(n={})", self.inner.dim())
    }
}

#[pyfunction]
#[pyo3(signature = (m, confidence = estimate::DEFAULT_CONFIDENCE))]
fn hoeffding_half_width(m: u64, confidence: f64) -> PyResult<f64> {
    estimate::hoeffding_half_width(m, confidence).py_err()
}

#[pyfunction]
fn circular_distance(u: f64, v: f64) -> f64 {
    robustlab::circle::circular_distance(u, v)
}

#[pyfunction]
fn rounding_predict(x: Vec<f64>) -> PyResult<i8> {
    Ok(c1::rounding_predict(&x).py_err()?.value())
}

/// Law of `sum_i w_i z_i`, `z_i = +1` w.p. `p`, as `(value, probability)` pairs.
#[pyfunction]
fn weighted_sum_distribution(w: Vec<i64>, p: f64) -> PyResult<Vec<(i64, f64)>> {
    Ok(c1::weighted_sum_distribution(&w, p).py_err()?.iter().filter(|(_, m)| *m > 0.0).collect())
}

/// Brute-force corner attack; returns `(delta, success)`.
#[pyfunction]
#[pyo3(signature = (weights, x, y, eps))]
fn corner_search_ltf(weights: Vec<f64>, x: Vec<f64>, y: i8, eps: f64) -> PyResult<(Vec<f64>, bool)> {
    let c = c1::LinearThresholdClassifier::new(weights).py_err()?;
    let out = attacks::corner_search_attack(&c, &x, signed_label(y)?, eps, attacks::DEFAULT_CORNER_DIM_LIMIT).py_err()?;
    Ok((out.delta, out.success))
}

#[pyfunction]
fn gamma_paper(eps: f64) -> PyResult<f64> {
    tradeoff::gamma_paper(eps).py_err()
}

#[pyfunction]
#[pyo3(signature = (eps, p = c1::DEFAULT_AGREEMENT))]
fn gamma_valid(eps: f64, p: f64) -> PyResult<f64> {
    tradeoff::gamma_valid(eps, p).py_err()
}

#[pyclass(frozen, skip_from_py_object, get_all, name = "TradeoffRow", module = "robustlab_py")]
#[derive(Clone)]
pub struct PyTradeoffRow {
    k: usize,
    eps: f64,
    p: f64,
    n: usize,
    std_loss: f64,
    adv_loss: f64,
    gamma_paper: f64,
    gamma_valid: f64,
    bound_lhs_paper: f64,
    bound_lhs_valid: f64,
}

#[pyfunction]
#[pyo3(signature = (n, eps, p = c1::DEFAULT_AGREEMENT, ks = None))]
fn sweep_support(n: usize, eps: f64, p: f64, ks: Option<Vec<usize>>) -> PyResult<Vec<PyTradeoffRow>> {
    let ks = ks.unwrap_or_else(|| (1..=n).collect());
    let rows = tradeoff::sweep_support(n, eps, p, &ks).py_err()?;
    Ok(rows
        .into_iter()
        .map(|r| PyTradeoffRow {
            k: r.k,
            eps: r.eps,
            p: r.p,
            n: r.n,
            std_loss: r.std_loss,
            adv_loss: r.adv_loss,
            gamma_paper: r.gamma_paper,
            gamma_valid: r.gamma_valid,
            bound_lhs_paper: r.bound_lhs_paper,
            bound_lhs_valid: r.bound_lhs_valid,
        })
        .collect())
}

/// Keyed pseudorandom label function `g: {0,1}^n -> {0,1}`.
#[pyclass(frozen, skip_from_py_object, name = "HardFunctionOracle", module = "robustlab_py")]
#[derive(Clone)]
pub struct PyOracle {
    inner: c2::HardFunctionOracle,
}

#[pymethods]
impl PyOracle {
    #[staticmethod]
    fn from_seed(seed: u64, n: usize) -> PyResult<Self> {
        Ok(PyOracle { inner: c2::HardFunctionOracle::from_seed(seed, n).py_err()? })
    }

    #[staticmethod]
    fn from_hex(key: &str, n: usize) -> PyResult<Self> {
        let bytes = robustlab::construction2::key_from_hex(key).py_err()?;
        Ok(PyOracle { inner: c2::HardFunctionOracle::new(bytes, n).py_err()? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }
    #[getter]
    fn key_hex(&self) -> String {
        self.inner.key_hex()
    }
    fn eval(&self, z: Vec<bool>) -> PyResult<bool> {
        self.inner.eval(&z).py_err()
    }
    /// `P_z[g(z) = 1]` by enumeration.
    fn exact_bias(&self) -> PyResult<f64> {
        self.inner.exact_bias().py_err()
    }
}

#[pyfunction]
fn simple_classify(x: Vec<f64>, eps: f64) -> PyResult<i8> {
    Ok(c2::simple_classify(&x, eps).py_err()?.value())
}

#[pyfunction]
fn robust_classify(x: Vec<f64>, oracle: &PyOracle) -> PyResult<i8> {
    Ok(c2::robust_classify(&x, &oracle.inner).py_err()?.value())
}

#[pyfunction]
fn decode_z(beta: Vec<f64>) -> Vec<bool> {
    c2::decode_z(&beta)
}

#[pyfunction]
fn canonical_adversary(x: Vec<f64>, y: i8, eps: f64) -> PyResult<Vec<f64>> {
    Ok(c2::canonical_adversary(&x, binary_label(y)?, eps))
}

/// `m` draws of the agreement construction; identical to `robustlab sample`.
#[pyfunction]
#[pyo3(signature = (n, m, seed = 0, p = c1::DEFAULT_AGREEMENT, eps = 0.5))]
fn sample_c1(n: usize, m: u64, seed: u64, p: f64, eps: f64) -> PyResult<(Vec<Vec<f64>>, Vec<i8>)> {
    let params = c1::C1Params::new(n, p, eps).py_err()?;
    let data = RngSeed::new(seed).child(streams::DATA);
    Ok((0..m).map(|i| {
        let ex = params.sample(&mut data.rng_for(i));
        (ex.x, ex.y.value())
    }).unzip())
}

/// `(z_hex, x, y)` columns.
type C2Batch = (Vec<String>, Vec<Vec<f64>>, Vec<i8>);

/// `m` draws of the encoding construction as `(z_hex, x, y)` lists; the
/// oracle defaults to the one `robustlab sample` derives from `seed`.
#[pyfunction]
#[pyo3(signature = (n, m, seed = 0, eps = 0.1, oracle = None))]
fn sample_c2(
    n: usize,
    m: u64,
    seed: u64,
    eps: f64,
    oracle: Option<&PyOracle>,
) -> PyResult<C2Batch> {
    let oracle = match oracle {
        Some(o) => o.inner.clone(),
        None => c2::HardFunctionOracle::from_seed(seed, n).py_err()?,
    };
    let params = c2::C2Params::new(n, eps, oracle).py_err()?;
    let data = RngSeed::new(seed).child(streams::DATA);
    let (mut zs, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..m {
        let s = c2::sample_c2(&params, &mut data.rng_for(i));
        zs.push(c2::z_to_hex(&s.z));
        xs.push(s.example.x());
        ys.push(s.example.y.value());
    }
    Ok((zs, xs, ys))
}

/// Loss of the construction-2 classifiers. `classifier` is "simple" or
/// "robust"; `loss` is "std", "noisy" or "canonical". With
/// `random_oracle=True` each draw uses a fresh `g` (simple classifier only).
#[pyfunction]
#[pyo3(signature = (classifier, loss, n, eps, m, seed = 0, random_oracle = false))]
#[allow(clippy::too_many_arguments)]
fn c2_loss(
    py: Python<'_>,
    classifier: &str,
    loss: &str,
    n: usize,
    eps: f64,
    m: u64,
    seed: u64,
    random_oracle: bool,
) -> PyResult<PyLossEstimate> {
    let params = c2::C2Params::new(n, eps, c2::HardFunctionOracle::from_seed(seed, n).py_err()?).py_err()?;
    let random = c2::RandomFunctionSource::new(n, eps).py_err()?;
    let source: &dyn ExampleSource = if random_oracle { &random } else { &params };
    let clf: Box<dyn robustlab::Classifier> = match (classifier, random_oracle) {
        ("simple", _) => Box::new(c2::SimpleC2Classifier { eps }),
        ("robust", false) => Box::new(c2::RobustC2Classifier { oracle: params.oracle.clone() }),
        ("robust", true) => return Err(PyValueError::new_err("the robust classifier needs a fixed oracle")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown classifier {other:?}"))),
    };
    let seed = RngSeed::new(seed);
    let conf = estimate::DEFAULT_CONFIDENCE;
    let est = py.detach(|| match loss {
        "std" => robustlab::monte_carlo_loss(source, clf.as_ref(), None, m, seed, conf),
        "noisy" => {
            let noise = attacks::UniformNoise::new(eps)?;
            robustlab::monte_carlo_loss(source, clf.as_ref(), Some(&noise), m, seed, conf)
        }
        "canonical" => attacks::adversarial_loss(clf.as_ref(), source, &c2::CanonicalAdversary { eps }, m, seed, conf),
        other => Err(Error::Parameter(format!("unknown loss {other:?}"))),
    });
    est.py_err().map(Into::into)
}

/// Runs a verification suite; returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (suite = "all", budget = "fast", seed = 0))]
fn run_verify(py: Python<'_>, suite: &str, budget: &str, seed: u64) -> PyResult<(bool, String)> {
    let suite = match suite {
        "thm1" => verify::Suite::Thm1,
        "thm2" => verify::Suite::Thm2,
        "thm3" => verify::Suite::Thm3,
        "all" => verify::Suite::All,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    let budget = match budget {
        "fast" => verify::Budget::Fast,
        "full" => verify::Budget::Full,
        other => return Err(PyValueError::new_err(format!("unknown budget {other:?}"))),
    };
    let report = py.detach(|| verify::run(suite, budget, seed)).py_err()?;
    Ok((report.passed(), report.render()))
}

#[pymodule]
pub fn robustlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", robustlab::VERSION)?;
    m.add_class::<PyLossEstimate>()?;
    m.add_class::<PyLtf>()?;
    m.add_class::<PyTradeoffRow>()?;
    m.add_class::<PyOracle>()?;
    m.add_function(wrap_pyfunction!(hoeffding_half_width, m)?)?;
    m.add_function(wrap_pyfunction!(circular_distance, m)?)?;
    m.add_function(wrap_pyfunction!(rounding_predict, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_sum_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(corner_search_ltf, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_paper, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_valid, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_support, m)?)?;
    m.add_function(wrap_pyfunction!(simple_classify, m)?)?;
    m.add_function(wrap_pyfunction!(robust_classify, m)?)?;
    m.add_function(wrap_pyfunction!(decode_z, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_adversary, m)?)?;
    m.add_function(wrap_pyfunction!(sample_c1, m)?)?;
    m.add_function(wrap_pyfunction!(sample_c2, m)?)?;
    m.add_function(wrap_pyfunction!(c2_loss, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
