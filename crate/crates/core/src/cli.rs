//! Command line front end: dataset sampling, loss evaluation, the tradeoff
//! sweep and the verification suites.
//!
//! Exit codes: 0 success, 2 usage error, 3 verification failure, 4 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::attacks::{CornerSearch, RandomCorner, UniformNoise};
use crate::construction1::{
    exact_adv_loss_ltf, exact_std_loss_ltf, C1Params, LinearThresholdClassifier, OptimalLtfAdversary,
    RoundingClassifier, DEFAULT_AGREEMENT,
};
use crate::construction2::{
    key_from_hex, sample_c2, z_to_hex, C2Params, CanonicalAdversary, HardFunctionOracle, RandomFunctionSource, RobustC2Classifier,
    SimpleC2Classifier,
};
use crate::error::Error;
use crate::estimate::{monte_carlo_loss, LossEstimate, Tightness, DEFAULT_CONFIDENCE};
use crate::format::fmt_g17;
use crate::rng::{streams, RngSeed};
use crate::tradeoff::{gamma_valid, sweep_support, verify_tradeoff, CSV_HEADER};
use crate::types::{Classifier, ExampleSource, Perturber};
use crate::verify::{self, Budget, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "robustlab", version, about = "Robustness vs. accuracy of simple classifiers on two synthetic tasks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write labeled examples from a construction.
    Sample(SampleArgs),
    /// Evaluate a classifier's standard, noisy or adversarial loss.
    Eval(EvalArgs),
    /// Sweep support sizes of {0,1}-weight classifiers and check the tradeoff bound.
    Tradeoff(TradeoffArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    C1,
    C2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// How the c2 label function `g` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// One keyed function for the whole run.
    Fixed,
    /// A fresh random key per example.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    Auto,
    Exact,
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[arg(long)]
    pub n: Option<usize>,
    /// Perturbation radius (default 0.5 for c1, 0.1 for c2).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Coordinate agreement probability (c1 only).
    #[arg(long, default_value_t = DEFAULT_AGREEMENT)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 64 hex digits; the c2 oracle key defaults to one derived from --seed.
    #[arg(long)]
    pub key: Option<String>,
    #[arg(long, value_enum, default_value_t = OracleMode::Fixed)]
    pub oracle: OracleMode,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (0 = rayon default). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// majority | ltf:<w1,w2,...> | rounding | c2-simple | c2-robust
    #[arg(long)]
    pub classifier: String,
    /// std | noisy | adv | adv:<adversary>
    #[arg(long, default_value = "std")]
    pub loss: String,
    /// optimal | corner | canonical | noise | random-corner | none
    #[arg(long)]
    pub adversary: Option<String>,
    #[arg(long, value_enum, default_value_t = EvalMethod::Auto)]
    pub method: EvalMethod,
    /// Comma-separated dimensions; writes one CSV row per n instead of a JSON object.
    #[arg(long)]
    pub ns: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TradeoffArgs {
    #[arg(long, value_enum, default_value_t = Construction::C1)]
    pub construction: Construction,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_AGREEMENT)]
    pub p: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value_t = Budget::Fast)]
    pub budget: Budget,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::Verification(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: EXIT_IO, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sample(a) => with_workers(a.run.workers, || cmd_sample(&a)),
        Command::Eval(a) => with_workers(a.run.workers, || cmd_eval(&a)),
        Command::Tradeoff(a) => cmd_tradeoff(&a),
        Command::Verify(a) => with_workers(a.workers, || cmd_verify(&a)),
    }
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
    if workers == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(e.to_string()))?;
    pool.install(f)
}

/// A validated construction instance.
enum Instance {
    C1(C1Params),
    C2(C2Params),
    C2Random(RandomFunctionSource),
}

impl Instance {
    fn source(&self) -> &dyn ExampleSource {
        match self {
            Instance::C1(p) => p,
            Instance::C2(p) => p,
            Instance::C2Random(p) => p,
        }
    }

    fn eps(&self) -> f64 {
        match self {
            Instance::C1(p) => p.eps(),
            Instance::C2(p) => p.eps(),
            Instance::C2Random(p) => p.eps,
        }
    }
}

fn build_instance(run: &RunArgs, n_hint: Option<usize>) -> CliResult<Instance> {
    let n = run.n.or(n_hint).ok_or_else(|| CliError::usage("--n is required"))?;
    if !(run.confidence > 0.0 && run.confidence < 1.0) {
        return Err(CliError::usage(format!("--confidence must lie in (0, 1), got {}", run.confidence)));
    }
    if run.samples == 0 {
        return Err(CliError::usage("--samples must be >= 1"));
    }
    match run.construction {
        Construction::C1 => {
            if run.key.is_some() || run.oracle != OracleMode::Fixed {
                return Err(CliError::usage("--key and --oracle apply to c2 only"));
            }
            Ok(Instance::C1(C1Params::for_theorem(n, run.p, run.eps.unwrap_or(0.5))?))
        }
        Construction::C2 => {
            let eps = run.eps.unwrap_or(0.1);
            if run.oracle == OracleMode::Random {
                if run.key.is_some() {
                    return Err(CliError::usage("--key conflicts with --oracle random"));
                }
                return Ok(Instance::C2Random(RandomFunctionSource::new(n, eps)?));
            }
            let oracle = match &run.key {
                Some(k) => HardFunctionOracle::new(key_from_hex(k)?, n)?,
                None => HardFunctionOracle::from_seed(run.seed, n)?,
            };
            Ok(Instance::C2(C2Params::new(n, eps, oracle)?))
        }
    }
}

fn config_json(run: &RunArgs, inst: &Instance) -> serde_json::Value {
    match inst {
        Instance::C1(p) => json!({
            "construction": "c1", "n": p.n, "eps": p.eps(), "p": p.p,
            "seed": run.seed, "samples": run.samples, "confidence": run.confidence,
        }),
        Instance::C2(p) => json!({
            "construction": "c2", "n": p.n, "eps": p.eps(), "oracle_key": p.oracle.key_hex(),
            "seed": run.seed, "samples": run.samples, "confidence": run.confidence,
        }),
        Instance::C2Random(p) => json!({
            "construction": "c2", "n": p.n, "eps": p.eps, "oracle": "random",
            "seed": run.seed, "samples": run.samples, "confidence": run.confidence,
        }),
    }
}

fn preamble(command: &str, config: serde_json::Value, extra: serde_json::Value) -> String {
    let mut v = json!({ "artifact": "robustlab", "version": crate::VERSION, "command": command, "config": config });
    if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
        obj.extend(more.clone());
    }
    v.to_string()
}

fn open_out(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn csv_reals(xs: &[f64]) -> String {
    xs.iter().map(|&v| fmt_g17(v)).collect::<Vec<_>>().join(",")
}

pub fn cmd_sample(a: &SampleArgs) -> CliResult<()> {
    let run = &a.run;
    let inst = build_instance(run, None)?;
    if matches!(inst, Instance::C2Random(_)) {
        return Err(CliError::usage("sample needs a fixed oracle so that records can be re-labeled"));
    }
    let format = run.format.unwrap_or(Format::Csv);
    let seed = RngSeed::new(run.seed).child(streams::DATA);
    let n = run.n.unwrap_or_default();

    let columns: Vec<String> = match &inst {
        Instance::C1(_) => (1..=n).map(|i| format!("x{i}")).chain(["y".to_string()]).collect(),
        Instance::C2(p) => ["z".to_string()]
            .into_iter()
            .chain((1..=p.dim()).map(|i| format!("x{i}")))
            .chain(["y".to_string()])
            .collect(),
        Instance::C2Random(_) => unreachable!("rejected above"),
    };
    let head = preamble(
        "sample",
        config_json(run, &inst),
        json!({ "format": format, "columns": columns }),
    );

    // records are generated in parallel but collected in index order
    let records: Vec<String> = (0..run.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.rng_for(i);
            match &inst {
                Instance::C1(p) => {
                    let ex = p.sample(&mut rng);
                    match format {
                        Format::Csv => format!("{},{}", csv_reals(&ex.x), ex.y.value()),
                        Format::Json => json!({ "x": ex.x, "y": ex.y.value() }).to_string(),
                    }
                }
                Instance::C2Random(_) => unreachable!("rejected above"),
                Instance::C2(p) => {
                    let s = sample_c2(p, &mut rng);
                    let x = s.example.x();
                    match format {
                        Format::Csv => format!("{},{},{}", z_to_hex(&s.z), csv_reals(&x), s.example.y.value()),
                        Format::Json => {
                            json!({ "z": z_to_hex(&s.z), "x": x, "y": s.example.y.value() }).to_string()
                        }
                    }
                }
            }
        })
        .collect();

    let mut out = open_out(&run.out)?;
    writeln!(out, "{head}")?;
    for r in records {
        writeln!(out, "{r}")?;
    }
    out.flush()?;
    Ok(())
}

enum ClassifierSpec {
    Majority,
    Ltf(Vec<f64>),
    Rounding,
    C2Simple,
    C2Robust,
}

fn parse_classifier(spec: &str) -> CliResult<ClassifierSpec> {
    Ok(match spec {
        "majority" => ClassifierSpec::Majority,
        "rounding" => ClassifierSpec::Rounding,
        "c2-simple" => ClassifierSpec::C2Simple,
        "c2-robust" => ClassifierSpec::C2Robust,
        s if s.starts_with("ltf:") => {
            let w = s[4..]
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| CliError::usage(format!("bad ltf weights: {e}")))?;
            ClassifierSpec::Ltf(w)
        }
        other => return Err(CliError::usage(format!("unknown classifier {other:?}"))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LossKind {
    Std,
    Noisy,
    Adv,
}

fn parse_loss(loss: &str, adversary: &Option<String>) -> CliResult<(LossKind, Option<String>)> {
    let (kind, inline) = match loss.split_once(':') {
        Some((k, a)) => (k, Some(a.to_string())),
        None => (loss, None),
    };
    let kind = match kind {
        "std" => LossKind::Std,
        "noisy" => LossKind::Noisy,
        "adv" => LossKind::Adv,
        other => return Err(CliError::usage(format!("unknown loss {other:?}"))),
    };
    if kind != LossKind::Adv && (inline.is_some() || adversary.is_some()) {
        return Err(CliError::usage("an adversary only applies to --loss adv"));
    }
    if inline.is_some() && adversary.is_some() && inline != *adversary {
        return Err(CliError::usage("conflicting adversaries in --loss and --adversary"));
    }
    let adv = inline.or_else(|| adversary.clone());
    let adv = match kind {
        LossKind::Adv => Some(adv.unwrap_or_else(|| "optimal".into())),
        _ => None,
    };
    Ok((kind, adv))
}

struct Evaluation {
    estimate: LossEstimate,
    exact_available: bool,
    kind: LossKind,
    adversary: Option<String>,
    config: serde_json::Value,
}

fn evaluate(a: &EvalArgs, n: Option<usize>) -> CliResult<Evaluation> {
    let spec = parse_classifier(&a.classifier)?;
    let n_hint = match &spec {
        ClassifierSpec::Ltf(w) => Some(w.len()),
        _ => None,
    };
    let inst = build_instance(&RunArgs { n: n.or(a.run.n), ..a.run.clone() }, n_hint)?;
    let (kind, adversary) = parse_loss(&a.loss, &a.adversary)?;
    let eps = inst.eps();

    let classifier: Box<dyn Classifier> = match (&spec, &inst) {
        (ClassifierSpec::Majority, Instance::C1(p)) => Box::new(LinearThresholdClassifier::majority(p.n)?),
        (ClassifierSpec::Ltf(w), Instance::C1(p)) => {
            if w.len() != p.n {
                return Err(CliError::usage(format!("ltf has {} weights but n = {}", w.len(), p.n)));
            }
            Box::new(LinearThresholdClassifier::new(w.clone())?)
        }
        (ClassifierSpec::Rounding, Instance::C1(_)) => Box::new(RoundingClassifier),
        (ClassifierSpec::C2Simple, Instance::C2(_) | Instance::C2Random(_)) => Box::new(SimpleC2Classifier { eps }),
        (ClassifierSpec::C2Robust, Instance::C2Random(_)) => {
            return Err(CliError::usage("c2-robust needs the key; it cannot run with --oracle random"))
        }
        (ClassifierSpec::C2Robust, Instance::C2(p)) => Box::new(RobustC2Classifier { oracle: p.oracle.clone() }),
        _ => return Err(CliError::usage(format!("classifier {:?} does not apply to this construction", a.classifier))),
    };
    let ltf: Option<LinearThresholdClassifier> = match (&spec, &inst) {
        (ClassifierSpec::Majority, Instance::C1(p)) => Some(LinearThresholdClassifier::majority(p.n)?),
        (ClassifierSpec::Ltf(w), Instance::C1(_)) => Some(LinearThresholdClassifier::new(w.clone())?),
        _ => None,
    };

    let perturber: Option<Box<dyn Perturber>> = match (kind, adversary.as_deref()) {
        (LossKind::Std, _) => None,
        (LossKind::Noisy, _) => Some(Box::new(UniformNoise::new(eps)?)),
        (LossKind::Adv, Some("none")) => None,
        (LossKind::Adv, Some("noise")) => Some(Box::new(UniformNoise::new(eps)?)),
        (LossKind::Adv, Some("random-corner")) => Some(Box::new(RandomCorner { eps })),
        (LossKind::Adv, Some("corner")) => Some(Box::new(CornerSearch::new(eps))),
        (LossKind::Adv, Some("canonical")) => match inst {
            Instance::C2(_) | Instance::C2Random(_) => Some(Box::new(CanonicalAdversary { eps })),
            Instance::C1(_) => return Err(CliError::usage("the canonical adversary applies to c2 only")),
        },
        (LossKind::Adv, Some("optimal")) => match (&ltf, &spec) {
            (Some(c), _) => Some(Box::new(OptimalLtfAdversary { target: c.clone(), eps })),
            (None, ClassifierSpec::Rounding) => Some(Box::new(CornerSearch::new(eps))),
            _ => {
                return Err(CliError::usage(
                    "no per-instance optimal adversary is known for this classifier; try adv:canonical",
                ))
            }
        },
        (LossKind::Adv, Some(other)) => return Err(CliError::usage(format!("unknown adversary {other:?}"))),
        (LossKind::Adv, None) => unreachable!("parse_loss defaults the adversary"),
    };

    let exact_route = match (&ltf, kind, adversary.as_deref()) {
        (Some(c), LossKind::Std, _) | (Some(c), LossKind::Adv, Some("none")) if c.has_integer_weights() => {
            Some((c.clone(), None))
        }
        (Some(c), LossKind::Adv, Some("optimal" | "corner")) if c.has_integer_weights() => Some((c.clone(), Some(eps))),
        _ => None,
    };
    let exact_available = exact_route.is_some();
    let p = match &inst {
        Instance::C1(params) => params.p,
        _ => f64::NAN,
    };

    let estimate: LossEstimate = match (a.method, exact_route) {
        (EvalMethod::Exact, None) => {
            return Err(CliError::usage("no exact evaluator for this classifier/loss pair"))
        }
        (EvalMethod::Auto | EvalMethod::Exact, Some((c, None))) => exact_std_loss_ltf(&c, p)?,
        (EvalMethod::Auto | EvalMethod::Exact, Some((c, Some(e)))) => exact_adv_loss_ltf(&c, p, e)?,
        _ => {
            let seed = RngSeed::new(a.run.seed);
            match (kind, &perturber) {
                (LossKind::Adv, Some(adv)) => crate::attacks::adversarial_loss(
                    classifier.as_ref(),
                    inst.source(),
                    adv.as_ref(),
                    a.run.samples,
                    seed,
                    a.run.confidence,
                )?,
                _ => monte_carlo_loss(
                    inst.source(),
                    classifier.as_ref(),
                    perturber.as_deref(),
                    a.run.samples,
                    seed,
                    a.run.confidence,
                )?,
            }
        }
    };

    let config = config_json(&RunArgs { n: n.or(a.run.n), ..a.run.clone() }, &inst);
    Ok(Evaluation { estimate, exact_available, kind, adversary, config })
}

fn loss_name(kind: LossKind) -> &'static str {
    match kind {
        LossKind::Std => "std",
        LossKind::Noisy => "noisy",
        LossKind::Adv => "adv",
    }
}

fn method_name(e: &LossEstimate) -> &'static str {
    match e.method {
        crate::estimate::Method::Exact => "exact",
        crate::estimate::Method::MonteCarlo => "monte-carlo",
    }
}

fn tightness_name(e: &LossEstimate) -> &'static str {
    match e.tightness {
        Tightness::Value => "value",
        Tightness::LowerBound => "lower_bound",
    }
}

fn parse_ns(list: &str) -> CliResult<Vec<usize>> {
    let ns = list
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::usage(format!("bad --ns list: {e}")))?;
    if ns.is_empty() {
        return Err(CliError::usage("--ns is empty"));
    }
    Ok(ns)
}

pub fn cmd_eval(a: &EvalArgs) -> CliResult<()> {
    match &a.ns {
        Some(list) => cmd_eval_batch(a, &parse_ns(list)?),
        None => cmd_eval_single(a),
    }
}

fn cmd_eval_single(a: &EvalArgs) -> CliResult<()> {
    let Evaluation { estimate, exact_available, kind, adversary, config } = evaluate(a, None)?;
    let mut out = open_out(&a.run.out)?;
    match a.run.format.unwrap_or(Format::Json) {
        Format::Json => {
            let body = json!({
                "value": estimate.value,
                "method": method_name(&estimate),
                "samples": estimate.samples,
                "half_width": estimate.half_width,
                "confidence": estimate.confidence,
                "exact_available": exact_available,
                "tightness": tightness_name(&estimate),
                "classifier": a.classifier,
                "loss": loss_name(kind),
                "adversary": adversary,
                "config": config,
                "version": crate::VERSION,
            });
            writeln!(out, "{body}")?
        }
        Format::Csv => {
            writeln!(out, "{EVAL_CSV_HEADER}")?;
            writeln!(out, "{}", eval_csv_row(config["n"].as_u64().unwrap_or(0), &estimate, exact_available))?;
        }
    }
    out.flush()?;
    Ok(())
}

pub const EVAL_CSV_HEADER: &str = "n,value,method,samples,half_width,confidence,exact_available,tightness";

fn eval_csv_row(n: u64, e: &LossEstimate, exact_available: bool) -> String {
    format!(
        "{n},{},{},{},{},{},{},{}",
        fmt_g17(e.value),
        method_name(e),
        e.samples,
        fmt_g17(e.half_width),
        fmt_g17(e.confidence),
        exact_available,
        tightness_name(e)
    )
}

/// One CSV row per dimension, for loss-versus-n curves.
fn cmd_eval_batch(a: &EvalArgs, ns: &[usize]) -> CliResult<()> {
    let evals = ns.iter().map(|&n| evaluate(a, Some(n))).collect::<CliResult<Vec<_>>>()?;
    let mut config = evals[0].config.clone();
    config["n"] = json!(ns);
    let head = preamble(
        "eval",
        config,
        json!({
            "format": "csv",
            "classifier": a.classifier,
            "loss": loss_name(evals[0].kind),
            "adversary": evals[0].adversary,
        }),
    );
    let mut out = open_out(&a.run.out)?;
    writeln!(out, "{head}")?;
    writeln!(out, "{EVAL_CSV_HEADER}")?;
    for (n, ev) in ns.iter().zip(&evals) {
        writeln!(out, "{}", eval_csv_row(*n as u64, &ev.estimate, ev.exact_available))?;
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_tradeoff(a: &TradeoffArgs) -> CliResult<()> {
    if a.construction != Construction::C1 {
        return Err(CliError::usage("the tradeoff sweep is defined for c1 only"));
    }
    if a.n == 0 {
        return Err(CliError::usage("--n must be >= 1"));
    }
    if !(a.eps > 0.01 && a.eps < 1.0) {
        return Err(CliError::usage(format!("--eps must lie in (0.01, 1), got {}", a.eps)));
    }
    let ks: Vec<usize> = (1..=a.n).collect();
    let rows = sweep_support(a.n, a.eps, a.p, &ks)?;
    let report = verify_tradeoff(&rows, gamma_valid(a.eps, a.p)?)?;

    let head = preamble(
        "tradeoff",
        json!({ "construction": "c1", "n": a.n, "eps": a.eps, "p": a.p }),
        json!({ "format": "csv", "verified_gamma_valid": report.passed(), "min_slack_gamma_valid": report.min_slack }),
    );
    let mut out = open_out(&a.out)?;
    writeln!(out, "{head}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k,
            fmt_g17(r.eps),
            fmt_g17(r.p),
            r.n,
            fmt_g17(r.std_loss),
            fmt_g17(r.adv_loss),
            fmt_g17(r.gamma_paper),
            fmt_g17(r.gamma_valid),
            fmt_g17(r.bound_lhs_paper),
            fmt_g17(r.bound_lhs_valid)
        )?;
    }
    out.flush()?;
    report.into_result()?;
    Ok(())
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<()> {
    let report = verify::run(a.suite, a.budget, a.seed)?;
    match a.format {
        Format::Csv => print!("{}", report.render()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default()),
    }
    let failures: Vec<_> = report.failures().cloned().collect();
    if failures.is_empty() {
        println!("verdict: PASS");
        Ok(())
    } else {
        eprintln!("{}", serde_json::to_string(&failures).unwrap_or_default());
        println!("verdict: FAIL ({} checks)", failures.len());
        Err(CliError { code: EXIT_VERIFY, message: format!("{} verification checks failed", failures.len()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::from(Error::Verification("x".into())).code, EXIT_VERIFY);
        assert_eq!(CliError::from(Error::Io("x".into())).code, EXIT_IO);
        assert_eq!(CliError::from(Error::Parameter("x".into())).code, EXIT_USAGE);
        assert_eq!(CliError::from(Error::Hypothesis("x".into())).code, EXIT_USAGE);
    }

    #[test]
    fn loss_specs() {
        assert_eq!(parse_loss("std", &None).unwrap(), (LossKind::Std, None));
        assert_eq!(parse_loss("adv", &None).unwrap(), (LossKind::Adv, Some("optimal".into())));
        assert_eq!(parse_loss("adv:corner", &None).unwrap(), (LossKind::Adv, Some("corner".into())));
        assert_eq!(parse_loss("adv", &Some("noise".into())).unwrap(), (LossKind::Adv, Some("noise".into())));
        assert!(parse_loss("adv:corner", &Some("noise".into())).is_err());
        assert!(parse_loss("noisy", &Some("noise".into())).is_err());
        assert!(parse_loss("worst", &None).is_err());
    }

    #[test]
    fn classifier_specs() {
        assert!(matches!(parse_classifier("ltf:1, -2.5,3").unwrap(), ClassifierSpec::Ltf(w) if w == vec![1.0, -2.5, 3.0]));
        assert!(matches!(parse_classifier("majority").unwrap(), ClassifierSpec::Majority));
        assert!(parse_classifier("ltf:1,x").is_err());
        assert!(parse_classifier("svm").is_err());
        assert_eq!(parse_ns("2, 3,4").unwrap(), vec![2, 3, 4]);
        assert!(parse_ns("2,,3").is_err());
    }

    #[test]
    fn run_reports_usage_for_bad_flags() {
        assert_eq!(run(["robustlab", "eval", "--construction", "c3"]), EXIT_USAGE);
        assert_eq!(run(["robustlab", "--version"]), EXIT_OK);
    }
}
