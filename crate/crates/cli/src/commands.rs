use std::fs;
use std::io::{self, Write};
use std::path::Path;

use qcoherence::channels::{find_tsallis_alpha_violation, Counterexample};
use qcoherence::measures::{c_q_max, Measure, MeasureReport};
use qcoherence::states::maximally_coherent;
use qcoherence::verify::{run_verify, VerifyConfig};
use qcoherence::{AlphaParam, DensityMatrix, EntropyParam, Error, OptimizerConfig};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, Format, SweepRange};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    VerifyFailed = 1,
    BadInput = 2,
    Invariant = 3,
    NotConverged = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    fn new(status: Status, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::MalformedState(_)
            | Error::InvalidArgument(_)
            | Error::ParameterOutOfRange { .. }
            | Error::InvalidProbabilities(_)
            | Error::InvalidBloch { .. } => Status::BadInput,
            Error::EigenNonConvergence { .. } => Status::NotConverged,
            _ => Status::Invariant,
        };
        Self::new(status, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<Status> {
    let mut optimizer = OptimizerConfig { seed: cli.seed, ..OptimizerConfig::default() };
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::new(Status::BadInput, format!("--tol must be positive, got {tol}")));
        }
        optimizer.conv_tol = tol;
    }
    match &cli.command {
        Command::Coherence { state, measure, q } => coherence(cli, &optimizer, state, *measure, *q),
        Command::Sweep { state, measure, sweep } => sweep_cmd(cli, &optimizer, state, *measure, sweep),
        Command::Verify { trials, d, inject_fault } => {
            let cfg = VerifyConfig {
                trials: *trials,
                dims: d.clone(),
                seed: cli.seed,
                optimizer,
                inject_corrupt_channel: *inject_fault,
            };
            verify(cli, &cfg)
        }
        Command::SearchViolation { measure, d, q, trials } => search(cli, *measure, *d, *q, *trials),
        Command::MaxCoherent { d, q } => max_coherent(cli, *d, *q),
    }
}

fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(Status::BadInput, format!("cannot read {}: {e}", path.display())))?;
    Ok(DensityMatrix::from_json_str(&text)?)
}

fn emit(cli: &Cli, body: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::new(Status::BadInput, format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::new(Status::BadInput, format!("cannot write to stdout: {e}"))),
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Resolves the order used by `measure`, validating it.
fn resolve_q(measure: Measure, q: Option<f64>) -> CliResult<Option<f64>> {
    let q = match (measure, q) {
        (Measure::Cq | Measure::TsallisAlpha, None) => {
            return Err(CliError::new(Status::BadInput, format!("--q is required for measure {measure}")));
        }
        (Measure::CHalf, None) => Some(0.5),
        (_, q) => q,
    };
    if let Some(q) = q {
        measure.validate_q(q)?;
    }
    Ok(q)
}

#[derive(Debug, Serialize)]
struct Row {
    q: Option<f64>,
    value: f64,
    converged: bool,
    iterations: usize,
}

/// Evaluates and re-checks the value against the measure's range.
fn evaluate(rho: &DensityMatrix, measure: Measure, q: Option<f64>, cfg: &OptimizerConfig) -> CliResult<MeasureReport> {
    let report = measure.evaluate(rho, q.unwrap_or(f64::NAN), cfg)?;
    let v = report.value;
    let upper = match (measure, q) {
        (Measure::Cq, Some(q)) => Some(c_q_max(rho.dim(), EntropyParam::measure(q)?)? + 1e-8),
        _ => None,
    };
    if !v.is_finite() || v < -1e-8 || upper.is_some_and(|u| v > u) {
        return Err(CliError::new(
            Status::Invariant,
            format!("{measure} value {v} outside its valid range"),
        ));
    }
    Ok(report)
}

fn csv_body(rows: &[Row]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::new(Status::BadInput, e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::new(Status::BadInput, e.to_string()))?;
    let mut body = format!("# schema_version={SCHEMA_VERSION}\n");
    body.push_str(&String::from_utf8(bytes).expect("csv is utf-8"));
    Ok(body)
}

fn coherence(cli: &Cli, cfg: &OptimizerConfig, state: &Path, measure: Measure, q: Option<f64>) -> CliResult<Status> {
    let q = resolve_q(measure, q)?;
    let rho = read_state(state)?;
    let report = evaluate(&rho, measure, q, cfg)?;
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "measure": measure.name(),
            "dim": rho.dim(),
            "q": q,
            "value": report.value,
            "optimal_sigma": report.optimal_sigma,
            "converged": report.converged,
            "iterations": report.iterations,
        })),
        Format::Csv => csv_body(&[Row { q, value: report.value, converged: report.converged, iterations: report.iterations }])?,
    };
    emit(cli, &body)?;
    Ok(if report.converged { Status::Success } else { Status::NotConverged })
}

fn sweep_cmd(cli: &Cli, cfg: &OptimizerConfig, state: &Path, measure: Measure, range: &SweepRange) -> CliResult<Status> {
    let qs = range.points();
    for &q in &qs {
        measure.validate_q(q)?;
    }
    let rho = read_state(state)?;
    let mut rows = Vec::with_capacity(qs.len());
    for &q in &qs {
        let r = evaluate(&rho, measure, Some(q), cfg)?;
        rows.push(Row { q: Some(q), value: r.value, converged: r.converged, iterations: r.iterations });
    }
    let body = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_body(&rows)?,
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "measure": measure.name(),
            "dim": rho.dim(),
            "rows": rows,
        })),
    };
    emit(cli, &body)?;
    Ok(if rows.iter().all(|r| r.converged) { Status::Success } else { Status::NotConverged })
}

fn require_json(cli: &Cli, command: &str) -> CliResult<()> {
    if cli.format == Some(Format::Csv) {
        return Err(CliError::new(Status::BadInput, format!("{command} only writes JSON")));
    }
    Ok(())
}

fn verify(cli: &Cli, cfg: &VerifyConfig) -> CliResult<Status> {
    require_json(cli, "verify")?;
    let report = run_verify(cfg)?;
    emit(cli, &to_json(&report))?;
    if report.passed() {
        return Ok(Status::Success);
    }
    for s in report.failed_hard_suites() {
        eprintln!("suite failed: {} ({}/{} passed)", s.name, s.passes, s.trials);
    }
    Ok(Status::VerifyFailed)
}

#[derive(Serialize)]
struct SearchReport {
    schema_version: u32,
    measure: &'static str,
    d: usize,
    q: f64,
    trials: usize,
    seed: u64,
    found: bool,
    result: String,
    counterexample: Option<Counterexample>,
}

fn search(cli: &Cli, measure: Measure, d: usize, q: f64, trials: usize) -> CliResult<Status> {
    require_json(cli, "search-violation")?;
    if measure != Measure::TsallisAlpha {
        let why = if measure == Measure::Cq {
            "C_q is strongly monotone under incoherent operations, so no violation exists to search for"
        } else {
            "only the Tsallis α-coherence is searched"
        };
        return Err(CliError::new(
            Status::BadInput,
            format!("search-violation refuses measure {measure}: {why}; use --measure tsallis-alpha"),
        ));
    }
    let a = AlphaParam::new(q)?;
    let hit = find_tsallis_alpha_violation(d, a, trials, cli.seed)?;
    let result = match &hit {
        Some(c) => format!("violation found at trial {}: {} > {}", c.trial, c.lhs, c.rhs),
        None => format!("not found in {trials} trials"),
    };
    let report = SearchReport {
        schema_version: SCHEMA_VERSION,
        measure: measure.name(),
        d,
        q,
        trials,
        seed: cli.seed,
        found: hit.is_some(),
        result,
        counterexample: hit,
    };
    emit(cli, &to_json(&report))?;
    Ok(Status::Success)
}

fn max_coherent(cli: &Cli, d: usize, q: Option<f64>) -> CliResult<Status> {
    require_json(cli, "max-coherent")?;
    if d == 0 {
        return Err(CliError::new(Status::BadInput, "--d must be at least 1"));
    }
    let body = match q {
        None => {
            let mut s = maximally_coherent(d, &vec![0.0; d])?.to_json_string();
            s.push('\n');
            s
        }
        Some(q) => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "d": d,
            "q": q,
            "c_q_max": c_q_max(d, EntropyParam::measure(q)?)?,
        })),
    };
    emit(cli, &body)?;
    Ok(Status::Success)
}
