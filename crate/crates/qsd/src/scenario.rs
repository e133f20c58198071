//! Scenario files, reports, and the batch runner behind the command line.
//!
//! A scenario is a JSON document with a versioned `schema` field, a `task`
//! name, and task-specific inputs. States are accepted as density matrices,
//! pure-state amplitude vectors, or Bloch vectors; complex numbers are
//! always `[re, im]` pairs. Reports echo the scenario and serialize every
//! numeric claim next to the certificate that backs it. For a fixed seed,
//! reports are byte-stable except for the wall-time field.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::applications::{
    dimension_witness, discriminate_unitaries, holevo_chi, min_entropy,
    mutual_information_of, nosignaling_decomposition, pairwise_helstrom_table, pbr_ensemble,
    solve_exclusion, unitary_repetition_n, ExclusionOptions,
};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::minerror::{
    helstrom_two_state, solve_fixed_point, OptimalityCertificate, SolveOptions,
};
use crate::operator::{DensityMatrix, Ensemble, Povm};
use crate::qubit::solve_qubit;
use crate::strategies::{error_vs_inconclusive_curve, max_confidence, usd_reciprocal, usd_two_pure};
use crate::{asymptotics, tol, DEFAULT_DIM_CAP, TOOLKIT_VERSION};

/// Version tag every scenario file must carry.
pub const SCENARIO_SCHEMA: &str = "qsd-scenario/1";
/// Version tag stamped on every report.
pub const REPORT_SCHEMA: &str = "qsd-report/1";
/// Version tag of suite manifests.
pub const SUITE_SCHEMA: &str = "qsd-suite/1";
/// Fixed column set of suite CSV output and of `--format csv` reports.
pub const CSV_HEADER: [&str; 7] = [
    "scenario",
    "task",
    "status",
    "exit_code",
    "value",
    "converged",
    "detail",
];

/// Task selector; the wire names double as the command-line subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    MinError,
    QubitGeometric,
    Usd,
    MaxConfidence,
    FixedRate,
    Chernoff,
    FiniteN,
    Witness,
    MinEntropy,
    NoSignaling,
    Exclusion,
    Unitary,
    MutualInfo,
}

impl Task {
    pub const ALL: [Task; 13] = [
        Task::MinError,
        Task::QubitGeometric,
        Task::Usd,
        Task::MaxConfidence,
        Task::FixedRate,
        Task::Chernoff,
        Task::FiniteN,
        Task::Witness,
        Task::MinEntropy,
        Task::NoSignaling,
        Task::Exclusion,
        Task::Unitary,
        Task::MutualInfo,
    ];

    /// Wire name, identical to the subcommand name.
    pub fn name(&self) -> &'static str {
        match self {
            Task::MinError => "min-error",
            Task::QubitGeometric => "qubit-geometric",
            Task::Usd => "usd",
            Task::MaxConfidence => "max-confidence",
            Task::FixedRate => "fixed-rate",
            Task::Chernoff => "chernoff",
            Task::FiniteN => "finite-n",
            Task::Witness => "witness",
            Task::MinEntropy => "min-entropy",
            Task::NoSignaling => "no-signaling",
            Task::Exclusion => "exclusion",
            Task::Unitary => "unitary",
            Task::MutualInfo => "mutual-info",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::ValidationError {
                detail: format!("unknown task {s:?}"),
            })
    }
}

/// Output format of a rendered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(OutputFormat::Human),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::ValidationError {
                detail: format!("unknown format {other:?}, expected human, json, or csv"),
            }),
        }
    }
}

type MatrixRows = Vec<Vec<[f64; 2]>>;

/// One state in a scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
enum StateSpec {
    #[serde(rename = "matrix")]
    Matrix(MatrixRows),
    #[serde(rename = "amplitudes")]
    Amplitudes(Vec<[f64; 2]>),
    #[serde(rename = "bloch")]
    Bloch([f64; 3]),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleSpec {
    #[serde(default)]
    priors: Option<Vec<f64>>,
    states: Vec<StateSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsSpec {
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    preparations: usize,
    /// Rows (x, x', p(1 | x, {x, x'})) for every ordered pair x != x'.
    entries: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PbrSpec {
    theta: f64,
    factors: usize,
}

/// Raw file shape; validation happens when lowering to [`Scenario`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema: String,
    task: Task,
    #[serde(default)]
    ensemble: Option<EnsembleSpec>,
    #[serde(default)]
    options: Option<OptionsSpec>,
    /// fixed-rate: inconclusive rates to trace.
    #[serde(default)]
    rates: Option<Vec<f64>>,
    /// finite-n: largest copy count.
    #[serde(default)]
    copies: Option<usize>,
    /// witness: inline probability table.
    #[serde(default)]
    table: Option<TableSpec>,
    /// witness: CSV table with header row x, x', p; path relative to the
    /// scenario file.
    #[serde(default)]
    table_csv: Option<String>,
    /// exclusion: build the product ensemble from (theta, factors).
    #[serde(default)]
    pbr: Option<PbrSpec>,
    /// unitary: exactly two matrices.
    #[serde(default)]
    unitaries: Option<Vec<MatrixRows>>,
    /// unitary: search for a perfect repetition count up to this cap.
    #[serde(default)]
    repetition_cap: Option<usize>,
    /// mutual-info: measure with this POVM instead of the optimal one.
    #[serde(default)]
    povm: Option<Vec<MatrixRows>>,
}

/// Solver options after defaults are applied.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResolvedOptions {
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub cap: usize,
}

impl Default for ResolvedOptions {
    fn default() -> Self {
        Self {
            tol: tol::CERT,
            seed: 1,
            max_iter: 10_000,
            cap: DEFAULT_DIM_CAP,
        }
    }
}

/// A validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    pub options: ResolvedOptions,
    pub ensemble: Option<Ensemble>,
    pub rates: Vec<f64>,
    pub copies: usize,
    pub table: Option<(usize, Vec<(usize, usize, f64)>)>,
    pub pbr: Option<(f64, usize)>,
    pub unitaries: Option<(CMatrix, CMatrix)>,
    pub repetition_cap: Option<usize>,
    pub povm: Option<Povm>,
    /// Whether the exclusion ensemble came from a pbr block.
    pub ensemble_from_pbr: bool,
    /// Raw file content, echoed into reports.
    pub echo: Value,
    /// Non-fatal notes collected while loading, e.g. renormalized states.
    pub warnings: Vec<String>,
}

impl Scenario {
    /// Apply command-line overrides on top of the file's options block.
    pub fn apply_overrides(
        &mut self,
        tol: Option<f64>,
        seed: Option<u64>,
        max_iter: Option<usize>,
        cap: Option<usize>,
    ) {
        if let Some(t) = tol {
            self.options.tol = t;
        }
        if let Some(s) = seed {
            self.options.seed = s;
        }
        if let Some(m) = max_iter {
            self.options.max_iter = m;
        }
        if let Some(c) = cap {
            self.options.cap = c;
        }
    }
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::ValidationError {
            detail: "matrix has no rows".into(),
        });
    }
    let mut out = CMatrix::zeros((d, d));
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(Error::NotSquare {
                rows: d,
                cols: row.len(),
            });
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

fn matrix_to_rows(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn amplitudes_to_vec(amps: &[[f64; 2]]) -> Vec<Complex64> {
    amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn complex_vec_to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn state_from_spec(spec: &StateSpec, index: usize, warnings: &mut Vec<String>) -> Result<DensityMatrix> {
    match spec {
        StateSpec::Matrix(rows) => DensityMatrix::new(rows_to_matrix(rows)?),
        StateSpec::Amplitudes(amps) => {
            let mut v = amplitudes_to_vec(amps);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::ValidationError {
                    detail: format!("state {index}: amplitude vector has zero norm"),
                });
            }
            if (norm - 1.0).abs() > 1e-6 {
                warnings.push(format!(
                    "state {index}: amplitudes normalized from norm {norm:.9}"
                ));
            }
            for z in &mut v {
                *z /= norm;
            }
            DensityMatrix::from_pure(&v)
        }
        StateSpec::Bloch([x, y, z]) => {
            DensityMatrix::from_bloch(crate::operator::BlochVector::new(*x, *y, *z))
        }
    }
}

fn ensemble_from_spec(spec: &EnsembleSpec, warnings: &mut Vec<String>) -> Result<Ensemble> {
    let states = spec
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| state_from_spec(s, i, warnings))
        .collect::<Result<Vec<_>>>()?;
    match &spec.priors {
        Some(priors) => Ensemble::new(priors.clone(), states),
        None => Ensemble::equal_priors(states),
    }
}

fn read_table_csv(path: &Path) -> Result<(usize, Vec<(usize, usize, f64)>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let expected = ["x", "x'", "p"];
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(Error::ParseError {
            detail: format!(
                "{}: expected CSV header x, x', p; found {}",
                path.display(),
                found.join(", ")
            ),
        });
    }
    let mut entries = Vec::new();
    let mut max_index = 0usize;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |field: usize, what: &str| -> Result<f64> {
            record
                .get(field)
                .ok_or(())
                .and_then(|s| s.parse::<f64>().map_err(|_| ()))
                .map_err(|_| Error::ParseError {
                    detail: format!("{}: row {}: bad {what}", path.display(), line + 2),
                })
        };
        let x = parse(0, "x")? as usize;
        let xp = parse(1, "x'")? as usize;
        let p = parse(2, "p")?;
        max_index = max_index.max(x).max(xp);
        entries.push((x, xp, p));
    }
    Ok((max_index + 1, entries))
}

/// Parse and validate a scenario file.
///
/// States are accepted as density matrices, amplitude vectors (normalized
/// on load, with a warning when the norm is off by more than 1e-6), or
/// Bloch vectors. Structural problems map to `ParseError`, semantic ones to
/// `ValidationError` or a more specific variant.
pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let echo: Value = serde_json::from_str(&text).map_err(|e| Error::ParseError {
        detail: format!("{}: {e}", path.display()),
    })?;
    let file: ScenarioFile =
        serde_json::from_value(echo.clone()).map_err(|e| Error::ParseError {
            detail: format!("{}: {e}", path.display()),
        })?;
    if file.schema != SCENARIO_SCHEMA {
        return Err(Error::ValidationError {
            detail: format!(
                "unsupported schema {:?}, expected {SCENARIO_SCHEMA:?}",
                file.schema
            ),
        });
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    lower_scenario(file, name, base, echo)
}

fn lower_scenario(
    file: ScenarioFile,
    name: String,
    base: &Path,
    echo: Value,
) -> Result<Scenario> {
    let mut warnings = Vec::new();
    let defaults = ResolvedOptions::default();
    let opts = file.options.clone().unwrap_or_default();
    let options = ResolvedOptions {
        tol: opts.tol.unwrap_or(defaults.tol),
        seed: opts.seed.unwrap_or(defaults.seed),
        max_iter: opts.max_iter.unwrap_or(defaults.max_iter),
        cap: opts.cap.unwrap_or(defaults.cap),
    };
    if options.tol <= 0.0 || !options.tol.is_finite() {
        return Err(Error::OutOfRange {
            what: "tol",
            value: options.tol,
        });
    }

    let task = file.task;
    let mut ensemble = match &file.ensemble {
        Some(spec) => Some(ensemble_from_spec(spec, &mut warnings)?),
        None => None,
    };
    let mut ensemble_from_pbr = false;

    let needs_ensemble = matches!(
        task,
        Task::MinError
            | Task::QubitGeometric
            | Task::Usd
            | Task::MaxConfidence
            | Task::FixedRate
            | Task::Chernoff
            | Task::FiniteN
            | Task::MinEntropy
            | Task::NoSignaling
            | Task::MutualInfo
    );
    if needs_ensemble && ensemble.is_none() {
        return Err(Error::ValidationError {
            detail: format!("task {} requires an ensemble", task.name()),
        });
    }

    match task {
        Task::QubitGeometric => {
            let dim = ensemble.as_ref().unwrap().dim();
            if dim != 2 {
                return Err(Error::WrongDimension {
                    expected: 2,
                    found: dim,
                });
            }
        }
        Task::Chernoff | Task::FiniteN => {
            let n = ensemble.as_ref().unwrap().n();
            if n != 2 {
                return Err(Error::WrongCount {
                    expected: 2,
                    found: n,
                });
            }
        }
        Task::Exclusion => match (&file.pbr, &ensemble) {
            (Some(p), _) => {
                if ensemble.is_some() {
                    return Err(Error::ValidationError {
                        detail: "exclusion takes either an ensemble or a pbr block, not both"
                            .into(),
                    });
                }
                ensemble = Some(pbr_ensemble(p.theta, p.factors, options.cap)?);
                ensemble_from_pbr = true;
            }
            (None, Some(_)) => {}
            (None, None) => {
                return Err(Error::ValidationError {
                    detail: "exclusion requires an ensemble or a pbr block".into(),
                });
            }
        },
        Task::Unitary => {
            if file.unitaries.is_none() {
                return Err(Error::ValidationError {
                    detail: "unitary requires a unitaries array".into(),
                });
            }
        }
        Task::Witness => {
            if file.table.is_none() && file.table_csv.is_none() && ensemble.is_none() {
                return Err(Error::ValidationError {
                    detail: "witness requires a table, a table_csv path, or an ensemble".into(),
                });
            }
        }
        _ => {}
    }

    let rates = match (task, &file.rates) {
        (Task::FixedRate, Some(r)) if !r.is_empty() => {
            for &rate in r {
                if !(0.0..1.0).contains(&rate) {
                    return Err(Error::OutOfRange {
                        what: "inconclusive rate",
                        value: rate,
                    });
                }
            }
            r.clone()
        }
        (Task::FixedRate, _) => {
            return Err(Error::ValidationError {
                detail: "fixed-rate requires a nonempty rates array".into(),
            });
        }
        (_, Some(_)) => {
            return Err(Error::ValidationError {
                detail: format!("task {} does not take rates", task.name()),
            });
        }
        _ => Vec::new(),
    };

    let table = match (&file.table, &file.table_csv) {
        (Some(t), _) => Some((t.preparations, t.entries.clone())),
        (None, Some(rel)) => Some(read_table_csv(&base.join(rel))?),
        (None, None) => None,
    };

    let unitaries = match &file.unitaries {
        Some(list) => {
            if list.len() != 2 {
                return Err(Error::WrongCount {
                    expected: 2,
                    found: list.len(),
                });
            }
            Some((rows_to_matrix(&list[0])?, rows_to_matrix(&list[1])?))
        }
        None => None,
    };

    let povm = match &file.povm {
        Some(rows) => {
            let elements = rows.iter().map(|r| rows_to_matrix(r)).collect::<Result<Vec<_>>>()?;
            Some(Povm::new(elements)?)
        }
        None => None,
    };

    Ok(Scenario {
        name,
        task,
        options,
        ensemble,
        rates,
        copies: file.copies.unwrap_or(6),
        table,
        pbr: file.pbr.as_ref().map(|p| (p.theta, p.factors)),
        unitaries,
        repetition_cap: file.repetition_cap,
        povm,
        ensemble_from_pbr,
        echo,
        warnings,
    })
}

/// Condensed certificate block shared by every report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateSummary {
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
}

impl CertificateSummary {
    fn from_certificate(c: &OptimalityCertificate) -> Self {
        Self {
            passed: c.passed,
            worst_residual: c.worst_residual(),
            tolerance: c.tolerance,
        }
    }
}

/// Result of running one scenario. Field order is the serialization order;
/// two runs with the same scenario and seed agree byte-for-byte on every
/// field except `wall_time_ms`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema: String,
    pub toolkit_version: String,
    pub scenario_name: String,
    pub task: Task,
    /// Headline scalar; absent for curve-valued tasks and disjoint-support
    /// Chernoff instances.
    pub value: Option<f64>,
    pub converged: Option<bool>,
    pub certificate: Option<CertificateSummary>,
    /// Task-specific payload, including measurements as `[re, im]` matrices.
    pub detail: Value,
    pub warnings: Vec<String>,
    /// Scenario file echoed verbatim.
    pub scenario: Value,
    pub wall_time_ms: f64,
}

fn povm_rows(povm: &Povm) -> Vec<MatrixRows> {
    povm.elements().iter().map(matrix_to_rows).collect()
}

struct Outcome {
    value: Option<f64>,
    converged: Option<bool>,
    certificate: Option<CertificateSummary>,
    detail: Value,
    warnings: Vec<String>,
}

fn solve_options(o: &ResolvedOptions) -> SolveOptions {
    SolveOptions {
        max_iter: o.max_iter,
        cert_tol: o.tol,
        check_every: 20,
        seed_povm: None,
    }
}

fn run_min_error(ens: &Ensemble, o: &ResolvedOptions) -> Result<Outcome> {
    let r = if ens.n() == 2 {
        helstrom_two_state(ens)?
    } else {
        solve_fixed_point(ens, &solve_options(o))?.require_converged()?
    };
    Ok(Outcome {
        value: Some(r.p_guess),
        converged: Some(r.converged),
        certificate: Some(CertificateSummary::from_certificate(&r.certificate)),
        detail: json!({
            "p_guess": r.p_guess,
            "iterations": r.iterations,
            "residuals": r.residuals,
            "povm": povm_rows(&r.povm),
        }),
        warnings: Vec::new(),
    })
}

fn run_qubit_geometric(ens: &Ensemble) -> Result<Outcome> {
    let sol = solve_qubit(ens)?;
    if !sol.certificate.passed {
        return Err(Error::NoConvergence {
            what: "qubit geometric solver",
            iterations: 0,
        });
    }
    Ok(Outcome {
        value: Some(sol.p_guess),
        converged: Some(sol.certificate.passed),
        certificate: Some(CertificateSummary::from_certificate(&sol.certificate)),
        detail: json!({
            "p_guess": sol.p_guess,
            "ball": sol.ball,
            "used_fallback": sol.used_fallback,
            "povm": povm_rows(&sol.povm),
        }),
        warnings: Vec::new(),
    })
}

fn run_usd(ens: &Ensemble) -> Result<Outcome> {
    let r = if ens.n() == 2 {
        usd_two_pure(ens)?
    } else {
        usd_reciprocal(ens)?
    };
    Ok(Outcome {
        value: Some(r.success_probability),
        converged: Some(r.converged),
        certificate: None,
        detail: json!({
            "strategy": "usd",
            "success_probability": r.success_probability,
            "inconclusive_probability": r.inconclusive_probability,
            "per_state_success": r.per_state_success,
            "povm": povm_rows(&r.povm),
        }),
        warnings: Vec::new(),
    })
}

fn run_max_confidence(ens: &Ensemble) -> Result<Outcome> {
    let r = max_confidence(ens)?;
    let top = r.confidences.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome {
        value: Some(top),
        converged: None,
        certificate: None,
        detail: json!({
            "strategy": "maxconf",
            "confidences": r.confidences,
            "coefficients": r.coefficients,
            "degenerate": r.degenerate,
            "inconclusive_probability": r.inconclusive_probability,
            "povm": povm_rows(&r.povm),
        }),
        warnings: Vec::new(),
    })
}

fn run_fixed_rate(ens: &Ensemble, rates: &[f64], o: &ResolvedOptions) -> Result<Outcome> {
    let curve = error_vs_inconclusive_curve(ens, rates, o.seed)?;
    let attained: Vec<f64> = curve.iter().map(|p| p.inconclusive).collect();
    let omitted: Vec<f64> = rates
        .iter()
        .copied()
        .filter(|r| !attained.iter().any(|a| (a - r).abs() < 1e-12))
        .collect();
    let mut warnings = Vec::new();
    if !omitted.is_empty() {
        warnings.push(format!(
            "rates beyond the largest average-state eigenvalue omitted: {omitted:?}"
        ));
    }
    Ok(Outcome {
        value: None,
        converged: None,
        certificate: None,
        detail: json!({
            "strategy": "fixed-rate",
            "curve": curve,
            "requested_rates": rates,
            "omitted_rates": omitted,
        }),
        warnings,
    })
}

fn run_chernoff(ens: &Ensemble) -> Result<Outcome> {
    let r = asymptotics::chernoff_two_state(ens.state(0), ens.state(1))?;
    let xi = if r.disjoint_supports { None } else { Some(r.xi) };
    Ok(Outcome {
        value: xi,
        converged: None,
        certificate: None,
        detail: json!({
            "xi": xi,
            "s_star": r.s_star,
            "disjoint_supports": r.disjoint_supports,
            "bracket_warning": r.bracket_warning,
            "curve": r.curve,
        }),
        warnings: Vec::new(),
    })
}

fn run_finite_n(ens: &Ensemble, copies: usize, o: &ResolvedOptions) -> Result<Outcome> {
    let estimate = asymptotics::finite_n_error(ens, copies, o.cap)?;
    let chernoff = asymptotics::chernoff_two_state(ens.state(0), ens.state(1))?;
    let xi = if chernoff.disjoint_supports {
        None
    } else {
        Some(chernoff.xi)
    };
    Ok(Outcome {
        value: Some(estimate.fitted_exponent),
        converged: None,
        certificate: None,
        detail: json!({
            "points": estimate.points,
            "fitted_exponent": estimate.fitted_exponent,
            "chernoff_exponent": xi,
        }),
        warnings: Vec::new(),
    })
}

fn run_witness(s: &Scenario) -> Result<Outcome> {
    let (n, entries, source) = match (&s.table, &s.ensemble) {
        (Some((n, entries)), _) => (*n, entries.clone(), "table"),
        (None, Some(ens)) => {
            let entries = pairwise_helstrom_table(ens.states())?;
            (ens.n(), entries, "ensemble")
        }
        (None, None) => unreachable!("validated at parse time"),
    };
    let r = dimension_witness(n, &entries)?;
    Ok(Outcome {
        value: Some(r.witness),
        converged: None,
        certificate: None,
        detail: json!({
            "witness": r.witness,
            "bounds": r.bounds,
            "certified_min_dimension": r.certified_min_dimension,
            "preparations": n,
            "source": source,
            "table": entries,
        }),
        warnings: Vec::new(),
    })
}

fn run_min_entropy(ens: &Ensemble) -> Result<Outcome> {
    let r = min_entropy(ens)?;
    Ok(Outcome {
        value: Some(r.h_min_bits),
        converged: Some(true),
        certificate: None,
        detail: json!({
            "p_guess": r.p_guess,
            "h_min_bits": r.h_min_bits,
        }),
        warnings: Vec::new(),
    })
}

fn run_no_signaling(ens: &Ensemble, o: &ResolvedOptions) -> Result<Outcome> {
    let r = if ens.n() == 2 {
        helstrom_two_state(ens)?.require_converged()?
    } else {
        solve_fixed_point(ens, &solve_options(o))?.require_converged()?
    };
    let rep = nosignaling_decomposition(ens, &r)?;
    Ok(Outcome {
        value: Some(rep.saturation),
        converged: Some(r.converged),
        certificate: Some(CertificateSummary::from_certificate(&r.certificate)),
        detail: json!({
            "p_guess": r.p_guess,
            "p_values": rep.p_values,
            "saturation": rep.saturation,
            "reconstruction_residual": rep.reconstruction_residual,
        }),
        warnings: Vec::new(),
    })
}

fn run_exclusion(s: &Scenario) -> Result<Outcome> {
    let ens = s.ensemble.as_ref().expect("validated at parse time");
    let options = ExclusionOptions {
        max_iter: s.options.max_iter,
        cert_tol: s.options.tol,
        check_every: 20,
        seed: s.options.seed,
    };
    let r = solve_exclusion(ens, &options)?;
    if !r.converged {
        return Err(Error::NoConvergence {
            what: "exclusion solver",
            iterations: r.iterations,
        });
    }
    Ok(Outcome {
        value: Some(r.value),
        converged: Some(r.converged),
        certificate: Some(CertificateSummary {
            passed: r.converged,
            worst_residual: r.dual_gap,
            tolerance: s.options.tol,
        }),
        detail: json!({
            "value": r.value,
            "dual_gap": r.dual_gap,
            "iterations": r.iterations,
            "source": if s.ensemble_from_pbr { "pbr" } else { "ensemble" },
            "povm": povm_rows(&r.povm),
        }),
        warnings: Vec::new(),
    })
}

fn run_unitary(s: &Scenario) -> Result<Outcome> {
    let (u1, u2) = s.unitaries.as_ref().expect("validated at parse time");
    let r = discriminate_unitaries(u1, u2)?;
    let mut warnings = Vec::new();
    let repetition = match s.repetition_cap {
        None => None,
        Some(cap) => match unitary_repetition_n(u1, u2, cap) {
            Ok(n) => Some(n),
            Err(Error::RepetitionNotFound { cap }) => {
                warnings.push(format!(
                    "no repetition count up to {cap} achieves perfect discrimination"
                ));
                None
            }
            Err(e) => return Err(e),
        },
    };
    Ok(Outcome {
        value: Some(r.p_guess),
        converged: None,
        certificate: None,
        detail: json!({
            "p_guess": r.p_guess,
            "distinguishability": r.distinguishability,
            "hull_distance": r.hull_distance,
            "perfect": r.perfect,
            "eigenphases": r.eigenphases,
            "optimal_input": complex_vec_to_pairs(&r.optimal_input),
            "repetition": repetition,
        }),
        warnings,
    })
}

fn run_mutual_info(s: &Scenario) -> Result<Outcome> {
    let ens = s.ensemble.as_ref().expect("validated at parse time");
    let chi = holevo_chi(ens)?;
    let (povm, source) = match &s.povm {
        Some(p) => (p.clone(), "provided"),
        None => {
            let r = if ens.n() == 2 {
                helstrom_two_state(ens)?.require_converged()?
            } else {
                solve_fixed_point(ens, &solve_options(&s.options))?.require_converged()?
            };
            (r.povm, "optimal-min-error")
        }
    };
    let info = mutual_information_of(ens, &povm)?;
    Ok(Outcome {
        value: Some(info),
        converged: None,
        certificate: None,
        detail: json!({
            "mutual_information_bits": info,
            "holevo_chi_bits": chi,
            "measurement": source,
            "outcomes": povm.n_outcomes(),
        }),
        warnings: Vec::new(),
    })
}

/// Run a validated scenario and assemble its report.
pub fn run_scenario(scenario: &Scenario) -> Result<Report> {
    let start = Instant::now();
    let ens = scenario.ensemble.as_ref();
    let o = &scenario.options;
    let outcome = match scenario.task {
        Task::MinError => run_min_error(ens.unwrap(), o)?,
        Task::QubitGeometric => run_qubit_geometric(ens.unwrap())?,
        Task::Usd => run_usd(ens.unwrap())?,
        Task::MaxConfidence => run_max_confidence(ens.unwrap())?,
        Task::FixedRate => run_fixed_rate(ens.unwrap(), &scenario.rates, o)?,
        Task::Chernoff => run_chernoff(ens.unwrap())?,
        Task::FiniteN => run_finite_n(ens.unwrap(), scenario.copies, o)?,
        Task::Witness => run_witness(scenario)?,
        Task::MinEntropy => run_min_entropy(ens.unwrap())?,
        Task::NoSignaling => run_no_signaling(ens.unwrap(), o)?,
        Task::Exclusion => run_exclusion(scenario)?,
        Task::Unitary => run_unitary(scenario)?,
        Task::MutualInfo => run_mutual_info(scenario)?,
    };
    let mut warnings = scenario.warnings.clone();
    warnings.extend(outcome.warnings);
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        toolkit_version: TOOLKIT_VERSION.into(),
        scenario_name: scenario.name.clone(),
        task: scenario.task,
        value: outcome.value,
        converged: outcome.converged,
        certificate: outcome.certificate,
        detail: outcome.detail,
        warnings,
        scenario: scenario.echo.clone(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

impl Report {
    /// Serialize in the requested format. JSON is pretty-printed and ends
    /// with a newline; CSV carries the fixed header row.
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => Ok(format!("{}\n", serde_json::to_string_pretty(self)?)),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(CSV_HEADER)?;
                w.write_record(self.csv_row())?;
                let bytes = w.into_inner().map_err(|e| Error::ValidationError {
                    detail: format!("csv buffering failed: {e}"),
                })?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            OutputFormat::Human => {
                let mut out = String::new();
                out.push_str(&format!("task: {}\n", self.task.name()));
                out.push_str(&format!("scenario: {}\n", self.scenario_name));
                if let Some(v) = self.value {
                    out.push_str(&format!("value: {v}\n"));
                }
                if let Some(c) = self.converged {
                    out.push_str(&format!("converged: {c}\n"));
                }
                if let Some(cert) = &self.certificate {
                    out.push_str(&format!(
                        "certificate: {} (worst residual {:.3e}, tolerance {:.3e})\n",
                        if cert.passed { "passed" } else { "FAILED" },
                        cert.worst_residual,
                        cert.tolerance
                    ));
                }
                for w in &self.warnings {
                    out.push_str(&format!("warning: {w}\n"));
                }
                out.push_str(&format!(
                    "detail: {}\n",
                    serde_json::to_string_pretty(&self.detail)?
                ));
                out.push_str(&format!("wall time: {:.3} ms\n", self.wall_time_ms));
                Ok(out)
            }
        }
    }

    fn csv_row(&self) -> [String; 7] {
        [
            self.scenario_name.clone(),
            self.task.name().into(),
            "ok".into(),
            "0".into(),
            fmt_opt_f64(self.value),
            fmt_opt_bool(self.converged),
            String::new(),
        ]
    }
}

fn status_name(code: i32) -> &'static str {
    match code {
        0 => "ok",
        2 => "parse-error",
        4 => "no-convergence",
        5 => "infeasible",
        _ => "validation-error",
    }
}

/// One suite row: per-scenario outcome with its exit code.
#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub scenario: String,
    pub exit_code: i32,
    pub fields: [String; 7],
}

/// Aggregate result of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub csv: String,
    /// Worst exit code across rows; 0 when every scenario succeeded.
    pub exit_code: i32,
    pub rows: Vec<SuiteRow>,
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    schema: String,
    scenarios: Vec<String>,
}

fn suite_file_list(dir: &Path, manifest: Option<&Path>) -> Result<Vec<std::path::PathBuf>> {
    let mut names = BTreeSet::new();
    let manifest_path = match manifest {
        Some(p) => Some(p.to_path_buf()),
        None => {
            let default = dir.join("manifest.json");
            default.exists().then_some(default)
        }
    };
    match manifest_path {
        Some(mp) => {
            let text = std::fs::read_to_string(&mp)?;
            let parsed: ManifestFile =
                serde_json::from_str(&text).map_err(|e| Error::ParseError {
                    detail: format!("{}: {e}", mp.display()),
                })?;
            if parsed.schema != SUITE_SCHEMA {
                return Err(Error::ValidationError {
                    detail: format!(
                        "unsupported manifest schema {:?}, expected {SUITE_SCHEMA:?}",
                        parsed.schema
                    ),
                });
            }
            for rel in parsed.scenarios {
                names.insert(dir.join(rel));
            }
        }
        None => {
            for entry in std::fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    names.insert(path);
                }
            }
        }
    }
    // BTreeSet iteration is already sorted by path, which sorts by filename
    // within a single directory.
    Ok(names.into_iter().collect())
}

fn suite_row(path: &Path) -> SuiteRow {
    let scenario = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let parsed = parse_scenario(path);
    let (task_name, result) = match parsed {
        Ok(s) => (s.task.name().to_string(), run_scenario(&s)),
        Err(e) => (String::new(), Err(e)),
    };
    match result {
        Ok(report) => {
            let mut fields = report.csv_row();
            fields[0] = scenario.clone();
            SuiteRow {
                scenario,
                exit_code: 0,
                fields,
            }
        }
        Err(e) => {
            let code = e.exit_code();
            SuiteRow {
                scenario: scenario.clone(),
                exit_code: code,
                fields: [
                    scenario,
                    task_name,
                    status_name(code).into(),
                    code.to_string(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ],
            }
        }
    }
}

/// Run every scenario in a directory and aggregate one CSV row per file.
///
/// The row order is by filename regardless of manifest order; failures are
/// recorded and the run continues. The returned exit code is the worst
/// per-scenario code, 0 when all pass. `jobs` > 1 runs scenarios on that
/// many threads; rows are still assembled in filename order, so the output
/// is identical to a sequential run.
pub fn run_suite(dir: &Path, manifest: Option<&Path>, jobs: usize) -> Result<SuiteOutcome> {
    let files = suite_file_list(dir, manifest)?;
    let mut rows: Vec<Option<SuiteRow>> = (0..files.len()).map(|_| None).collect();

    if jobs <= 1 || files.len() <= 1 {
        for (slot, path) in rows.iter_mut().zip(&files) {
            *slot = Some(suite_row(path));
        }
    } else {
        let next = AtomicUsize::new(0);
        let slots = Mutex::new(&mut rows);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(files.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= files.len() {
                        break;
                    }
                    let row = suite_row(&files[i]);
                    slots.lock().expect("suite worker poisoned")[i] = Some(row);
                });
            }
        });
    }

    let rows: Vec<SuiteRow> = rows
        .into_iter()
        .map(|r| r.expect("every suite slot is filled"))
        .collect();
    let exit_code = rows.iter().map(|r| r.exit_code).max().unwrap_or(0);

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in &rows {
        w.write_record(&row.fields)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::ValidationError {
        detail: format!("csv buffering failed: {e}"),
    })?;
    let csv = String::from_utf8(bytes).expect("csv output is utf-8");

    Ok(SuiteOutcome {
        csv,
        exit_code,
        rows,
    })
}
