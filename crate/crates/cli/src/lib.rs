//! `qwalk` command-line front end.
//!
//! ```text
//! qwalk <spectrum|evolve|average|search|classify|verify> --graph <spec|path|->
//!       [--t <real> | --t-max <real> --grid <int>] [--refine <int>]
//!       [--format json|csv] [--tol <real>] [--tv-convention paper|half]
//! ```
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use qwalk_core::mixing::{search_min_tv_with, tv_to_uniform, TvConvention};
use qwalk_core::specfile::GraphSpec;
use qwalk_core::verify::{self, Family, VerifyConfig};
use qwalk_core::{
    average_distribution, classify_cycle, ds_bound, Graph, QwalkError, SearchOptions, Walk,
};

pub mod format;

use format::{csv_row, float, nums, Num};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Spectrum,
    Evolve,
    Average,
    Search,
    Classify,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum TvFlag {
    /// Un-halved convention, Σ|P − Q|.
    #[default]
    #[value(name = "paper")]
    Full,
    /// Halved convention, ½ Σ|P − Q|.
    Half,
}

impl From<TvFlag> for TvConvention {
    fn from(f: TvFlag) -> Self {
        match f {
            TvFlag::Full => TvConvention::Full,
            TvFlag::Half => TvConvention::Half,
        }
    }
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "qwalk", version, about = "Continuous-time quantum walks on circulant graphs")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Graph spec: inline JSON, a file path, or '-' for stdin.
    #[arg(long)]
    pub graph: String,

    /// Single evaluation time.
    #[arg(long, conflicts_with = "t_max", allow_hyphen_values = true)]
    pub t: Option<f64>,

    /// Upper end of a time range starting at 0.
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,

    /// Points on the time grid, endpoints included.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Golden-section iterations for `search`.
    #[arg(long, default_value_t = SearchOptions::DEFAULT_REFINE_ITERS)]
    pub refine: usize,

    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,

    /// Tolerance override: collision grouping (spectrum), uniformity
    /// (average), tie window (search), residual bound (verify).
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long, value_enum, default_value_t)]
    pub tv_convention: TvFlag,

    /// Smallest family member for `verify` (default 2, or 1 for hypercubes).
    #[arg(long)]
    pub min: Option<usize>,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Engine(QwalkError),
}

impl From<QwalkError> for CliError {
    fn from(e: QwalkError) -> Self {
        CliError::Engine(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `args` (including the program name) and runs the command.
/// `stdin` supplies the graph when `--graph -` is given.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    execute(&cfg, stdin)
}

pub fn execute(cfg: &RunConfig, stdin: &mut dyn Read) -> Outcome {
    let result = load_spec(&cfg.graph, stdin).and_then(|spec| dispatch(cfg, &spec));
    match result {
        Ok(out) => out,
        Err(CliError::Usage(m)) => Outcome::usage(m),
        Err(CliError::Engine(e)) => Outcome::usage(e),
    }
}

fn load_spec(arg: &str, stdin: &mut dyn Read) -> CliResult<GraphSpec> {
    let text = if arg == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("reading {arg}: {e}")))?
    };
    Ok(GraphSpec::parse(&text)?)
}

fn dispatch(cfg: &RunConfig, spec: &GraphSpec) -> CliResult<Outcome> {
    if let Some(tol) = cfg.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return usage(format!("--tol must be a positive real, got {tol}"));
        }
    }
    match cfg.command {
        Command::Classify => cmd_classify(cfg, spec),
        Command::Verify => cmd_verify(cfg, spec),
        Command::Spectrum => cmd_spectrum(cfg, &spec.build()?),
        Command::Evolve => cmd_evolve(cfg, &spec.build()?),
        Command::Average => cmd_average(cfg, &spec.build()?),
        Command::Search => cmd_search(cfg, &spec.build()?),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serializes");
    s.push('\n');
    s
}

fn tv_label(conv: TvFlag) -> Option<&'static str> {
    (conv == TvFlag::Half).then_some("half")
}

fn tv_column(conv: TvFlag) -> &'static str {
    match conv {
        TvFlag::Full => "tv_to_uniform",
        TvFlag::Half => "tv_to_uniform_half",
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    order: usize,
    factors: Vec<usize>,
    eigenvalues: Vec<Num>,
    collision_classes: Vec<Vec<usize>>,
    distinct_count: usize,
    witness: Option<(usize, usize)>,
}

pub fn cmd_spectrum_report(cfg: &RunConfig, graph: &Graph) -> String {
    let tol = cfg.tol.unwrap_or(qwalk_core::graphs::DEFAULT_COLLISION_TOL);
    let s = graph.spectrum_with_tol(tol);
    match cfg.format {
        OutputFormat::Json => to_json(&SpectrumReport {
            order: graph.order(),
            factors: graph.factors(),
            eigenvalues: nums(s.eigenvalues()),
            collision_classes: s.collision_classes().to_vec(),
            distinct_count: s.distinct_count(),
            witness: s.repeated_eigenvalue_witness(),
        }),
        OutputFormat::Csv => {
            let mut out = csv_row(["index", "eigenvalue", "class"]);
            for (i, &l) in s.eigenvalues().iter().enumerate() {
                out += &csv_row([i.to_string(), float(l), s.class_of(i).to_string()]);
            }
            out
        }
    }
}

fn cmd_spectrum(cfg: &RunConfig, graph: &Graph) -> CliResult<Outcome> {
    Ok(Outcome::ok(cmd_spectrum_report(cfg, graph)))
}

#[derive(Serialize)]
struct EvolveReport {
    t: Num,
    amplitudes: Vec<(Num, Num)>,
    probabilities: Vec<Num>,
    tv_to_uniform: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv_convention: Option<&'static str>,
}

#[derive(Serialize)]
struct SweepReport {
    times: Vec<Num>,
    probabilities: Vec<Vec<Num>>,
    tv_to_uniform: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv_convention: Option<&'static str>,
}

fn time_range(cfg: &RunConfig) -> CliResult<(f64, usize)> {
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => return usage("--t-max is required"),
    };
    if !t_max.is_finite() || t_max <= 0.0 {
        return usage(format!("--t-max must be a finite positive real, got {t_max}"));
    }
    let grid = cfg.grid.unwrap_or_else(|| SearchOptions::default_grid(t_max));
    if grid < 2 {
        return usage(format!("--grid must be at least 2, got {grid}"));
    }
    Ok((t_max, grid))
}

fn cmd_evolve(cfg: &RunConfig, graph: &Graph) -> CliResult<Outcome> {
    let conv: TvConvention = cfg.tv_convention.into();
    let walk = Walk::new(graph);
    if let Some(t) = cfg.t {
        if !t.is_finite() {
            return usage(format!("--t must be finite, got {t}"));
        }
        let amps = walk.amplitudes(t)?;
        let probs = amps.probabilities();
        let tv = conv.apply(tv_to_uniform(probs.probs()));
        let text = match cfg.format {
            OutputFormat::Json => to_json(&EvolveReport {
                t: Num(t),
                amplitudes: amps.amps.iter().map(|z| (Num(z.re), Num(z.im))).collect(),
                probabilities: nums(probs.probs()),
                tv_to_uniform: Num(tv),
                tv_convention: tv_label(cfg.tv_convention),
            }),
            OutputFormat::Csv => {
                let mut out = csv_row(["vertex", "re", "im", "probability"]);
                for (j, (z, p)) in amps.amps.iter().zip(probs.probs()).enumerate() {
                    out += &csv_row([j.to_string(), float(z.re), float(z.im), float(*p)]);
                }
                out
            }
        };
        return Ok(Outcome::ok(text));
    }
    if cfg.t_max.is_none() {
        return usage("evolve needs --t or --t-max");
    }
    let (t_max, grid) = time_range(cfg)?;
    let times: Vec<f64> = (0..grid)
        .map(|i| if i == grid - 1 { t_max } else { t_max * i as f64 / (grid - 1) as f64 })
        .collect();
    let dists = walk.distributions_batch(&times)?;
    let tvs: Vec<f64> = dists.iter().map(|d| conv.apply(tv_to_uniform(d.probs()))).collect();
    let text = match cfg.format {
        OutputFormat::Json => to_json(&SweepReport {
            times: nums(&times),
            probabilities: dists.iter().map(|d| nums(d.probs())).collect(),
            tv_to_uniform: nums(&tvs),
            tv_convention: tv_label(cfg.tv_convention),
        }),
        OutputFormat::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((0..graph.order()).map(|j| format!("p_{j}")));
            header.push(tv_column(cfg.tv_convention).to_string());
            let mut out = csv_row(header);
            for ((t, d), tv) in times.iter().zip(&dists).zip(&tvs) {
                let mut row = vec![float(*t)];
                row.extend(d.probs().iter().map(|&p| float(p)));
                row.push(float(*tv));
                out += &csv_row(row);
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct AverageReport {
    probabilities: Vec<Num>,
    collision_pair_count: usize,
    tv_to_uniform: Num,
    ds_bound: Num,
    average_uniform: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv_convention: Option<&'static str>,
}

fn cmd_average(cfg: &RunConfig, graph: &Graph) -> CliResult<Outcome> {
    let conv: TvConvention = cfg.tv_convention.into();
    let avg = average_distribution(graph)?;
    let tv = avg.tv_to_uniform();
    let tol = cfg.tol.unwrap_or(1e-9);
    let text = match cfg.format {
        OutputFormat::Json => to_json(&AverageReport {
            probabilities: nums(&avg.probs),
            collision_pair_count: avg.collision_pair_count,
            tv_to_uniform: Num(conv.apply(tv)),
            ds_bound: Num(ds_bound(&avg.probs, &graph.factors())?),
            average_uniform: tv <= tol,
            tv_convention: tv_label(cfg.tv_convention),
        }),
        OutputFormat::Csv => {
            let mut out = csv_row(["vertex", "probability"]);
            for (j, p) in avg.probs.iter().enumerate() {
                out += &csv_row([j.to_string(), float(*p)]);
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct SearchReport {
    t_star: Num,
    tv_star: Num,
    grid_points: usize,
    refinement_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv_convention: Option<&'static str>,
}

fn cmd_search(cfg: &RunConfig, graph: &Graph) -> CliResult<Outcome> {
    let (t_max, grid) = time_range(cfg)?;
    let mut opts = SearchOptions::new(t_max, grid);
    opts.refine_iters = cfg.refine;
    if let Some(tol) = cfg.tol {
        opts.tie_tol = tol;
    }
    let r = search_min_tv_with(graph, &opts)?;
    let tv = TvConvention::from(cfg.tv_convention).apply(r.tv_star);
    let text = match cfg.format {
        OutputFormat::Json => to_json(&SearchReport {
            t_star: Num(r.t_star),
            tv_star: Num(tv),
            grid_points: r.grid_points,
            refinement_iterations: r.refinement_iterations,
            tv_convention: tv_label(cfg.tv_convention),
        }),
        OutputFormat::Csv => {
            csv_row(["t_star", tv_column(cfg.tv_convention), "grid_points", "refinement_iterations"])
                + &csv_row([
                    float(r.t_star),
                    float(tv),
                    r.grid_points.to_string(),
                    r.refinement_iterations.to_string(),
                ])
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_classify(cfg: &RunConfig, spec: &GraphSpec) -> CliResult<Outcome> {
    let n = match spec {
        GraphSpec::Cycle { n } => *n as u64,
        _ => return usage("classify takes a cycle graph spec"),
    };
    let v = classify_cycle(n)?;
    let text = match cfg.format {
        OutputFormat::Json => to_json(&v),
        OutputFormat::Csv => {
            let cert = v
                .certificate
                .as_ref()
                .map(|c| c.len().to_string())
                .unwrap_or_default();
            csv_row(["n", "u", "q", "verdict", "certificate_size"])
                + &csv_row([
                    v.n.to_string(),
                    v.u.to_string(),
                    v.q.to_string(),
                    v.verdict.to_string(),
                    cert,
                ])
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct CheckRow {
    name: &'static str,
    cases: usize,
    max_residual: Num,
    tolerance: Num,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    family: Family,
    min: usize,
    max: usize,
    passed: bool,
    checks: Vec<CheckRow>,
}

fn cmd_verify(cfg: &RunConfig, spec: &GraphSpec) -> CliResult<Outcome> {
    let (family, max, floor) = match spec {
        GraphSpec::Cycle { n } => (Family::Cycles, *n, 2),
        GraphSpec::Complete { n } => (Family::Complete, *n, 2),
        GraphSpec::Hypercube { d } => (Family::Hypercubes, *d, 1),
        _ => return usage("verify takes a cycle, complete or hypercube spec (its size is the range maximum)"),
    };
    let mut vc = VerifyConfig::new(family, cfg.min.unwrap_or(floor), max);
    if let Some(tol) = cfg.tol {
        vc.tol = tol;
    }
    if let Some(t_max) = cfg.t_max {
        if !t_max.is_finite() || t_max < 0.0 {
            return usage(format!("--t-max must be a finite nonnegative real, got {t_max}"));
        }
        vc.t_max = t_max;
    }
    let report = verify::run(&vc)?;
    let passed = report.passed();
    let text = match cfg.format {
        OutputFormat::Json => to_json(&VerifyOutput {
            family: report.family,
            min: report.min,
            max: report.max,
            passed,
            checks: report
                .checks
                .iter()
                .map(|c| CheckRow {
                    name: c.name,
                    cases: c.cases,
                    max_residual: Num(c.max_residual),
                    tolerance: Num(c.tolerance),
                    passed: c.passed,
                })
                .collect(),
        }),
        OutputFormat::Csv => {
            let mut out = csv_row(["check", "cases", "max_residual", "tolerance", "passed"]);
            for c in &report.checks {
                out += &csv_row([
                    c.name.to_string(),
                    c.cases.to_string(),
                    float(c.max_residual),
                    float(c.tolerance),
                    c.passed.to_string(),
                ]);
            }
            out
        }
    };
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        stdout: text,
        stderr: String::new(),
    })
}

/// Thread cap from `QWALK_THREADS` (0 or unset = automatic).
pub fn threads_from_env(value: Option<&str>) -> Result<usize, String> {
    match value {
        None => Ok(0),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("QWALK_THREADS must be a nonnegative integer, got {v:?}")),
    }
}

