//! Command-line surface. The `infoflow` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 2 input or validation error, 3 numerical
//! degeneracy, 1 anything else.

mod bench;
mod csv_io;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{self, parse_matrix, simulate, theoretical_matrix, LinearSDE, SdeConfig};
use crate::error::{Error, Result};
use crate::graph::{all_pairs, build_graph, effective_alpha, emit_dot, emit_json, AnalysisOptions, FlowMatrix, Mode, ORIENTATION};
use crate::series::{validate_series_set, NanPolicy, TimeSeriesSet};

pub use bench::{bench_system, run_bench, BenchConfig, BenchReport, TARGET_SECONDS, WARN_SECONDS};
pub use csv_io::{parse_csv, parse_csv_str, write_csv};

const AFTER_HELP: &str = "\
Matrices are oriented T[target][source]: row i holds the flows INTO variable i,
and the diagonal holds self contributions dH*_i/dt.
Flows are in nats per unit time; with the default --dt 1 that is nats per
sample step, and every flow scales as 1/dt.";

/// Information-flow causality between time series.
#[derive(Debug, Clone, Parser)]
#[command(name = "infoflow", version, after_help = AFTER_HELP)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Estimate all flows, self contributions and p-values of a CSV file.
    Analyze(AnalyzeArgs),
    /// Simulate a linear SDE with Euler-Maruyama and write CSV.
    Simulate(SimulateArgs),
    /// Exact stationary flows and entropy budgets of a linear SDE (JSON).
    Oracle(SystemArgs),
    /// Build the significance-filtered causal graph of a CSV file.
    Graph(GraphArgs),
    /// Time the all-pairs computation on synthetic data.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Multivariate,
    Bivariate,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Multivariate => Mode::Multivariate,
            ModeArg::Bivariate => Mode::Bivariate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NanPolicyArg {
    Reject,
    Interpolate,
}

impl From<NanPolicyArg> for NanPolicy {
    fn from(p: NanPolicyArg) -> Self {
        match p {
            NanPolicyArg::Reject => NanPolicy::Reject,
            NanPolicyArg::Interpolate => NanPolicy::Interpolate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct AnalysisArgs {
    /// Input CSV: header row of names, one time step per line, empty cells are missing.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Sampling interval in time units (flows scale as 1/dt).
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    /// Difference lag: the derivative proxy is (X[n+k] - X[n]) / (k dt).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Significance level, 0 < alpha < 1.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Conditioning of pairwise flows.
    #[arg(long, value_enum, default_value_t = ModeArg::Multivariate)]
    pub mode: ModeArg,
    /// Also report normalized shares (TAU) of each target's entropy budget.
    #[arg(long)]
    pub normalize: bool,
    /// Handling of missing values.
    #[arg(long = "nan-policy", value_enum, default_value_t = NanPolicyArg::Reject)]
    pub nan_policy: NanPolicyArg,
    /// Worker threads over targets (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    /// Output format: JSON flow matrix or a long CSV table.
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    /// Keep only edges with |tau| at least this large (implies --normalize).
    #[arg(long = "min-tau")]
    pub min_tau: Option<f64>,
    /// Divide alpha by the number of tests (d * d).
    #[arg(long)]
    pub bonferroni: bool,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    pub format: GraphFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Built-in system: ou2 or chain5.
    #[arg(long, conflicts_with_all = ["config", "drift"])]
    pub preset: Option<String>,
    /// TOML system file (same schema as the presets).
    #[arg(long, conflicts_with = "drift")]
    pub config: Option<PathBuf>,
    /// Drift matrix, rows separated by ';', e.g. "-1,0.5;0,-1".
    #[arg(long = "A", id = "drift", allow_hyphen_values = true)]
    pub drift: Option<String>,
    /// Noise amplitude matrix (d x m).
    #[arg(long = "B", id = "noise", allow_hyphen_values = true)]
    pub noise: Option<String>,
    /// Constant drift offset, comma separated.
    #[arg(long = "f", id = "offset", allow_hyphen_values = true)]
    pub offset: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Initial state, comma separated (default zeros).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Number of output samples (default from the preset, else 1000).
    #[arg(long)]
    pub n: Option<usize>,
    /// Time step (default from the preset, else 1).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Random seed; equal seeds give identical files.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Steps discarded before recording (default: ten slowest relaxation
    /// times, at least 1000 steps).
    #[arg(long = "burn-in")]
    pub burn_in: Option<usize>,
    /// Refuse drift matrices that are not Hurwitz-stable.
    #[arg(long = "require-stationary")]
    pub require_stationary: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Number of variables.
    #[arg(long, default_value_t = 30)]
    pub d: usize,
    /// Number of time samples.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Multivariate)]
    pub mode: ModeArg,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl AnalysisArgs {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("--dt must be positive, got {}", self.dt)));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("--k must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "--alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    fn options(&self, normalize: bool) -> AnalysisOptions {
        AnalysisOptions {
            k: self.k,
            alpha: self.alpha,
            normalize,
            mode: self.mode.into(),
            workers: self.workers,
        }
    }

    pub fn load(&self) -> Result<TimeSeriesSet> {
        let (names, rows) = parse_csv(&self.input)?;
        validate_series_set(rows, names, self.dt, self.nan_policy.into())
    }
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_numerical() => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// Produces the output text of a command without writing it anywhere.
pub fn execute(cfg: &RunConfig) -> Result<String> {
    match &cfg.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(s) => cmd_simulate(s),
        Command::Oracle(s) => cmd_oracle(s),
        Command::Graph(g) => cmd_graph(g),
        Command::Bench(b) => cmd_bench(b),
    }
}

fn output_path(cfg: &RunConfig) -> Option<&PathBuf> {
    match &cfg.command {
        Command::Analyze(a) => a.analysis.output.as_ref(),
        Command::Graph(g) => g.analysis.output.as_ref(),
        Command::Simulate(s) => s.system.output.as_ref(),
        Command::Oracle(s) => s.output.as_ref(),
        Command::Bench(b) => b.output.as_ref(),
    }
}

/// Parses arguments, runs the command, writes its output and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let text = match execute(&cfg) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match output_path(&cfg) {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            1
        }
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<String> {
    args.analysis.validate()?;
    let set = args.analysis.load()?;
    let fm = all_pairs(&set, &args.analysis.options(args.analysis.normalize))?;
    match args.format {
        TableFormat::Json => emit_json(&fm),
        TableFormat::Csv => Ok(flow_table_csv(&fm)),
    }
}

/// Long table with one line per (target, source) pair; self contributions
/// have `source == target`.
pub fn flow_table_csv(fm: &FlowMatrix) -> String {
    let mut out = String::from("target,source,T,SE,P,TAU\n");
    for i in 0..fm.dim() {
        for j in 0..fm.dim() {
            let tau = fm.tau.as_ref().map_or(String::new(), |t| t[i][j].to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fm.names[i], fm.names[j], fm.t[i][j], fm.se[i][j], fm.p[i][j], tau
            ));
        }
    }
    out
}

pub fn cmd_graph(args: &GraphArgs) -> Result<String> {
    args.analysis.validate()?;
    let set = args.analysis.load()?;
    let normalize = args.analysis.normalize || args.min_tau.is_some();
    let fm = all_pairs(&set, &args.analysis.options(normalize))?;
    let alpha = effective_alpha(args.analysis.alpha, fm.dim(), args.bonferroni);
    let g = build_graph(&fm, alpha, args.min_tau);
    match args.format {
        GraphFormat::Dot => Ok(emit_dot(&g)),
        GraphFormat::Json => emit_json(&g),
    }
}

fn parse_vector(spec: &str) -> Result<Vec<f64>> {
    let m = parse_matrix(spec)?;
    Ok(m.iter().copied().collect())
}

/// Resolves a system from a preset, a TOML file or inline matrices.
pub fn load_system(args: &SystemArgs) -> Result<SdeConfig> {
    if let Some(name) = &args.preset {
        return dynamics::preset(name);
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        return SdeConfig::from_toml(&text);
    }
    let Some(drift) = &args.drift else {
        return Err(Error::InvalidArgument(
            "give --preset, --config or an inline --A/--B system".into(),
        ));
    };
    let a = parse_matrix(drift)?;
    let d = a.nrows();
    let rows = |m: nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    let b = match &args.noise {
        Some(spec) => parse_matrix(spec)?,
        None => nalgebra::DMatrix::identity(d, d),
    };
    Ok(SdeConfig {
        names: None,
        dt: 1.0,
        n: 1000,
        burn_in: None,
        a: rows(a),
        b: rows(b),
        f: args.offset.as_deref().map(parse_vector).transpose()?,
        x0: None,
    })
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let cfg = load_system(&args.system)?;
    let sde: LinearSDE = cfg.sde()?;
    if args.require_stationary {
        dynamics::stationary_covariance(&sde)?;
    }
    let x0 = match &args.x0 {
        Some(spec) => parse_vector(spec)?,
        None => cfg.initial_state(),
    };
    let dt = args.dt.unwrap_or(cfg.dt);
    let n = args.n.unwrap_or(cfg.n);
    let burn_in = args.burn_in.or(cfg.burn_in);
    let traj = simulate(&sde, &x0, n, dt, args.seed, burn_in)?;
    Ok(write_csv(&traj.names, &traj.values))
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    orientation: &'static str,
    names: Vec<String>,
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    noise: Vec<f64>,
    sigma: Vec<Vec<f64>>,
    budget_residual: Vec<f64>,
    max_budget_residual: f64,
}

pub fn cmd_oracle(args: &SystemArgs) -> Result<String> {
    let sde = load_system(args)?.sde()?;
    let m = theoretical_matrix(&sde)?;
    let rows = |x: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect()
    };
    let out = OracleOutput {
        orientation: ORIENTATION,
        names: m.names.clone(),
        t: rows(&m.flows),
        noise: m.noise.clone(),
        sigma: rows(&m.sigma),
        max_budget_residual: m.budget_residuals.iter().fold(0.0, |a, r| a.max(r.abs())),
        budget_residual: m.budget_residuals,
    };
    emit_json(&out)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String> {
    let report = run_bench(&BenchConfig {
        d: args.d,
        n: args.n,
        repetitions: args.repetitions,
        mode: args.mode.into(),
        workers: args.workers,
        seed: args.seed,
    })?;
    if report.status != "pass" {
        log::warn!(
            "median all-pairs time {:.3}s exceeds the {TARGET_SECONDS}s target",
            report.median_seconds
        );
    }
    emit_json(&report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("infoflow").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn clap_definition_is_consistent() {
        RunConfig::command().debug_assert();
    }

    #[test]
    fn help_mentions_orientation_and_defaults() {
        let help = RunConfig::command().render_long_help().to_string();
        assert!(help.contains("T[target][source]"));
        let sub = RunConfig::command()
            .find_subcommand_mut("analyze")
            .unwrap()
            .render_long_help()
            .to_string();
        for flag in ["--input", "--output", "--dt", "--k", "--alpha", "--mode", "--normalize", "--nan-policy", "--workers", "--format"] {
            assert!(sub.contains(flag), "missing {flag}");
        }
        assert!(sub.contains("[default: 1]"));
    }

    #[test]
    fn inline_constant_system() {
        let cfg = parse(&["simulate", "--A", "0", "--B", "0", "--x0", "1", "--n", "5"]);
        let out = execute(&cfg).unwrap();
        assert_eq!(out, "x1\n1\n1\n1\n1\n1\n");
    }

    #[test]
    fn oracle_ou2() {
        let out = execute(&parse(&["oracle", "--preset", "ou2"])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let t21 = v["T"][0][1].as_f64().unwrap();
        assert!((t21 - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(v["T"][1][0].as_f64().unwrap(), 0.0);
        assert!(v["max_budget_residual"].as_f64().unwrap() <= 1e-10);
    }

    #[test]
    fn validation_errors_map_to_exit_2() {
        let args = AnalysisArgs {
            input: "x.csv".into(),
            output: None,
            dt: -1.0,
            k: 1,
            alpha: 0.05,
            mode: ModeArg::Multivariate,
            normalize: false,
            nan_policy: NanPolicyArg::Reject,
            workers: 1,
        };
        let e = args.validate().unwrap_err();
        assert_eq!(exit_code(&e), 2);
        assert_eq!(exit_code(&Error::SingularCovariance { target: None }), 3);
        assert_eq!(exit_code(&Error::Io("disk".into())), 1);
    }
}
