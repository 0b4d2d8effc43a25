//! Command-line front end: read a scenario, run the engine, print a summary
//! and optionally write a JSON report and a per-path CSV dump.
//!
//! Exit codes: 0 on success, 1 when the input is invalid, 2 when the run
//! itself fails.

pub mod report;
pub mod scenario;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::engine::{run_with_checkpoints, PathGenerator};
use crate::error::Error;
pub use report::{
    compare_to_reference, dump_header, read_dump_legs, write_dump_rows, Conventions,
    ReferenceComparison, RunReport,
};
pub use scenario::{
    parse_scenario, CorrelationSpec, EstimatorChoice, ReferenceEstimator, ReferenceValue, Scenario,
    ScenarioError, ScenarioFile,
};

const DUMP_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Parser)]
#[command(name = "ftd", version, about = "Price a first-to-default basket swap by Gaussian-copula Monte Carlo")]
pub struct Args {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Override the number of paths.
    #[arg(long)]
    pub paths: Option<u64>,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Which estimator(s) to print.
    #[arg(long, value_enum)]
    pub estimator: Option<EstimatorChoice>,
    /// Write a JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write one CSV row per path here.
    #[arg(long = "paths-dump")]
    pub paths_dump: Option<PathBuf>,
    /// Comma-separated path counts at which to report convergence rows.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Runtime(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "error: {m}"),
            Self::Runtime(m) => write!(f, "runtime error: {m}"),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        Self::Validation(e.to_string())
    }
}

fn engine_error(e: Error) -> CliError {
    match e {
        Error::ZeroPremium | Error::NoOutcomes => CliError::Runtime(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

/// Loads the scenario named by `args` and applies command-line overrides.
pub fn load_scenario(args: &Args) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Validation(format!("cannot read scenario {}: {e}", args.config.display()))
    })?;
    let mut file: ScenarioFile = toml::from_str(&text).map_err(|e| {
        CliError::Validation(format!("{}: {}", args.config.display(), ScenarioError::Syntax(e.to_string())))
    })?;
    if let Some(p) = args.paths {
        file.paths = p;
    }
    if let Some(s) = args.seed {
        file.seed = s;
    }
    if let Some(e) = args.estimator {
        file.estimator = e;
    }
    let mut scenario = Scenario::from_file(file)
        .map_err(|e| CliError::Validation(format!("{}: {e}", args.config.display())))?;
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Validation("--workers must be at least 1".into()));
        }
        scenario.config.workers = w;
    }
    Ok(scenario)
}

/// Runs a validated scenario and assembles its report.
pub fn run_scenario(scenario: &Scenario, checkpoints: &[u64]) -> Result<RunReport, CliError> {
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Validation("--checkpoints must be strictly increasing".into()));
    }
    if let Some(&bad) = checkpoints.iter().find(|&&c| c == 0 || c > scenario.config.n_paths) {
        return Err(CliError::Validation(format!(
            "checkpoint {bad} outside 1..={}",
            scenario.config.n_paths
        )));
    }
    let (result, convergence) = run_with_checkpoints(
        &scenario.basket,
        &scenario.correlation,
        &scenario.curve,
        &scenario.config,
        checkpoints,
    )
    .map_err(engine_error)?;
    let reference = scenario
        .reference
        .as_ref()
        .map(|r| compare_to_reference(&result.report, r));
    Ok(RunReport {
        scenario: scenario.file.clone(),
        estimator: scenario.estimator,
        conventions: Conventions::current(scenario.file.payment_step, scenario.config.batch_count),
        workers: scenario.config.workers,
        wall_time: result.wall_time,
        paths_per_second: result.paths_per_second,
        report: result.report,
        convergence,
        reference,
    })
}

/// Streams the per-path table of `scenario` to `path`.
pub fn write_paths_dump(scenario: &Scenario, path: &Path) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Runtime(format!("writing {}: {e}", path.display()));
    let generator = PathGenerator::new(
        &scenario.basket,
        &scenario.correlation,
        scenario.curve,
        scenario.config.master_seed,
    )
    .map_err(engine_error)?;
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    writeln!(out, "{}", dump_header(scenario.basket.len())).map_err(io_err)?;
    let n = scenario.config.n_paths;
    let mut start = 0;
    while start < n {
        let end = (start + DUMP_CHUNK).min(n);
        let outcomes = generator.outcomes_for(start..end, scenario.config.workers);
        write_dump_rows(&mut out, start, &outcomes).map_err(io_err)?;
        start = end;
    }
    out.flush().map_err(io_err)
}

/// Human-readable summary of a run.
pub fn render_summary(run: &RunReport) -> String {
    let r = &run.report;
    let s = &run.scenario;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "basket: {} names, maturity {}y, premium every {}y, rate {}",
        s.names.len(),
        s.maturity,
        s.payment_step,
        s.rate
    );
    let _ = writeln!(out, "paths: {} (seed {}, workers {})", r.n_paths, r.seed, run.workers);
    if run.estimator.shows_paper() {
        let _ = writeln!(
            out,
            "spread (paper, mean of ratios):    {:.6}  se {:.6}",
            r.spread_paper, r.se_paper
        );
    }
    if run.estimator.shows_standard() {
        let se = r.se_standard.map_or("n/a".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(out, "spread (standard, ratio of means): {:.6}  se {se}", r.spread_standard);
    }
    if run.estimator == EstimatorChoice::Both {
        let _ = writeln!(out, "estimator gap (standard - paper):  {:.6}", r.estimator_gap);
    }
    let _ = writeln!(out, "mean premium leg PV (unit spread): {:.6}", r.mean_premium_pv);
    let _ = writeln!(out, "mean protection leg PV:            {:.6}", r.mean_protection_pv);
    let _ = writeln!(out, "paths with no premium paid:        {}", r.zero_premium_paths);
    for row in &run.convergence {
        let se = row.se_standard.map_or("n/a".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(
            out,
            "  N = {:>10}: paper {:.6} (se {:.6})  standard {:.6} (se {se})",
            row.n_paths, row.spread_paper, row.se_paper, row.spread_standard
        );
    }
    if let Some(c) = &run.reference {
        let _ = writeln!(out, "reference: {}", c.explanation);
    }
    let _ = writeln!(
        out,
        "runtime: {:.3} s ({:.0} paths/s)",
        run.wall_time, run.paths_per_second
    );
    out
}

/// Full command: load, run, write files, print the summary.
pub fn execute(args: &Args, stdout: &mut dyn Write) -> Result<RunReport, CliError> {
    let scenario = load_scenario(args)?;
    let run = run_scenario(&scenario, &args.checkpoints)?;
    if let Some(path) = &args.output {
        std::fs::write(path, run.to_json())
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.paths_dump {
        write_paths_dump(&scenario, path)?;
    }
    stdout
        .write_all(render_summary(&run).as_bytes())
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(run)
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&args, stdout) {
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
