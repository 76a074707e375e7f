//! The `stable-sde` subcommands.
//!
//! Every numeric flag is validated by the owning library type before any
//! output is written.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{self, PathSeries};
use crate::link::fit_link;
use crate::noise::self_similarity_check;
use crate::sde::{simulate, GridSpec, ModelKind, ModelSpec};
use crate::stable::{sample_n, StableParams};
use crate::{Error, Result, StreamKey};

#[derive(Debug, Parser)]
#[command(name = "stable-sde", version, about = "Simulate and analyse SDEs driven by alpha-stable noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate sample paths of one model and write them as CSV.
    Simulate(SimulateArgs),
    /// Simulate every (lambda, mu, alpha) combination into its own file.
    Sweep(SweepArgs),
    /// Fit the degree-1 link equation to five `lambda,mu,alpha,t,x` rows.
    FitLink(FitLinkArgs),
    /// Draw alpha-stable variates, one per line.
    Rng(RngArgs),
    /// Test self-similarity of stable Levy motion with a two-sample KS test.
    Selfsim(SelfsimArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ou,
    Glm,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ou => ModelKind::Ou,
            ModelArg::Glm => ModelKind::Glm,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PathArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1024)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop the jump term (Brownian-only GLM, deterministic OU).
    #[arg(long)]
    pub no_jumps: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: PathArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write an SVG plot of the paths.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: PathArgs,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub mus: Vec<f64>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write one SVG panel per combination.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FitLinkArgs {
    /// CSV with header `lambda,mu,alpha,t,x` and exactly five rows.
    #[arg(long)]
    pub input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RngArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SelfsimArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// `selfsim` ran but the KS test rejected.
    StatisticalFail,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::StatisticalFail => 2,
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a).map(|_| Outcome::Success),
        Command::Sweep(a) => cmd_sweep(&a).map(|_| Outcome::Success),
        Command::FitLink(a) => cmd_fit_link(&a, stdout).map(|_| Outcome::Success),
        Command::Rng(a) => cmd_rng(&a, stdout).map(|_| Outcome::Success),
        Command::Selfsim(a) => cmd_selfsim(&a, stdout),
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn check_count(field: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param(field, 0u32, "[1, inf)"));
    }
    Ok(())
}

fn simulate_paths(model: &ModelSpec<f64>, grid: &GridSpec<f64>, n_paths: usize, key: StreamKey) -> Result<Vec<PathSeries>> {
    (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let traj = simulate(model, grid, key.child(p))?;
            Ok(PathSeries {
                path_id: p,
                times: traj.times,
                values: traj.values,
            })
        })
        .collect()
}

fn model_from(common: &PathArgs, lambda: f64, mu: f64, alpha: f64) -> Result<ModelSpec<f64>> {
    let model = ModelSpec::new(common.model.into(), lambda, mu, alpha, common.x0)?;
    Ok(if common.no_jumps { model.without_jumps() } else { model })
}

fn title(kind: ModelKind, lambda: f64, mu: f64, alpha: f64) -> String {
    format!("{} lambda={lambda} mu={mu} alpha={alpha}", kind.name())
}

/// Writes `--paths` trajectories; path `p` uses stream `(seed, 0).child(p)`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let c = &args.common;
    let model = model_from(c, args.lambda, args.mu, args.alpha)?;
    let grid = GridSpec::new(c.t_end, c.steps)?;
    check_count("paths", c.paths)?;

    let paths = simulate_paths(&model, &grid, c.paths, StreamKey::new(c.seed, 0))?;
    io::write_atomic(&args.out, |w| io::write_trajectories(w, &paths))?;
    if let Some(svg) = &args.svg {
        let doc = io::render_svg(&paths, &title(model.kind, args.lambda, args.mu, args.alpha));
        io::write_atomic(svg, |w| w.write_all(doc.as_bytes()))?;
    }
    Ok(())
}

/// `1.5` → `1p5`.
pub fn file_number(v: f64) -> String {
    format!("{v}").replace('.', "p")
}

pub fn sweep_file_stem(kind: ModelKind, lambda: f64, mu: f64, alpha: f64) -> String {
    format!(
        "{}_l{}_m{}_a{}",
        kind.name(),
        file_number(lambda),
        file_number(mu),
        file_number(alpha)
    )
}

/// One file per `(λ, μ, α)` in λ-major order; combination `i` draws its paths
/// from stream `(seed, 0).child(i)`. Returns the CSV paths written.
pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<PathBuf>> {
    let c = &args.common;
    for (field, list) in [("alphas", &args.alphas), ("lambdas", &args.lambdas), ("mus", &args.mus)] {
        if list.is_empty() {
            return Err(Error::param(field, f64::NAN, "non-empty list"));
        }
    }
    let grid = GridSpec::new(c.t_end, c.steps)?;
    check_count("paths", c.paths)?;
    let mut combos = Vec::new();
    for &lambda in &args.lambdas {
        for &mu in &args.mus {
            for &alpha in &args.alphas {
                combos.push((lambda, mu, alpha, model_from(c, lambda, mu, alpha)?));
            }
        }
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;

    let root = StreamKey::new(c.seed, 0);
    combos
        .par_iter()
        .enumerate()
        .map(|(i, (lambda, mu, alpha, model))| {
            let paths = simulate_paths(model, &grid, c.paths, root.child(i as u64))?;
            let stem = sweep_file_stem(model.kind, *lambda, *mu, *alpha);
            let csv = args.out_dir.join(format!("{stem}.csv"));
            io::write_atomic(&csv, |w| io::write_trajectories(w, &paths))?;
            if args.svg {
                let doc = io::render_svg(&paths, &title(model.kind, *lambda, *mu, *alpha));
                io::write_atomic(&args.out_dir.join(format!("{stem}.svg")), |w| w.write_all(doc.as_bytes()))?;
            }
            Ok(csv)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkReport {
    /// `(β₁, …, β₅)` for `(lambda, mu, alpha, t, 1)`.
    pub beta: [f64; 5],
    pub t_bar: f64,
    pub x_bar: f64,
    pub rhs: f64,
    pub equation: String,
}

pub fn link_report(input: &Path) -> Result<LinkReport> {
    let rows = io::read_link_rows(input)?;
    let link = fit_link(&rows)?;
    Ok(LinkReport {
        beta: link.coefficients,
        t_bar: link.t_bar,
        x_bar: link.x_bar,
        rhs: link.rhs,
        equation: link.equation(),
    })
}

pub fn cmd_fit_link(args: &FitLinkArgs, stdout: &mut dyn Write) -> Result<()> {
    let report = link_report(&args.input)?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    match &args.out {
        Some(path) => io::write_atomic(path, |w| w.write_all(json.as_bytes())),
        None => stdout.write_all(json.as_bytes()).map_err(stdout_err),
    }
}

pub fn cmd_rng(args: &RngArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = StableParams::new(args.alpha, args.beta, args.gamma, args.delta);
    params.validate()?;
    check_count("n", args.n)?;
    let mut stream = StreamKey::new(args.seed, 0).open();
    let draws = sample_n(&params, &mut stream, args.n)?;
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        for x in &draws {
            writeln!(w, "{}", io::format_real(*x))?;
        }
        Ok(())
    };
    match &args.out {
        Some(path) => io::write_atomic(path, write),
        None => write(stdout).map_err(stdout_err),
    }
}

pub fn cmd_selfsim(args: &SelfsimArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let report = self_similarity_check(args.alpha, args.c, args.t, args.paths, args.steps, StreamKey::new(args.seed, 0))?;
    writeln!(
        stdout,
        "statistic={}\ncritical_value={}\nsignificance=0.01\npass={}",
        io::format_real(report.statistic),
        io::format_real(report.critical_value),
        report.pass
    )
    .map_err(stdout_err)?;
    Ok(if report.pass {
        Outcome::Success
    } else {
        Outcome::StatisticalFail
    })
}
