//! `tomoq` — transforms simulated homodyne tomography statistics into Husimi
//! phase-space distributions, with deterministic and Monte Carlo pathways,
//! identity checks, and an inverse-kernel divergence scan.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use config::Config;

/// Machine-parsable error categories, one exit code each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Truncation,
    Numeric,
}

impl Category {
    fn name(self) -> &'static str {
        match self {
            Category::Config => "config",
            Category::Truncation => "truncation",
            Category::Numeric => "numeric",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Category::Config => 2,
            Category::Truncation => 3,
            Category::Numeric => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    category: Category,
    message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        CliError {
            category: Category::Config,
            message,
        }
    }

    pub fn numeric(message: String) -> Self {
        CliError {
            category: Category::Numeric,
            message,
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError::config(format!("io error: {e}"))
    }
}

impl From<tomoq_core::Error> for CliError {
    fn from(e: tomoq_core::Error) -> Self {
        use tomoq_core::Error::*;
        let category = match &e {
            TruncationInadequate { .. } | MassDeficit { .. } => Category::Truncation,
            InvalidState(_) | InvalidArgument(_) | InvalidScheme(_) => Category::Config,
            Numeric(_) => Category::Numeric,
        };
        CliError {
            category,
            message: e.to_string(),
        }
    }
}

/// Deterministic generator for seeded random probe points.
pub struct SeededRng(rand_chacha::ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        SeededRng(rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform complex point with `|z| <= radius`.
    pub fn disk_point(&mut self, radius: f64) -> Complex64 {
        use rand::Rng;
        loop {
            let re = self.0.gen::<f64>() * 2.0 * radius - radius;
            let im = self.0.gen::<f64>() * 2.0 * radius - radius;
            let z = Complex64::new(re, im);
            if z.norm() <= radius {
                return z;
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tomoq",
    version = concat!(env!("CARGO_PKG_VERSION"), " (config schema 1)"),
    about = "Homodyne tomography statistics to Husimi phase-space distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML run configuration
    #[arg(long, short)]
    config: PathBuf,
    /// Overrides [run].seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides [run].output
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Caps worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Husimi distribution on a grid, evaluated directly from the state
    HusimiDirect(CommonArgs),
    /// Husimi distribution on a grid, via the kernel transform of the
    /// quadrature densities
    HusimiKernel {
        #[command(flatten)]
        common: CommonArgs,
        /// Also evaluate the direct path and fail if the two disagree
        #[arg(long)]
        compare: bool,
    },
    /// Husimi distribution on a grid, estimated from seeded joint samples
    HusimiMc(CommonArgs),
    /// Draw joint (theta, x) homodyne samples to CSV
    Sample(CommonArgs),
    /// Tabulate the kernel in closed form and as a Hermite series
    KernelEval(CommonArgs),
    /// Run the coherent-identity, moment and Radon consistency checks
    CheckIdentities(CommonArgs),
    /// Scan the divergent inverse-kernel integral over truncation radii
    InverseDivergence(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::HusimiDirect(c)
            | Command::HusimiMc(c)
            | Command::Sample(c)
            | Command::KernelEval(c)
            | Command::CheckIdentities(c)
            | Command::InverseDivergence(c) => c,
            Command::HusimiKernel { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::HusimiDirect(_) => "husimi-direct",
            Command::HusimiKernel { .. } => "husimi-kernel",
            Command::HusimiMc(_) => "husimi-mc",
            Command::Sample(_) => "sample",
            Command::KernelEval(_) => "kernel-eval",
            Command::CheckIdentities(_) => "check-identities",
            Command::InverseDivergence(_) => "inverse-divergence",
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let common = cli.command.common();
    let config = Config::from_path(&common.config)?;

    let run_spec = config.run.clone().unwrap_or_default();
    let seed = common.seed.or(run_spec.seed);
    let threads = common.threads.or(run_spec.threads);
    let output = common
        .output
        .clone()
        .or_else(|| run_spec.output.as_ref().map(PathBuf::from))
        .ok_or_else(|| {
            CliError::config("an output path is required: set [run].output or pass --output".into())
        })?;

    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::config("threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool setup failed: {e}")))?;
    }

    let ctx = commands::RunContext {
        config: &config,
        subcommand: cli.command.name(),
        seed,
        threads,
        output: &output,
        started,
    };

    match &cli.command {
        Command::HusimiDirect(_) => commands::husimi_direct_cmd(&ctx),
        Command::HusimiKernel { compare, .. } => commands::husimi_kernel_cmd(&ctx, *compare),
        Command::HusimiMc(_) => commands::husimi_mc_cmd(&ctx),
        Command::Sample(_) => commands::sample_cmd(&ctx),
        Command::KernelEval(_) => commands::kernel_eval_cmd(&ctx),
        Command::CheckIdentities(_) => commands::check_identities_cmd(&ctx),
        Command::InverseDivergence(_) => commands::inverse_divergence_cmd(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.category.name(), e.message);
            ExitCode::from(e.category.exit_code())
        }
    }
}
