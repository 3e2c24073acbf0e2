//! `gbq` command-line driver.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CliError, GroundStateArgs, MorawetzArgs, ScatteringArgs};

#[derive(Debug, Parser)]
#[command(name = "gbq", version, about = "Simulate and test the generalized Boussinesq equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the ground state by Petviashvili iteration.
    GroundState {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Box side; defaults depend on the dimension.
        #[arg(long = "box")]
        side: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
        /// Checkpoint path; constants go to `<out>.constants`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a configuration and write its diagnostics.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify initial data against the ground-state thresholds.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ground_state: PathBuf,
        /// Run the data and check the predicted behaviour.
        #[arg(long)]
        confirm: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify (and optionally run) every cell of a parameter grid.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        /// Worker count; `GBQ_NUM_THREADS` takes precedence.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Record per-cell wallclock times.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the sup-norm decay rate of frequency-localized linear packets.
    DecayTest {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
        shells: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Morawetz upper and lower bounds at one or more radii.
    Morawetz {
        #[arg(long)]
        config: PathBuf,
        /// Radii; defaults to `diagnostics.morawetz_r`.
        #[arg(long = "R", value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 0.25)]
        fit_fraction: f64,
        #[arg(long, default_value_t = 0.95)]
        required: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-sample `M_R` values.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Probe scattering through residuals over successive time windows.
    Scattering {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        horizon: f64,
        /// Large defocusing radial data in d = 3.
        #[arg(long)]
        large_data: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Strichartz and space-time integral curves.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Full diagnostics trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Measure the Riesz commutator constant across resolutions.
    Commutator {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_value = "256,512")]
        points: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        band: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn jobs_from_env(jobs: usize) -> usize {
    std::env::var("GBQ_NUM_THREADS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(jobs)
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::GroundState { alpha, dim, side, points, tol, max_iter, out: path } => commands::ground_state(
            &GroundStateArgs { alpha, dim, side, points, tol, max_iter, out: path },
            out,
        ),
        Command::Evolve { config, seed } => commands::evolve_cmd(&config, seed, out),
        Command::Classify { config, ground_state, confirm, out: csv } => {
            commands::classify_cmd(&config, &ground_state, confirm, csv.as_deref(), out)
        }
        Command::Sweep { grid, jobs, timing, out: csv } => {
            commands::sweep_cmd(&grid, jobs_from_env(jobs), timing, csv.as_deref(), out)
        }
        Command::DecayTest { dim, shells, out: csv } => commands::decay_cmd(dim, &shells, csv.as_deref(), out),
        Command::Morawetz { config, radii, fit_fraction, required, out: csv, trace } => commands::morawetz_cmd(
            &MorawetzArgs {
                config: &config,
                radii: &radii,
                fit_fraction,
                required,
                csv: csv.as_deref(),
                trace: trace.as_deref(),
            },
            out,
        ),
        Command::Scattering { config, horizon, large_data, out: csv, curve, trace } => commands::scattering_cmd(
            &ScatteringArgs {
                config: &config,
                horizon,
                large_data,
                csv: csv.as_deref(),
                curve: curve.as_deref(),
                trace: trace.as_deref(),
            },
            out,
        ),
        Command::Commutator { seed, trials, points, band, out: csv } => {
            commands::commutator_cmd(seed, trials, &points, band, csv.as_deref(), out)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::CommandFactory;
    let matches = Cli::command().after_help(commands::csv_help()).try_get_matches_from(args);
    let cli = match matches.and_then(|m| <Cli as clap::FromArgMatches>::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli.command, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
