//! `shadowpath` command line.
//!
//! Exit codes: 0 success, 1 runtime failure (including failed checks),
//! 2 configuration error, 3 circuit error, 4 numerical instability.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{RunTarget, SweepTarget};
use settings::{Failure, Settings};

#[derive(Parser)]
#[command(
    name = "shadowpath",
    version,
    about = "Interferometer and path-sum simulations with reproducible output"
)]
struct Cli {
    /// Master seed for the stream engine and for sampling.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// streams, hilbert or both.
    #[arg(long, global = true)]
    engine: Option<String>,
    /// Result file; `-` writes it to standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<String>,
    /// TOML file with default values for any long flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs one experiment and prints a summary.
    Run {
        #[arg(value_enum)]
        experiment: RunTarget,
        #[command(flatten)]
        params: ExperimentArgs,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Evaluates an experiment over a parameter grid.
    Sweep {
        #[arg(value_enum)]
        experiment: SweepTarget,
        #[command(flatten)]
        params: ExperimentArgs,
        /// Grid start (angle).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// Grid stop (angle).
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Number of grid points, endpoints included.
        #[arg(long)]
        points: Option<String>,
        /// CHSH angle to vary: a, a', b or b'.
        #[arg(long)]
        free: Option<String>,
    },
    /// Runs the invariant suite.
    Check {
        /// Coincidences per CHSH setting in the Monte Carlo check.
        #[arg(long)]
        shots: Option<String>,
        /// Randomized engine-agreement cases.
        #[arg(long)]
        cases: Option<String>,
    },
    /// Evolves a wavefunction with the lattice path sum and writes snapshots.
    Propagate {
        #[command(flatten)]
        path: PathArgs,
        /// Snapshot every this many steps.
        #[arg(long)]
        every: Option<String>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Which-path measurement between the beamsplitters.
    #[arg(long)]
    peek: bool,
    /// Blocked arm: none, a or b.
    #[arg(long)]
    blocked: Option<String>,
    /// CHSH angles a,a',b,b'.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// CHSH signs for the four correlators.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    /// Sample this many shots instead of reporting exact probabilities.
    #[arg(long)]
    shots: Option<String>,
    /// Circuit file for `run circuit`.
    #[arg(long)]
    file: Option<String>,
    /// Source element for `run circuit`.
    #[arg(long)]
    source: Option<String>,
}

#[derive(Args)]
struct PathArgs {
    /// free, harmonic or tabulated.
    #[arg(long)]
    potential: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// Two-column `x V` table for the tabulated potential.
    #[arg(long)]
    potential_file: Option<String>,
    /// min,max,points.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k0: Option<String>,
    /// Three-column `x re im` table; replaces the Gaussian and its grid.
    #[arg(long)]
    initial: Option<String>,
    /// Time step.
    #[arg(long)]
    epsilon: Option<String>,
    /// Final time, a whole number of steps.
    #[arg(long)]
    time: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    /// Sum over every lattice point instead of the windowed kernel.
    #[arg(long)]
    dense: bool,
}

impl ExperimentArgs {
    fn apply(self, s: &mut Settings) {
        for (k, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("blocked", self.blocked),
            ("angles", self.angles),
            ("signs", self.signs),
            ("shots", self.shots),
            ("file", self.file),
            ("source", self.source),
        ] {
            s.flag(k, v);
        }
        s.switch("peek", self.peek);
    }
}

impl PathArgs {
    fn apply(self, s: &mut Settings) {
        for (k, v) in [
            ("potential", self.potential),
            ("omega", self.omega),
            ("potential-file", self.potential_file),
            ("grid", self.grid),
            ("x0", self.x0),
            ("sigma", self.sigma),
            ("k0", self.k0),
            ("initial", self.initial),
            ("epsilon", self.epsilon),
            ("time", self.time),
            ("hbar", self.hbar),
            ("mass", self.mass),
        ] {
            s.flag(k, v);
        }
        s.switch("dense", self.dense);
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let mut s = Settings::load(cli.config.as_deref())?;
    for (k, v) in [
        ("seed", cli.seed),
        ("engine", cli.engine),
        ("out", cli.out),
        ("format", cli.format),
        ("threads", cli.threads),
    ] {
        s.flag(k, v);
    }
    if let Some(n) = s.optional_count("threads")? {
        if n == 0 {
            return Err(s.fail("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Run {
            experiment,
            params,
            path,
        } => {
            params.apply(&mut s);
            path.apply(&mut s);
            commands::run(experiment, &s)
        }
        Command::Sweep {
            experiment,
            params,
            from,
            to,
            points,
            free,
        } => {
            params.apply(&mut s);
            for (k, v) in [("from", from), ("to", to), ("points", points), ("free", free)] {
                s.flag(k, v);
            }
            commands::sweep(experiment, &s)
        }
        Command::Check { shots, cases } => {
            s.flag("shots", shots);
            s.flag("cases", cases);
            commands::check(&s)
        }
        Command::Propagate { path, every } => {
            path.apply(&mut s);
            s.flag("every", every);
            commands::propagate(&s)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shadowpath: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
