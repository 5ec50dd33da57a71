use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pmsim_cli::commands::{cmd_behaviors, cmd_certify, cmd_ensemble, cmd_selftest, cmd_simulate};
use pmsim_cli::{CliError, RunConfig, DEFAULT_DEPTH};
use pmsim_core::section::{DdConfig, InsertionOrder};

#[derive(Parser, Debug)]
#[command(name = "pmsim", version, about = "Exact Peres-Mermin simulation and certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Verification depth L (at least 2)
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Abort double description when a ray list grows past this size
    #[arg(long, global = true, default_value_t = DdConfig::default().ray_cap)]
    ray_cap: usize,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Insert constraints in natural order instead of fewest-cut-first
    #[arg(long, global = true)]
    natural_order: bool,
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Flip one sign of the base automaton before enumeration (test hook)
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the 240 behaviors and the behavior matrix
    Behaviors,
    /// Compute the section cone, its facets and witnesses; exit 0 iff Q is inside P
    Certify,
    /// Solve for a classical ensemble reproducing a state and verify it
    Ensemble {
        #[arg(long)]
        state: PathBuf,
    },
    /// Print exact outcome probabilities of a measurement sequence
    Simulate {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated observables, e.g. C,c,γ
        sequence: String,
        #[arg(long)]
        ensemble: Option<PathBuf>,
    },
    /// Run every acceptance criterion
    Selftest,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig {
        dd: DdConfig {
            ray_cap: cli.ray_cap,
            order: if cli.natural_order {
                InsertionOrder::Natural
            } else {
                InsertionOrder::MinCutoff
            },
        },
        depth: cli.depth,
        jobs: cli.jobs,
        verbose: cli.verbose,
        fault: cli.inject_fault,
    };
    cfg.validate()?;
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let out_path = cli.out.as_deref();
    let result = match &cli.command {
        Command::Behaviors => cmd_behaviors(&cfg, out_path, &mut out),
        Command::Certify => cmd_certify(&cfg, out_path, &mut out),
        Command::Ensemble { state } => cmd_ensemble(&cfg, state, out_path, &mut out),
        Command::Simulate {
            state,
            sequence,
            ensemble,
        } => cmd_simulate(&cfg, state, sequence, ensemble.as_deref(), &mut out),
        Command::Selftest => cmd_selftest(&cfg, &mut out),
    };
    let _ = out.flush();
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pmsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
