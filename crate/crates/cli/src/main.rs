//! `gip`: Gaussian interferometric power from the command line.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input.

mod commands;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gip_core::families::FamilyKind;
use gip_core::StandardForm;

use commands::{Figure, Format, InvalidInput, RunConfig, StateSource};

#[derive(Parser)]
#[command(
    name = "gip",
    version,
    about = "Gaussian interferometric power of two-mode Gaussian states"
)]
struct Cli {
    /// Worker threads for batch commands (defaults to all cores).
    #[arg(long, global = true, env = "GIP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form IP and entanglement report for one state, as JSON.
    Ip(IpArgs),
    /// Cross-check the closed form against the numerical worst-case QFI.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Random states for the scaling (fig2) or boundary (fig3) scatter data.
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, value_enum, default_value = "fig2")]
        which: Figure,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Upper and lower IP-per-photon bounds on a grid of partial-transpose eigenvalues.
    Bounds {
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covariance matrix JSON for a named state family.
    Family {
        #[arg(long, value_parser = commands::parse_kind)]
        kind: FamilyKind,
        /// Comma-separated parameters, e.g. `--params 2,3,1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct IpArgs {
    /// Covariance matrix JSON file.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d"])]
    input: Option<PathBuf>,
    #[arg(long, requires_all = ["b", "c", "d"])]
    a: Option<f64>,
    #[arg(long, requires = "a")]
    b: Option<f64>,
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    d: Option<f64>,
}

impl IpArgs {
    fn source(&self) -> anyhow::Result<StateSource> {
        match (&self.input, self.a, self.b, self.c, self.d) {
            (Some(path), ..) => Ok(StateSource::File(path.clone())),
            (None, Some(a), Some(b), Some(c), Some(d)) => {
                Ok(StateSource::Standard(StandardForm::new(a, b, c, d)))
            }
            _ => Err(InvalidInput("give either --input or all of --a --b --c --d".into()).into()),
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(InvalidInput("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    match cli.command {
        Command::Ip(args) => commands::cmd_ip(&args.source()?)?,
        Command::Verify { seed, n, tol } => {
            let config = RunConfig {
                seed,
                samples: n,
                tolerances: BTreeMap::from([("verify".to_string(), tol)]),
                output_path: None,
                format: Format::Json,
            };
            return commands::cmd_verify(&config);
        }
        Command::Sample {
            seed,
            n,
            which,
            out,
            format,
        } => {
            let config = RunConfig {
                seed,
                samples: n,
                tolerances: BTreeMap::new(),
                output_path: out,
                format,
            };
            commands::cmd_sample(&config, which)?;
        }
        Command::Bounds { grid, out } => commands::cmd_bounds(grid, out.as_deref())?,
        Command::Family { kind, params, out } => {
            commands::cmd_family(kind, params, out.as_deref())?
        }
    }
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let input = err.downcast_ref::<InvalidInput>().is_some()
        || err
            .downcast_ref::<gip_core::Error>()
            .is_some_and(gip_core::Error::is_input_error);
    if input {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
