//! `contextuality`: catalog listing, simulated runs, visibility sweeps and the
//! optics and classical-bound verification suites.
//!
//! Exit codes: 0 success, 1 a verification did not hold, 2 usage error.

mod emit;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contextuality_core::experiment::{Mode, NoiseModel, RunConfig, DEFAULT_SHOTS};
use contextuality_core::state_catalog::{catalog, find, StateSpec};

use crate::emit::Emitter;

#[derive(Parser, Debug)]
#[command(name = "contextuality", version, about = "Peres-Mermin contextuality on a single path-polarization photon")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the 20 catalog states with their entanglement classification.
    Catalog,
    /// Simulate the six-context experiment on catalog states.
    Run(RunArgs),
    /// χ over a grid of interferometer visibilities.
    Sweep(SweepArgs),
    /// Check every device against the Lüders instrument and every cascade
    /// against the projector-chain reference.
    VerifyOptics,
    /// Enumerate all 512 noncontextual assignments and certify χ ≤ 4.
    CertifyClassical {
        /// Include every assignment with its χ.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Comma-separated state ids (`psi1`, `ψ₁`, `rho20` or a catalog index); all states by default.
    #[arg(long, value_delimiter = ',')]
    states: Vec<String>,

    /// Photons prepared per context.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: u64,

    #[arg(long, env = "CONTEXTUALITY_SEED", default_value_t = 1)]
    seed: u64,

    /// Detection efficiency.
    #[arg(long, default_value_t = 0.5)]
    efficiency: f64,

    /// Send mixed density matrices through the optics instead of combining
    /// the counts of their pure components.
    #[arg(long)]
    direct: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Visibility of the interferometric (phase-sensitive) devices.
    #[arg(long, default_value_t = 0.95)]
    vis_ps: f64,

    /// Visibility of the phase-insensitive devices.
    #[arg(long, default_value_t = 0.995)]
    vis_pi: f64,

    /// Perfect devices and infinite statistics.
    #[arg(long)]
    ideal: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.95, 0.92, 0.9])]
    vis_ps_grid: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_values_t = [0.995])]
    vis_pi_grid: Vec<f64>,

    /// Infinite statistics instead of photon counting.
    #[arg(long)]
    exact: bool,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<contextuality_core::Error> for Failure {
    fn from(e: contextuality_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn select_states(ids: &[String]) -> Result<Vec<StateSpec>, Failure> {
    if ids.is_empty() {
        return Ok(catalog());
    }
    ids.iter().map(|id| find(id.trim()).map_err(Failure::from)).collect()
}

fn config(common: &CommonArgs, vis_ps: f64, vis_pi: f64) -> Result<RunConfig, Failure> {
    let noise = NoiseModel::new(vis_ps, vis_pi, common.efficiency)?;
    let cfg = RunConfig { shots_per_context: common.shots, seed: common.seed, noise };
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let emitter = Emitter::new(cli.format, cli.out.clone());
    match &cli.command {
        Command::Catalog => emitter.catalog(&report::catalog_rows()?),
        Command::Run(args) => {
            let states = select_states(&args.common.states)?;
            let (cfg, mode) = if args.ideal {
                let cfg = config(&args.common, 1.0, 1.0)?;
                (RunConfig { noise: NoiseModel::ideal(), ..cfg }, Mode::Exact)
            } else {
                (config(&args.common, args.vis_ps, args.vis_pi)?, Mode::Sampled)
            };
            let run = report::run(&states, &cfg, mode, args.common.direct)?;
            emitter.run(&run)?;
            if run.all_violate {
                Ok(())
            } else {
                Err(Failure::Verification("some state does not violate the bound by 3 SD".into()))
            }
        }
        Command::Sweep(args) => {
            if args.vis_ps_grid.is_empty() || args.vis_pi_grid.is_empty() {
                return Err(Failure::Usage("visibility grids must be nonempty".into()));
            }
            let states = select_states(&args.common.states)?;
            let mode = if args.exact { Mode::Exact } else { Mode::Sampled };
            let mut configs = Vec::new();
            for &vis_ps in &args.vis_ps_grid {
                for &vis_pi in &args.vis_pi_grid {
                    configs.push(config(&args.common, vis_ps, vis_pi)?);
                }
            }
            emitter.sweep(&report::sweep(&states, &configs, mode, args.common.direct)?)
        }
        Command::VerifyOptics => {
            let v = report::verify_optics()?;
            emitter.optics(&v)?;
            eprintln!(
                "{} devices, {} checks, max total variation {:.3e}, max instrument deviation {:.3e}",
                v.devices.len(),
                v.checks.len(),
                v.max_total_variation,
                v.max_instrument_deviation
            );
            if v.pass {
                Ok(())
            } else {
                Err(Failure::Verification("optics do not reproduce the Lüders statistics".into()))
            }
        }
        Command::CertifyClassical { table } => match report::certify(*table) {
            Ok(c) => {
                emitter.classical(&c)?;
                eprintln!("max chi {} over {} assignments, quantum gap {}", c.max_chi, c.assignments, c.quantum_gap);
                Ok(())
            }
            Err(contextuality_core::Error::BoundViolated(max)) => {
                Err(Failure::Verification(format!("classical maximum is {max}, not 4")))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
