//! `gadc`: single-point reports, CSV grid sweeps and verification suites for
//! the generalized amplitude damping channel.

mod format;
mod info;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "gadc",
    version,
    about = "Capacity bounds for the generalized amplitude damping channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundSet {
    Classical,
    Quantum,
    Twoway,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report for one (γ, N) point.
    Info {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        n: f64,
    },
    /// Evaluate a bound set on a (γ, N) grid and write CSV.
    Sweep {
        #[arg(long, value_enum, default_value = "classical")]
        set: BoundSet,
        #[arg(long, default_value_t = 0.0)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 21)]
        gamma_steps: usize,
        /// Comma-separated N values.
        #[arg(long, default_value = "0.1,0.25,0.5")]
        n_list: String,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Duality-gap tolerance of the SDP solver.
        #[arg(long, default_value_t = 1e-8)]
        tol_sdp: f64,
        /// Seed for multi-start restarts.
        #[arg(long, default_value_t = gadc_core::optim::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the witness, identity and formula checks.
    Verify {
        /// Negative control: corrupt one expected value so the suite must fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Info { gamma, n } => match info::report(gamma, n) {
            Ok(text) => {
                print!("{}", text);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(2)
            }
        },
        Command::Sweep {
            set,
            gamma_min,
            gamma_max,
            gamma_steps,
            n_list,
            out,
            jobs,
            tol_sdp,
            seed,
        } => {
            let spec = match sweep::SweepSpec::new(
                set,
                gamma_min,
                gamma_max,
                gamma_steps,
                &n_list,
                jobs,
                tol_sdp,
                seed,
            ) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(2);
                }
            };
            match sweep::run_to(&spec, out.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(1)
                }
            }
        }
        Command::Verify { inject_fault } => {
            let outcome = verify::run(inject_fault);
            print!("{}", outcome.table());
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
