use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hopfkit_cli::analyze::{analyze, KernelFamily, ReportFormat};
use hopfkit_cli::simulate::Overrides;
use hopfkit_cli::sweep::{Grid, SweepParam};
use hopfkit_cli::{simulate, sweep, verify, CliError, RunConfig};

/// Hopf bifurcation analysis and simulation of a pathogen-immune model with
/// delay kernels.
///
/// Exit codes: 0 success, 1 verify failure, 2 invalid config or arguments,
/// 3 no interior equilibrium, 4 no Hopf point, 5 integrator divergence.
#[derive(Parser)]
#[command(name = "hopfkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibria, critical point and normal-form classification.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        kernel: KernelFamily,
        #[arg(long, value_enum, default_value_t = ReportFormat::Human)]
        format: ReportFormat,
    },
    /// Integrate one trajectory and write it as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Use a discrete delay of this length.
        #[arg(long, conflicts_with = "q")]
        tau: Option<f64>,
        /// Use this kernel rate (weak unless the config asks for strong).
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate over a parameter grid and tabulate amplitude and period.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce the published numerical example.
    Verify,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { config, kernel, format } => {
            let report = analyze(&RunConfig::load(&config)?, kernel)?;
            match format {
                ReportFormat::Human => print!("{}", report.to_human()),
                ReportFormat::Machine => print!("{}", report.to_json()),
            }
        }
        Command::Simulate { config, tau, q, t_end, dt, out } => {
            let effective = Overrides { tau, q, t_end, dt }.apply(&RunConfig::load(&config)?)?;
            let (info, sidecar) = simulate::run(&effective, &out)?;
            log::info!("wrote {} rows to {} ({})", info.rows, out.display(), sidecar.display());
        }
        Command::Sweep { config, param, from, to, steps, out } => {
            let grid = Grid { param, from, to, steps };
            let rows = sweep::run(&RunConfig::load(&config)?, &grid, &out)?;
            log::info!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Verify => {
            let start = Instant::now();
            let mut outcomes = Vec::new();
            for o in verify::run_suite() {
                print!("{}", o.render());
                outcomes.push(o);
            }
            let last = verify::end_to_end(&outcomes, start.elapsed());
            print!("{}", last.render());
            let total = outcomes.len() + 1;
            outcomes.push(last);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} of {total} criteria passed", total - failed);
            if failed > 0 {
                return Err(CliError::VerifyFailed { failed, total });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
