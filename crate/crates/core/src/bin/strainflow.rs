use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strainflow::app::{self, ToyOutput, EXIT_CONFIG, EXIT_VERIFY};
use strainflow::config::RunConfig;
use strainflow::output::write_diagnostics_csv;
use strainflow::toy_ode::Outcome;

#[derive(Parser)]
#[command(name = "strainflow", version, about = "Strain diagnostics for periodic Navier-Stokes flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Overrides as `--key value` pairs, applied last.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver and write diagnostics CSV and snapshots.
    Simulate(Common),
    /// Compute diagnostics of saved velocity snapshots.
    Diagnose {
        #[arg(long, short)]
        config: Option<PathBuf>,
        /// Snapshot files, then optional `--key value` overrides.
        #[arg(
            required = true,
            trailing_var_arg = true,
            allow_hyphen_values = true,
            value_name = "SNAPSHOT... [--KEY VALUE]"
        )]
        args: Vec<String>,
    },
    /// Integrate the strain self-amplification model or sweep its phase plane.
    ToyOde(Common),
    /// Run the property suite and print a pass/fail table.
    Verify(Common),
}

fn load(common: &Common) -> Result<RunConfig, ExitCode> {
    RunConfig::load(common.config.as_deref(), &common.overrides).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_CONFIG as u8)
    })
}

fn fail(e: strainflow::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Simulate(common) => {
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match app::simulate(&cfg) {
                Ok(out) => {
                    let last = out.records.last().expect("at least one record");
                    println!(
                        "t = {:.6}  steps = {}  records = {}  E = {:.10e}",
                        out.final_state.t,
                        out.final_state.step_count,
                        out.records.len(),
                        last.enstrophy
                    );
                    if cfg.csv.is_none() {
                        let _ = write_diagnostics_csv(io::stdout().lock(), &out.records);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Diagnose { config, args } => {
            let split = args.iter().position(|a| a.starts_with("--")).unwrap_or(args.len());
            let snapshots: Vec<PathBuf> = args[..split].iter().map(PathBuf::from).collect();
            let common = Common {
                config,
                overrides: args[split..].to_vec(),
            };
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match app::diagnose(&cfg, &snapshots) {
                Ok(records) => {
                    if cfg.csv.is_none() {
                        let _ = write_diagnostics_csv(io::stdout().lock(), &records);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::ToyOde(common) => {
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match app::toy(&cfg) {
                Ok(out) => {
                    match &out {
                        ToyOutput::Trajectory(t) => match t.outcome {
                            Outcome::BlewUp { t_est } => eprintln!("blew up at T ≈ {t_est:.12e}"),
                            o => eprintln!("{} at t = {}", o.label(), t.last().t),
                        },
                        ToyOutput::Sweep(cells) => {
                            let blown = cells.iter().filter(|c| c.outcome.t_est().is_some()).count();
                            eprintln!("{blown}/{} cells blew up", cells.len());
                        }
                    }
                    if cfg.csv.is_none() {
                        let _ = out.write_csv(io::stdout().lock());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify(common) => {
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match app::verify(&cfg) {
                Ok(report) => {
                    let mut out = io::stdout().lock();
                    let _ = report.write_table(&mut out);
                    let _ = out.flush();
                    if report.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        for c in report.failures() {
                            eprintln!("failed: {}", c.name);
                        }
                        ExitCode::from(EXIT_VERIFY as u8)
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
