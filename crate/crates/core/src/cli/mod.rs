//! Command-line front end: configuration files, subcommands and output.

pub mod commands;
pub mod config;
pub mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Ctx;
use config::{parse_config, parse_theta_grid, OutputFormat, RunConfig};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitStatus {
    Success = 0,
    /// Unreadable or invalid configuration, bad flags, or I/O failure.
    InputError = 1,
    SolveError = 2,
    EmptySchedule = 3,
    VerificationFailed = 4,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "trust-ramsey",
    version,
    about = "Optimal distortionary taxation under imperfect trust in government"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Single trust level, overriding the configuration.
    #[arg(long, global = true, conflicts_with = "theta_grid")]
    pub theta: Option<f64>,

    /// Trust grid `start:stop:step` (inclusive), overriding the configuration.
    #[arg(long, global = true, value_name = "START:STOP:STEP")]
    pub theta_grid: Option<String>,

    /// Grid step of the brute-force oracle.
    #[arg(long, global = true)]
    pub oracle_step: Option<f64>,

    /// Worker threads for batch evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Optimal tax for a single trust level.
    Solve,
    /// Trust threshold and its components.
    Threshold,
    /// Optimal-tax schedule over a trust grid.
    Schedule,
    /// Sufficient statistics along a tax-rate grid.
    Stats,
    /// Brute-force grid oracle against the optimizer.
    Oracle,
    /// Decomposition, oracle and closed-form checks with pass/fail exit code.
    Verify,
    /// Closed-form versus numerical solutions (isoelastic mode).
    Compare,
}

/// Reads the configuration and applies command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig, String> {
    let path = cli.config.as_ref().ok_or("--config <PATH> is required")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut config = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(theta) = cli.theta {
        config.economy.theta = Some(theta);
    }
    if let Some(grid) = &cli.theta_grid {
        config.sweep = Some(parse_theta_grid(grid).map_err(|e| e.to_string())?);
        config.economy.theta = None;
    }
    if let Some(step) = cli.oracle_step {
        config.run.oracle_step = step;
    }
    if let Some(format) = cli.format {
        config.run.format = format;
    }
    if let Some(output) = &cli.output {
        config.run.output = Some(output.clone());
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

/// Runs one invocation, writing the report to the configured output (or
/// `stdout`) and diagnostics to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus {
    let config = match load_config(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return ExitStatus::InputError;
        }
    };
    let mut file;
    let out: &mut dyn Write = match &config.run.output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return ExitStatus::InputError;
            }
        },
        None => stdout,
    };
    let mut ctx = Ctx {
        config: &config,
        format: config.run.format,
        out,
        err: stderr,
    };
    let status = match cli.command {
        Command::Solve => commands::solve(&mut ctx),
        Command::Threshold => commands::threshold(&mut ctx),
        Command::Schedule => commands::schedule(&mut ctx),
        Command::Stats => commands::stats(&mut ctx),
        Command::Oracle => commands::oracle(&mut ctx),
        Command::Verify => commands::verify(&mut ctx),
        Command::Compare => commands::compare(&mut ctx),
    };
    if let Err(e) = ctx.out.flush() {
        let _ = writeln!(ctx.err, "error: {e}");
        return ExitStatus::InputError;
    }
    status
}

/// Convenience wrapper over [`run`] using the process streams.
pub fn run_with_std_streams(cli: &Cli) -> ExitStatus {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(cli, &mut stdout.lock(), &mut stderr.lock())
}
