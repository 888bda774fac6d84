use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use folner_cli::catalog;
use folner_cli::config::{Format, Overrides, RunConfig};
use folner_cli::{runner, verify, CliError};

#[derive(Parser)]
#[command(
    name = "folner",
    version,
    about = "Averaging sequences and weighted isoperimetry on orbit graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the series for one example and write a report
    Run(RunArgs),
    /// Run an example's verification battery; nonzero exit on failure
    Verify(RunArgs),
    /// List the example catalog
    List,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Example name from the catalog
    #[arg(long)]
    example: Option<String>,
    /// Largest index in the sequence
    #[arg(long)]
    n_max: Option<u32>,
    /// Cylinder depth for boundary-orbit diagnostics
    #[arg(long)]
    depth: Option<u32>,
    /// Expansion factor for the sol example
    #[arg(long)]
    lambda: Option<f64>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json or csv
    #[arg(long)]
    format: Option<String>,
}

fn resolve(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => {
            let name = args.example.as_deref().unwrap_or("f2-boundary");
            catalog::find(name)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "unknown example {name:?}; `folner list` names the available ones"
                    ))
                })?
                .default_config()
        }
    };
    let format = match &args.format {
        Some(text) => Some(text.parse::<Format>()?),
        None => None,
    };
    cfg.apply(&Overrides {
        example: args.example.clone(),
        n_max: args.n_max,
        cylinder_depth: args.depth,
        lambda: args.lambda,
        output: args.out.clone(),
        format,
    });
    cfg.validate()?;
    Ok(cfg)
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    match Cli::parse().cmd {
        Cmd::List => {
            for entry in catalog::entries() {
                println!("{:<12} {}", entry.name, entry.summary);
            }
            0
        }
        Cmd::Run(args) => report_command(&args, runner::run),
        // for verify the exit code reflects check outcomes, not just errors
        Cmd::Verify(args) => report_command(&args, verify::verify),
    }
}

fn report_command(
    args: &RunArgs,
    produce: impl Fn(&RunConfig) -> Result<folner_cli::report::Report, CliError>,
) -> i32 {
    let cfg = match resolve(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let report = match produce(&cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if let Err(e) = report.emit(cfg.format, cfg.output.as_deref()) {
        eprintln!("{e}");
        return e.exit_code();
    }
    if report.checks.is_empty() || report.all_pass() {
        0
    } else {
        1
    }
}
