use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use faraday_qed::cli::{self, Format, Method, Overrides, PointError};

/// Faraday B-term rotation from molecular dipole data.
#[derive(Parser)]
#[command(name = "faraday", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute rotation angles at one point or over a scan.
    Run(Common),
    /// Check a config and model without computing anything.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compare exact Fock-space evolution with the perturbative angle.
    OracleReport(Common),
}

#[derive(Args)]
struct Common {
    /// Run config (JSON).
    config: PathBuf,
    /// Model file, overriding the config.
    #[arg(long)]
    model: Option<PathBuf>,
    /// b_term, via_amplitude, oracle or all.
    #[arg(long)]
    method: Option<Method>,
    /// Output file, overriding the config.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<Format>,
    /// Number of scan points, overriding the config.
    #[arg(long)]
    points: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            model: self.model.clone(),
            method: self.method,
            output: self.output.clone(),
            format: self.format,
            points: self.points,
        }
    }
}

fn fail(err: PointError) -> ExitCode {
    eprintln!("{}", err.record());
    ExitCode::from(err.error.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(common) => {
            let resolved = match cli::load_config(&common.config, &common.overrides()) {
                Ok(r) => r,
                Err(e) => return fail(e.into()),
            };
            match cli::run_and_write(&resolved) {
                Ok(_) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Validate { common, json } => {
            let report = cli::validate(&common.config, &common.overrides());
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.render_text());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::OracleReport(common) => {
            let overrides = common.overrides();
            let resolved = match cli::load_config(&common.config, &overrides) {
                Ok(r) => r,
                Err(e) => return fail(e.into()),
            };
            let report = match cli::oracle_report_from_config(&resolved) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &resolved.output {
                Some(path) => {
                    if let Err(source) = std::fs::write(path, format!("{text}\n")) {
                        let error = faraday_qed::Error::Io { path: path.display().to_string(), source };
                        return fail(error.into());
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
    }
}
