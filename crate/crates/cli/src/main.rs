//! `latspec` — validate spectral-measure specs and run the verification
//! suites.
//!
//! Exit codes: 0 success, 1 a check failed, 2 malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use latspec::DEFAULT_TOL;
use latspec_cli::config::{Suite, VerificationConfig};
use latspec_cli::report::VerificationReport;
use latspec_cli::spec_io::MeasureSpec;
use latspec_cli::suites::{build_corpus, run_suites};

#[derive(Parser)]
#[command(
    name = "latspec",
    version,
    about = "Positive spectral measure verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spectral-measure spec file against the measure axioms.
    Validate {
        /// JSON measure spec.
        spec_file: PathBuf,
        /// Absolute comparison tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
        /// Write the validation report JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites over a generated corpus.
    Verify {
        /// JSON configuration file; missing fields take defaults.
        config_file: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Comma-separated subset of suites to run.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<Suite>>,
        /// Write the report JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the corpus of a configuration as measure spec files.
    Generate {
        /// JSON configuration file.
        config_file: PathBuf,
        /// Output directory for the spec files.
        #[arg(long)]
        out: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render a report file.
    Report {
        /// JSON report produced by `verify`.
        report_file: PathBuf,
        /// Output format.
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed {what} {}: {e}", path.display()))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate {
            spec_file,
            tolerance,
            out,
        } => {
            if !(tolerance > 0.0) {
                return Err("tolerance must be positive".into());
            }
            let spec: MeasureSpec = read_json(&spec_file, "measure spec")?;
            let measure = spec.to_measure()?;
            let report = measure.validate(tolerance);
            let rendered = serde_json::to_string_pretty(&report)
                .map_err(|e| format!("cannot serialize report: {e}"))?;
            write_or_print(&out, &rendered)?;
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                for failure in report.failures() {
                    eprintln!(
                        "failed {}: {}{}",
                        failure.name,
                        failure.identity,
                        failure
                            .witness
                            .as_ref()
                            .map(|w| format!(" (witness: {w})"))
                            .unwrap_or_default()
                    );
                }
                Ok(ExitCode::from(EXIT_FAILURE))
            }
        }
        Command::Verify {
            config_file,
            seed,
            tolerance,
            suites,
            out,
        } => {
            let mut config: VerificationConfig = read_json(&config_file, "config")?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(tolerance) = tolerance {
                config.tolerance = tolerance;
            }
            if let Some(suites) = suites {
                config.suites = suites;
            }
            config.validate()?;
            let report = run_suites(&config)?;
            let rendered = serde_json::to_string_pretty(&report)
                .map_err(|e| format!("cannot serialize report: {e}"))?;
            write_or_print(&out, &rendered)?;
            eprint!("{}", report.render_text());
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_FAILURE))
            }
        }
        Command::Generate {
            config_file,
            out,
            seed,
        } => {
            let mut config: VerificationConfig = read_json(&config_file, "config")?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            config.validate()?;
            let corpus = build_corpus(&config)?;
            fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;
            let mut count = 0usize;
            for instance in &corpus.spectral {
                let spec = MeasureSpec::from_measure(&instance.measure);
                let path = out.join(format!("{}.json", instance.id));
                let text = serde_json::to_string_pretty(&spec)
                    .map_err(|e| format!("cannot serialize spec: {e}"))?;
                fs::write(&path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                count += 1;
            }
            println!("wrote {count} measure specs to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report {
            report_file,
            format,
        } => {
            let report: VerificationReport = read_json(&report_file, "report")?;
            match format {
                ReportFormat::Text => print!("{}", report.render_text()),
                ReportFormat::Json => {
                    let rendered = serde_json::to_string_pretty(&report)
                        .map_err(|e| format!("cannot serialize report: {e}"))?;
                    println!("{rendered}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
