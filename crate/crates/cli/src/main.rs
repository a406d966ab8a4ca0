use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nfspectral::RingSpec;
use nfspectral_cli::{parse_job_with, run_job, CliError, Command, Overrides, DEFAULT_S_MAX};

#[derive(Parser)]
#[command(name = "nfspectral", version, about = "Unique normal forms of planar vector fields in exact arithmetic")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Job file in JSON; read from stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Truncation degree N.
    #[arg(long, global = true)]
    degree: Option<i32>,
    /// Coefficient ring: Q or Ql:K.
    #[arg(long, global = true, value_parser = parse_ring)]
    ring: Option<RingSpec>,
    /// Number of m-adic refinement levels for classify.
    #[arg(long, global = true)]
    madic_levels: Option<usize>,
    /// Rescale so that the leading unit coefficient is 1.
    #[arg(long, global = true)]
    scale_leading: bool,
    /// Cross-check against the monomial oracle.
    #[arg(long, global = true)]
    oracle_check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the unique normal form.
    Normalize,
    /// Classify an anharmonic oscillator.
    Classify,
    /// Dump the state of page r.
    Page { r: i32 },
    /// Run the structure-constant and Jacobi checks.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_S_MAX)]
        s_max: i32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_ring(s: &str) -> Result<RingSpec, String> {
    s.parse().map_err(|e: nfspectral::coeff::RingError| e.to_string())
}

const EXIT_COMPUTATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ORACLE: u8 = 3;

fn read_input(args: &Args) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError { code: "io".into(), message: e.to_string(), input_error: true };
    match (&args.input, &args.command) {
        (Some(path), _) => {
            std::fs::read_to_string(path).map_err(|e| CliError { message: format!("{}: {e}", path.display()), ..io(e) })
        }
        (None, Cmd::Selftest { .. }) => Ok(String::new()),
        (None, _) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io)?;
            Ok(s)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match &args.command {
        Cmd::Normalize => Command::Normalize,
        Cmd::Classify => Command::Classify,
        Cmd::Page { r } => Command::Page(*r),
        Cmd::Selftest { s_max } => Command::Selftest { s_max: *s_max },
    };
    let overrides = Overrides {
        ring: args.ring,
        truncation: args.degree,
        command: Some(command),
        scale_leading: args.scale_leading,
        madic_levels: args.madic_levels,
        oracle_check: args.oracle_check,
    };
    let result = read_input(&args).and_then(|text| parse_job_with(&text, &overrides)).and_then(|job| run_job(&job));
    match result {
        Ok(report) => {
            match args.format {
                Format::Json => emit(&format!("{}\n", report.json())),
                Format::Text => emit(&report.text),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ORACLE)
            }
        }
        Err(e) => {
            match args.format {
                Format::Json => {
                    emit(&format!("{}\n", serde_json::to_string_pretty(&e.to_json()).expect("error serializes")))
                }
                Format::Text => eprintln!("error [{}]: {}", e.code, e.message),
            }
            ExitCode::from(if e.input_error { EXIT_INPUT } else { EXIT_COMPUTATION })
        }
    }
}
