use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use maslov::io::{exit_code, parse_job, run_job, Format, JobSpec};
use maslov::Error;

/// Run a Maslov-index job described by a JSON document.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    /// Job document, or `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    /// Overrides the job's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the structural tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides the report format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides steps per period for monodromy jobs.
    #[arg(long)]
    steps: Option<usize>,
}

fn load(args: &Args) -> Result<JobSpec, Error> {
    let mut text = String::new();
    let read = if args.input.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(&args.input).map(|t| text = t)
    };
    read.map_err(|e| Error::InvalidInput(format!("{}: {e}", args.input.display())))?;
    let mut job = parse_job(&text)?;
    if let Some(seed) = args.seed {
        job.seed = seed;
    }
    if let Some(tol) = args.tol {
        job.tolerances.structural = tol;
    }
    if let Some(format) = args.format {
        job.format = format;
    }
    if args.steps.is_some() {
        job.steps_per_period = args.steps;
    }
    Ok(job)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let job = match load(&args) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = run_job(&job);
    match &outcome {
        Ok(report) => match job.format {
            Format::Json => println!("{}", report.to_json()),
            Format::Text => print!("{}", report.to_text()),
        },
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&outcome) as u8)
}
