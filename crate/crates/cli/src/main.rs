use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use pkernel_cli::run::EXIT_INPUT;
use pkernel_cli::{error_report, exit_code, parse_job, run_job, text, Format};

/// Annihilators of differential forms and kernels of function field
/// extensions of p-forms, from a JSON job file.
#[derive(Parser, Debug)]
#[command(name = "pkernel", version)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "stdin"])))]
#[command(group(ArgGroup::new("fmt").args(["json", "text"])))]
struct Args {
    /// Read the job from this file.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Read the job from standard input.
    #[arg(long)]
    stdin: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Overrides the job's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the job's sampling budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Cross-validate closed forms against the brute-force solver.
    #[arg(long)]
    check: bool,
}

fn emit(v: &serde_json::Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("reports serialize")),
        Format::Text => print!("{}", text::render(v)),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flag_format = if args.text {
        Some(Format::Text)
    } else if args.json {
        Some(Format::Json)
    } else {
        None
    };
    let src = match &args.input {
        Some(path) => std::fs::read_to_string(path),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => {
            eprintln!("pkernel: cannot read job: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let mut job = match parse_job(&src) {
        Ok(job) => job,
        Err(e) => {
            emit(&error_report(&e), flag_format.unwrap_or_default());
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    job.seed = args.seed.or(job.seed);
    job.budget = args.budget.or(job.budget);
    job.check |= args.check;
    let format = flag_format.or(job.format).unwrap_or_default();
    match run_job(&job) {
        Ok(outcome) => {
            emit(&outcome.report, format);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            emit(&error_report(&e), format);
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
