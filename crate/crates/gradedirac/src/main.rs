use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradedirac::{parser, run, DslError, Mode, Options};

#[derive(Parser)]
#[command(
    name = "gradedirac",
    version,
    about = "Checks graded Dirac and graded Poisson structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every directive in FILE.
    Check(RunArgs),
    /// Run only the `compute` directives in FILE.
    Compute(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Default coefficient-degree bound for polynomial searches.
    #[arg(long)]
    bound: Option<u32>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
}

const EXIT_PARSE: u8 = 64;

fn diagnostic(file: &std::path::Path, e: &DslError) -> String {
    let kind = if e.is_parse_error() {
        "error"
    } else {
        "runtime error"
    };
    format!("{}:{e} ({kind})", file.display())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Check(a) => (Mode::Check, a),
        Command::Compute(a) => (Mode::Compute, a),
    };
    let src = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", args.file.display());
            return ExitCode::from(1);
        }
    };
    let doc = match parser::parse(&src) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{}", diagnostic(&args.file, &e));
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let opts = Options {
        seed: args.seed,
        cases: args.cases,
        bound: args.bound,
        timing: args.timing,
        mode,
    };
    match run(&doc, &opts) {
        Ok(report) => {
            let out = match args.format {
                Format::Text => report.to_text(),
                Format::Structured => report.to_json() + "\n",
            };
            // a closed pipe is not an error of the run
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", diagnostic(&args.file, &e));
            ExitCode::from(1)
        }
    }
}
