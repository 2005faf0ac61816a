use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qtm_cli::commands::{self, CliError, Format, Outcome, EXIT_USAGE};
use qtm_cli::document::parse_machine;
use qtm_core::conditions::{Checker, DEFAULT_TOLERANCE};
use qtm_core::table::TransitionTable;

#[derive(Parser)]
#[command(name = "qtm", version, about = "Validate and simulate quantum Turing machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Check the unitarity conditions of a machine.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckerArg::Auto)]
        checker: CheckerArg,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Evolve an initial superposition and print the resulting terms.
    Run {
        path: PathBuf,
        /// Initial term, e.g. "state=0 heads=0 tape=blank amp=1,0". Repeat for superpositions.
        #[arg(long)]
        initial: Vec<String>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Skip table validation and the unit-norm check on the initial state.
        #[arg(long)]
        unchecked: bool,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Print K, the operator-norm bound and a power-iteration estimate (one tape).
    Norm {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the generated conditions for k tapes.
    Conditions { k: usize },
    /// Brute-force Gram check on a finite configuration window.
    Gram {
        path: PathBuf,
        /// Cells 1..=n may hold non-blank symbols.
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Heads range over 1-d..=n+d.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        extension: i8,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckerArg {
    Column,
    Row,
    Hirvensalo,
    TwoTape,
    Ktape,
    Auto,
}

impl From<CheckerArg> for Checker {
    fn from(c: CheckerArg) -> Self {
        match c {
            CheckerArg::Column => Checker::Column,
            CheckerArg::Row => Checker::Row,
            CheckerArg::Hirvensalo => Checker::Hirvensalo,
            CheckerArg::TwoTape => Checker::TwoTape,
            CheckerArg::Ktape => Checker::KTape,
            CheckerArg::Auto => Checker::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn load(path: &PathBuf) -> Result<TransitionTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_machine(&text)?)
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    match cli.command {
        Command::Validate {
            path,
            checker,
            tolerance,
        } => commands::validate(&load(&path)?, checker.into(), tolerance, format),
        Command::Run {
            path,
            initial,
            steps,
            unchecked,
            tolerance,
        } => commands::run_machine(&load(&path)?, &initial, steps, unchecked, tolerance, format),
        Command::Norm {
            path,
            radius,
            iterations,
            seed,
        } => commands::norm(&load(&path)?, radius, iterations, seed, format),
        Command::Conditions { k } => commands::conditions(k, format),
        Command::Gram {
            path,
            window,
            extension,
            tolerance,
        } => commands::gram(&load(&path)?, window, extension, tolerance, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
