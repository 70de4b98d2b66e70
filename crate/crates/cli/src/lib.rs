//! Command-line front end: argument parsing, dispatch and report output.

pub mod commands;
pub mod error;
pub mod paper_report;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use dessins_core::covering::ActionCase;
use dessins_core::curves::RELATION_TOLERANCE;

use crate::commands::GenusMode;
use crate::error::CliError;
use crate::paper_report::{PaperReportOptions, DEFAULT_TRIALS};
use crate::report::{Envelope, Report};

#[derive(Debug, Parser)]
#[command(
    name = "dessins",
    version,
    about = "Dicyclic group actions on Riemann surfaces"
)]
pub struct Cli {
    /// Write the JSON envelope here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CaseArg {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
}

impl From<CaseArg> for ActionCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::One => ActionCase::I,
            CaseArg::Two => ActionCase::II,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Strong,
    Pure,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generating pairs of G_n grouped by signature.
    Census {
        #[arg(long)]
        n: u32,
    },
    /// Permutation representation and dessin of a triangular action.
    Monodromy {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "I")]
        case: CaseArg,
        /// Write the underlying graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Fixed points, quotients and free elements of the triangular actions.
    Actions {
        #[arg(long)]
        n: u32,
    },
    /// Exponent triples of the cyclic plane models.
    Classify {
        #[arg(long)]
        n: u32,
    },
    /// Least genus with a real structure among anticonformal actions.
    Hyper {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        gamma_max: u32,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
    },
    /// Pseudo-real surfaces with an anticonformal G_n action.
    PseudoReal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u32,
    },
    /// Numerical checks of the algebraic curve models.
    Curves {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = RELATION_TOLERANCE)]
        tol: f64,
    },
    /// Strong or pure symmetric genus by signature search.
    Genus {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "strong")]
        mode: ModeArg,
        /// Largest genus to try; defaults to 2n + 2.
        #[arg(long)]
        g_max: Option<u64>,
    },
    /// Every check over a range of n, written to a directory.
    PaperReport {
        /// Inclusive range such as 2..8.
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Largest n for the genus searches.
        #[arg(long, default_value_t = 5)]
        genus_n_max: u32,
    },
}

/// Runs a parsed command.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Census { n } => commands::census(*n),
        Command::Monodromy { n, case, dot } => {
            commands::monodromy(*n, (*case).into(), dot.as_deref())
        }
        Command::Actions { n } => commands::actions(*n),
        Command::Classify { n } => commands::classify(*n),
        Command::Hyper {
            n,
            gamma_max,
            r_max,
        } => commands::hyper(*n, *gamma_max, *r_max),
        Command::PseudoReal { n, q } => commands::pseudo_real(*n, *q),
        Command::Curves {
            n,
            model,
            seed,
            trials,
            tol,
        } => commands::curves(*n, commands::parse_model(model)?, *seed, *trials, *tol),
        Command::Genus { n, mode, g_max } => {
            let mode = match mode {
                ModeArg::Strong => GenusMode::Strong,
                ModeArg::Pure => GenusMode::Pure,
            };
            commands::genus(*n, mode, g_max.unwrap_or(2 * *n as u64 + 2))
        }
        Command::PaperReport {
            n_range,
            out,
            seed,
            trials,
            genus_n_max,
        } => {
            let range = paper_report::parse_range(n_range)?;
            let opts = PaperReportOptions {
                seed: *seed,
                genus_n_max: *genus_n_max,
                trials: *trials,
            };
            paper_report::run(range, out, &opts)
        }
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let envelope = Envelope {
        ms: start.elapsed().as_millis() as u64,
        report,
    };
    let code = if envelope.report.passed() { 0 } else { 1 };
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, envelope.to_json()) {
                eprintln!("error: {e}");
                return 1;
            }
            let r = &envelope.report;
            println!(
                "{}: {} claims, {} failed, {} ms",
                r.command,
                r.claims.len(),
                r.failures().len(),
                envelope.ms
            );
        }
        None => print!("{}", envelope.to_json()),
    }
    for c in envelope.report.failures() {
        eprintln!("FAIL {}: {}", c.id, c.anchor);
    }
    code
}
