use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monoqd_cli::{
    dump_operator, export_dot, load_spec, run_analyze, run_compare, run_corpus, CliResult, Failure,
    Options,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "monoqd",
    version,
    about = "Invariants and equivalences of monomial ideals"
)]
struct Cli {
    /// Fock truncation depth L.
    #[arg(long, global = true, default_value_t = 6)]
    fock_depth: usize,
    /// Exploration bound for pattern ideals (0 disables bounded exploration).
    #[arg(long, global = true, default_value_t = 8)]
    bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one ideal spec.
    Analyze { spec: PathBuf },
    /// Equivalence verdicts and witnesses for two ideal specs.
    Compare { first: PathBuf, second: PathBuf },
    /// Write the graph of the quantised dynamics as DOT.
    ExportDot {
        spec: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print T_word on the Fock truncation in coordinate text form.
    DumpOperator { spec: PathBuf, word: String },
    /// Run the cross-checks over the standard ideal corpus.
    Corpus {
        #[arg(long, default_value_t = 200)]
        d3_samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn render<T: Serialize>(value: &T, text: impl FnOnce(&T) -> String, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    let opts = Options {
        fock_depth: cli.fock_depth,
        bound: cli.bound,
    };
    match cli.command {
        Command::Analyze { spec } => {
            let r = run_analyze(&load_spec(&spec)?, opts)?;
            Ok(render(&r, |r| r.to_text(), cli.format))
        }
        Command::Compare { first, second } => {
            let r = run_compare(&load_spec(&first)?, &load_spec(&second)?, opts)?;
            Ok(render(&r, |r| r.to_text(), cli.format))
        }
        Command::ExportDot { spec, out } => {
            let dot = export_dot(&load_spec(&spec)?, opts)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, dot)
                        .map_err(|e| Failure::Unsupported(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(dot),
            }
        }
        Command::DumpOperator { spec, word } => dump_operator(&load_spec(&spec)?, &word, opts),
        Command::Corpus { d3_samples, seed } => {
            let r = run_corpus(d3_samples, seed)?;
            let out = render(&r, |r| r.to_text(), cli.format);
            if r.violations.is_empty() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Internal(format!(
                    "{} corpus violations",
                    r.violations.len()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("monoqd: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
