//! `craspkit`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 counterexample
//! (check-equiv only).

mod acceptor;
mod commands;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use craspkit::formula::{parse, parse_any, Alphabet, Formula, BOS};

use error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "craspkit", version, about = "Counting temporal logic and exact fixed-precision transformers")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Symbols of the input alphabet, e.g. `ab` or `()`. Defaults to the
    /// symbols the inputs mention.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    #[command(subcommand)]
    command: Command,
}

/// A formula given as a file or inline.
#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["formula", "text"])))]
struct FormulaSource {
    /// File holding the formula.
    #[arg(long)]
    formula: Option<PathBuf>,
    /// The formula itself.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse {
        #[command(flatten)]
        src: FormulaSource,
    },
    /// Evaluate a formula on a word.
    Eval {
        #[command(flatten)]
        src: FormulaSource,
        #[arg(long)]
        word: String,
        /// 1-based position; defaults to the last.
        #[arg(long)]
        position: Option<usize>,
        /// Also print the truth value at every position.
        #[arg(long)]
        trace: bool,
    },
    /// Print the counting depth of a formula.
    Depth {
        #[command(flatten)]
        src: FormulaSource,
    },
    /// Rewrite a formula into a normal form.
    #[command(group(ArgGroup::new("form").required(true).args(["ynf", "desugar", "minimal", "neutral_e"])))]
    Normalize {
        #[command(flatten)]
        src: FormulaSource,
        /// Push every Y down to the letters.
        #[arg(long)]
        ynf: bool,
        /// Remove every derived operator.
        #[arg(long)]
        desugar: bool,
        /// Comparisons of the form `sum < sum` with unit coefficients.
        #[arg(long)]
        minimal: bool,
        /// Remove Y, MOD and the given neutral letter.
        #[arg(long, value_name = "SYM")]
        neutral_e: Option<char>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a transformer that accepts BOS·w iff the formula accepts w.
    Compile {
        #[arg(long)]
        formula: PathBuf,
        /// Fixed-point precision as `P,S`.
        #[arg(long, value_parser = parse_precision)]
        precision: (u32, u32),
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract an equivalent formula from a small transformer.
    Decompile {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a transformer on a word.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        /// The word; a leading `^` is the BOS symbol and is added if missing.
        #[arg(long)]
        word: String,
        /// Dump every activation.
        #[arg(long)]
        trace: bool,
    },
    /// Translate between counting formulas and two-variable majority logic.
    Translate {
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// With `--to maj2`, wrap the result into a closed sentence that
        /// reads the last position.
        #[arg(long)]
        closed: bool,
    },
    /// Sample next-token prediction data for a block language.
    GenData {
        #[arg(long)]
        k: usize,
        /// Inclusive length range `LO:HI`.
        #[arg(long, value_parser = parse_bin)]
        bin: (usize, usize),
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print one of the built-in language formulas.
    Langs {
        /// `altplus:K`, `jexpr:SYMS`, `dyck` or `prediction:K`.
        #[arg(long)]
        emit: String,
        /// For `jexpr`, use the two-sided construction.
        #[arg(long)]
        bidirectional: bool,
    },
    /// Compare two acceptors on every short word and on random words.
    CheckEquiv {
        /// `formula:FILE`, `dfa:altplus:K`, `dfa:altplus-neutral:K`,
        /// `dfa:dyck`, `model:FILE` or `maj2:FILE`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        max_random_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Maj2,
    Tl,
}

fn parse_precision(s: &str) -> std::result::Result<(u32, u32), String> {
    let (p, q) = s.split_once(',').ok_or("expected P,S")?;
    let p = p.trim().parse::<u32>().map_err(|e| e.to_string())?;
    let q = q.trim().parse::<u32>().map_err(|e| e.to_string())?;
    Ok((p, q))
}

fn parse_bin(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty bin {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

pub(crate) fn parse_formula(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula> {
    Ok(match alphabet {
        Some(a) => parse(text, a)?,
        None => parse_any(text)?,
    })
}

pub(crate) fn read_formula(path: &Path, alphabet: Option<&Alphabet>) -> Result<Formula> {
    parse_formula(&read_file(path)?, alphabet)
}

/// A word from the command line; BOS is not allowed here.
pub(crate) fn word_arg(w: &str) -> Result<Vec<char>> {
    if w.contains(BOS) {
        return Err(CliError::Usage(format!("`{BOS}` is only accepted by simulate")));
    }
    Ok(w.chars().collect())
}

/// Text or JSON, depending on `--json`.
pub(crate) struct Out {
    json: bool,
}

impl Out {
    pub fn emit(&self, text: impl FnOnce() -> String, value: serde_json::Value) {
        if self.json {
            println!("{value}");
        } else {
            println!("{}", text());
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let alphabet = cli
        .alphabet
        .as_deref()
        .map(Alphabet::parse)
        .transpose()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let out = Out { json: cli.json };
    commands::dispatch(cli.command, alphabet.as_ref(), &out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Counterexample) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
