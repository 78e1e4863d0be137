//! Brute-force language comparison of two acceptors.
//!
//! Words are checked exhaustively in length-lexicographic order up to a
//! bound, then on seeded random samples. Work is spread over a rayon pool
//! capped by `CRASPKIT_THREADS`; the reported counterexample is always the
//! first one in checking order, whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{accepts as formula_accepts, symbols as formula_symbols, Formula, FormulaError};
use crate::languages::{dyck_member, Dfa};
use crate::maj2::{accepts_end as maj2_accepts, maj2_symbols, Maj2Error, Maj2Formula};
use crate::transformer::{ModelError, Transformer};

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("formula: {0}")]
    Formula(#[from] FormulaError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("maj2: {0}")]
    Maj2(#[from] Maj2Error),
    #[error("acceptor {name} does not cover symbol `{symbol}`")]
    Alphabet { name: &'static str, symbol: char },
    #[error("thread pool: {0}")]
    Pool(String),
}

const DYCK: [char; 2] = ['(', ')'];

/// Anything that accepts or rejects nonempty words.
#[derive(Debug, Clone)]
pub enum Acceptor {
    Formula(Formula),
    Dfa(Dfa),
    /// Words are fed with BOS prepended.
    Model(Transformer),
    Maj2(Maj2Formula),
    /// Balanced parentheses over `(` and `)`, by counter.
    Dyck,
}

impl Acceptor {
    pub fn accepts(&self, w: &[char]) -> Result<bool, EquivError> {
        Ok(match self {
            Acceptor::Formula(f) => formula_accepts(f, w)?,
            Acceptor::Dfa(d) => match d.accepts(w) {
                Some(b) => b,
                None => {
                    let c = w.iter().copied().find(|c| !d.alphabet.contains(c)).unwrap_or('?');
                    return Err(EquivError::Alphabet { name: "dfa", symbol: c });
                }
            },
            Acceptor::Model(t) => t.accepts_word(w)?,
            Acceptor::Maj2(f) => maj2_accepts(f, w)?,
            Acceptor::Dyck => match w.iter().find(|c| !DYCK.contains(c)) {
                Some(&c) => return Err(EquivError::Alphabet { name: "dyck", symbol: c }),
                None => dyck_member(w),
            },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Acceptor::Formula(_) => "formula",
            Acceptor::Dfa(_) => "dfa",
            Acceptor::Model(_) => "model",
            Acceptor::Maj2(_) => "maj2",
            Acceptor::Dyck => "dyck",
        }
    }

    /// Symbols the acceptor mentions: the alphabet of a DFA or model, or
    /// the symbols occurring in a formula.
    pub fn symbols(&self) -> Vec<char> {
        match self {
            Acceptor::Formula(f) => formula_symbols(f),
            Acceptor::Maj2(f) => maj2_symbols(f),
            _ => self.reads().map(|r| r.to_vec()).unwrap_or_default(),
        }
    }

    /// Symbols the acceptor can read, if it is picky about them.
    pub fn reads(&self) -> Option<&[char]> {
        match self {
            Acceptor::Dfa(d) => Some(&d.alphabet),
            Acceptor::Model(t) => Some(&t.alphabet),
            Acceptor::Dyck => Some(&DYCK),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EquivConfig {
    pub max_exhaustive_len: usize,
    pub random_samples: usize,
    pub max_random_len: usize,
    pub seed: u64,
}

impl Default for EquivConfig {
    fn default() -> Self {
        EquivConfig {
            max_exhaustive_len: 8,
            random_samples: 0,
            max_random_len: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub word: String,
    pub a: bool,
    pub b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivReport {
    pub equivalent: bool,
    pub exhaustive_words: usize,
    pub random_words: usize,
    pub counterexample: Option<Counterexample>,
}

/// The `index`-th nonempty word in length-lexicographic order.
fn word_at(symbols: &[char], mut index: u128) -> Vec<char> {
    let k = symbols.len() as u128;
    let mut len = 1u32;
    let mut block = k;
    while index >= block {
        index -= block;
        len += 1;
        block *= k;
    }
    let mut w = vec![symbols[0]; len as usize];
    for slot in w.iter_mut().rev() {
        *slot = symbols[(index % k) as usize];
        index /= k;
    }
    w
}

/// Number of nonempty words of length at most `n`.
pub fn count_words(k: usize, n: usize) -> u128 {
    (1..=n as u32).map(|l| (k as u128).pow(l)).sum()
}

/// Every nonempty word of length at most `n`, shortest first.
pub fn words_up_to(symbols: &[char], n: usize) -> Vec<Vec<char>> {
    (0..count_words(symbols.len(), n)).map(|i| word_at(symbols, i)).collect()
}

/// Seeded random words with lengths uniform in `1..=max_len`.
pub fn random_words(symbols: &[char], count: usize, max_len: usize, seed: u64) -> Vec<Vec<char>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_len.max(1));
            (0..n).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect()
        })
        .collect()
}

/// Worker count from `CRASPKIT_THREADS`, if set to a positive number.
pub fn thread_cap() -> Option<usize> {
    std::env::var("CRASPKIT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

fn first_disagreement(
    a: &Acceptor,
    b: &Acceptor,
    words: &[Vec<char>],
) -> Result<Option<Counterexample>, EquivError> {
    let found = words
        .par_iter()
        .map(|w| -> Result<Option<Counterexample>, EquivError> {
            let x = a.accepts(w)?;
            let y = b.accepts(w)?;
            Ok((x != y).then(|| Counterexample {
                word: w.iter().collect(),
                a: x,
                b: y,
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    found.unwrap_or(Ok(None))
}

pub fn check_equiv(
    a: &Acceptor,
    b: &Acceptor,
    alphabet: &[char],
    cfg: &EquivConfig,
) -> Result<EquivReport, EquivError> {
    for acc in [a, b] {
        if let Some(reads) = acc.reads() {
            if let Some(&c) = alphabet.iter().find(|c| !reads.contains(c)) {
                return Err(EquivError::Alphabet {
                    name: acc.name(),
                    symbol: c,
                });
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| EquivError::Pool(e.to_string()))?;
    pool.install(|| {
        let mut report = EquivReport {
            equivalent: true,
            exhaustive_words: 0,
            random_words: 0,
            counterexample: None,
        };
        // in chunks, so a short counterexample is found without visiting everything
        let total = count_words(alphabet.len(), cfg.max_exhaustive_len);
        let chunk = 1u128 << 14;
        let mut start = 0u128;
        while start < total {
            let end = (start + chunk).min(total);
            let ws: Vec<Vec<char>> = (start..end).map(|i| word_at(alphabet, i)).collect();
            if let Some(ce) = first_disagreement(a, b, &ws)? {
                report.exhaustive_words += ws
                    .iter()
                    .position(|w| w.iter().collect::<String>() == ce.word)
                    .map_or(ws.len(), |p| p + 1);
                report.equivalent = false;
                report.counterexample = Some(ce);
                return Ok(report);
            }
            report.exhaustive_words += ws.len();
            start = end;
        }
        let ws = random_words(alphabet, cfg.random_samples, cfg.max_random_len, cfg.seed);
        if let Some(ce) = first_disagreement(a, b, &ws)? {
            report.random_words = ws
                .iter()
                .position(|w| w.iter().collect::<String>() == ce.word)
                .map_or(ws.len(), |p| p + 1);
            report.equivalent = false;
            report.counterexample = Some(ce);
            return Ok(report);
        }
        report.random_words = ws.len();
        Ok(report)
    })
}
