//! `--a`/`--b` specs for check-equiv.

use std::path::Path;

use craspkit::equiv::Acceptor;
use craspkit::formula::Alphabet;
use craspkit::languages::altplus_dfa;
use craspkit::maj2::{parse_maj2, parse_maj2_any};
use craspkit::transformer::Transformer;

use crate::error::{CliError, Result};
use crate::{read_file, read_formula};

pub fn load(arg: &str, alphabet: Option<&Alphabet>) -> Result<Acceptor> {
    let bad = || {
        CliError::Usage(format!(
            "bad acceptor `{arg}`; expected formula:FILE, dfa:altplus:K, dfa:altplus-neutral:K, dfa:dyck, model:FILE or maj2:FILE"
        ))
    };
    let (kind, rest) = arg.split_once(':').ok_or_else(bad)?;
    Ok(match kind {
        "formula" => Acceptor::Formula(read_formula(Path::new(rest), alphabet)?),
        "maj2" => {
            let text = read_file(Path::new(rest))?;
            let f = match alphabet {
                Some(a) => parse_maj2(&text, a)?,
                None => parse_maj2_any(&text)?,
            };
            Acceptor::Maj2(f)
        }
        "model" => Acceptor::Model(Transformer::load(Path::new(rest))?),
        "dfa" => match rest.split_once(':') {
            Some(("altplus", k)) => Acceptor::Dfa(altplus_dfa(parse_k(k)?, false)),
            Some(("altplus-neutral", k)) => Acceptor::Dfa(altplus_dfa(parse_k(k)?, true)),
            None if rest == "dyck" => Acceptor::Dyck,
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    })
}

fn parse_k(text: &str) -> Result<usize> {
    match text.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(CliError::Usage(format!("`{text}` is not a positive integer"))),
    }
}
