use craspkit::compiler::{compile, decompile};
use craspkit::equiv::{check_equiv, EquivConfig};
use craspkit::fixedpoint::Precision;
use craspkit::formula::{
    depth, eval_positions, features, print, printed_len, symbols, Alphabet, Dialect, Formula, FormulaError, BOS,
};
use craspkit::languages::{
    altplus_formula, dyck_formula, jexpr_formula, jexpr_formula_bidirectional, prediction_formula, sample_dataset,
    write_jsonl,
};
use craspkit::maj2::{depth_maj2, end_wrapper, maj2_to_tl, parse_maj2, parse_maj2_any, print_maj2, tl_to_maj2};
use craspkit::transformer::{forward_with, Activations, ForwardOptions, Matrix, Transformer};
use craspkit::transforms::{desugar, neutral_letter_reduce, normalize_to_minimal_basis, y_normal_form};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::{acceptor, parse_formula, read_file, read_formula, word_arg, write_file, Command, FormulaSource, Out, Target};

/// Decompiled formulas longer than this are refused rather than printed.
const MAX_PRINTED: u128 = 64 << 20;

pub fn dispatch(cmd: Command, alphabet: Option<&Alphabet>, out: &Out) -> Result<()> {
    match cmd {
        Command::Parse { src } => {
            let f = source(&src, alphabet)?;
            let text = print(&f);
            out.emit(
                || text.clone(),
                json!({"formula": text, "depth": depth(&f), "dialect": dialect(&f)}),
            );
        }
        Command::Eval {
            src,
            word,
            position,
            trace,
        } => {
            let f = source(&src, alphabet)?;
            let w = word_arg(&word)?;
            if let Some(a) = alphabet {
                a.check_word(&w)?;
            }
            let pos = eval_positions(&f, &w)?;
            let i = position.unwrap_or(w.len());
            if i == 0 || i > w.len() {
                return Err(FormulaError::PositionOutOfRange { i, n: w.len() }.into());
            }
            let v = pos[i - 1];
            out.emit(
                || {
                    if trace {
                        let row: String = pos.iter().map(|b| if *b { 'T' } else { 'F' }).collect();
                        format!("{v}\n{row}")
                    } else {
                        v.to_string()
                    }
                },
                json!({"word": word, "position": i, "value": v, "positions": pos}),
            );
        }
        Command::Depth { src } => {
            let f = source(&src, alphabet)?;
            let d = depth(&f);
            out.emit(|| d.to_string(), json!({ "depth": d }));
        }
        Command::Normalize {
            src,
            ynf,
            desugar: ds,
            minimal,
            neutral_e,
            out: dest,
        } => {
            let f = source(&src, alphabet)?;
            let need_alphabet = || {
                alphabet.ok_or_else(|| CliError::Usage("--ynf and --neutral-e need --alphabet".into()))
            };
            let (g, padding) = if ynf {
                (y_normal_form(&f, need_alphabet()?)?, None)
            } else if ds {
                (desugar(&f), None)
            } else if minimal {
                (normalize_to_minimal_basis(&f), None)
            } else {
                let e = neutral_e.expect("one form is required");
                let r = neutral_letter_reduce(&f, e, need_alphabet()?)?;
                (r.reduced, Some(r.padding))
            };
            let text = print(&g);
            if let Some(p) = &dest {
                write_file(p, &(text.clone() + "\n"))?;
            }
            let mut v = json!({"formula": text, "depth": depth(&g)});
            if let Some(x) = padding {
                v["padding"] = json!(x);
            }
            out.emit(
                || match (&dest, padding) {
                    (Some(p), Some(x)) => format!("wrote {} (padding {x})", p.display()),
                    (Some(p), None) => format!("wrote {}", p.display()),
                    (None, Some(x)) => format!("{text}\npadding {x}"),
                    (None, None) => text.clone(),
                },
                v,
            );
        }
        Command::Compile {
            formula,
            precision: (p, s),
            out: dest,
        } => {
            let f = read_formula(&formula, alphabet)?;
            let alpha = match alphabet {
                Some(a) => a.clone(),
                None => Alphabet::new(symbols(&f))
                    .map_err(|_| CliError::Usage("the formula mentions no symbols; pass --alphabet".into()))?,
            };
            let prec = Precision::new(p, s)?;
            let t = compile(&f, &alpha, prec)?;
            t.save(&dest)?;
            out.emit(
                || {
                    format!(
                        "wrote {}: {} layers, width {}, precision {prec}",
                        dest.display(),
                        t.depth(),
                        t.d
                    )
                },
                json!({"out": dest, "layers": t.depth(), "d": t.d, "precision": {"p": p, "s": s}}),
            );
        }
        Command::Decompile { model, out: dest } => {
            let t = Transformer::load(&model)?;
            let f = decompile(&t)?;
            let len = printed_len(&f);
            if len > MAX_PRINTED {
                return Err(CliError::Domain(format!(
                    "decompiled formula would print to about {len} characters; refusing to write it"
                )));
            }
            let text = print(&f);
            write_file(&dest, &(text.clone() + "\n"))?;
            let d = depth(&f);
            out.emit(
                || format!("wrote {}: depth {d}, {} characters", dest.display(), text.len()),
                json!({"out": dest, "depth": d, "length": text.chars().count()}),
            );
        }
        Command::Simulate { model, word, trace } => {
            let t = Transformer::load(&model)?;
            let mut w: Vec<char> = word.chars().collect();
            if w.first() != Some(&t.bos) {
                w.insert(0, t.bos);
            }
            let (acts, score) = forward_with(&t, &w, ForwardOptions { record_scores: trace })?;
            let accepted = score.sig() > 0;
            let mut v = json!({"score": score.to_decimal_string(), "accepted": accepted});
            if trace {
                v["trace"] = trace_json(&acts);
            }
            out.emit(
                || {
                    let mut s = format!("score {score}\naccepted {accepted}");
                    if trace {
                        s.push('\n');
                        s.push_str(&trace_text(&acts, &w));
                    }
                    s
                },
                v,
            );
        }
        Command::Translate {
            to,
            input,
            out: dest,
            closed,
        } => {
            let text = read_file(&input)?;
            let (written, d) = match to {
                Target::Maj2 => {
                    let f = parse_formula(&text, alphabet)?;
                    let mut m = tl_to_maj2(&f)?;
                    if closed {
                        m = end_wrapper(&m);
                    }
                    (print_maj2(&m), depth_maj2(&m))
                }
                Target::Tl => {
                    if closed {
                        return Err(CliError::Usage("--closed only applies to --to maj2".into()));
                    }
                    let m = match alphabet {
                        Some(a) => parse_maj2(&text, a)?,
                        None => parse_maj2_any(&text)?,
                    };
                    let f = maj2_to_tl(&m)?;
                    (print(&f), depth(&f))
                }
            };
            write_file(&dest, &(written + "\n"))?;
            out.emit(
                || format!("wrote {}: depth {d}", dest.display()),
                json!({"out": dest, "depth": d}),
            );
        }
        Command::GenData {
            k,
            bin: (lo, hi),
            count,
            seed,
            out: dest,
        } => {
            let records = sample_dataset(k, lo, hi, count, seed)?;
            let mut buf = Vec::new();
            write_jsonl(&records, &mut buf)?;
            std::fs::write(&dest, buf).map_err(|e| CliError::Domain(format!("{}: {e}", dest.display())))?;
            out.emit(
                || format!("wrote {} records to {}", records.len(), dest.display()),
                json!({"out": dest, "count": records.len(), "k": k, "bin": [lo, hi], "seed": seed}),
            );
        }
        Command::Langs { emit, bidirectional } => {
            let f = language(&emit, bidirectional)?;
            let text = print(&f);
            out.emit(|| text.clone(), json!({"formula": text, "depth": depth(&f)}));
        }
        Command::CheckEquiv {
            a,
            b,
            max_len,
            samples,
            max_random_len,
            seed,
        } => {
            let x = acceptor::load(&a, alphabet)?;
            let y = acceptor::load(&b, alphabet)?;
            let symbols: Vec<char> = match alphabet {
                Some(al) => al.symbols().to_vec(),
                None => {
                    let mut s = x.symbols();
                    for c in y.symbols() {
                        if !s.contains(&c) {
                            s.push(c);
                        }
                    }
                    s
                }
            };
            if symbols.is_empty() {
                return Err(CliError::Usage("no symbols to enumerate; pass --alphabet".into()));
            }
            let cfg = EquivConfig {
                max_exhaustive_len: max_len,
                random_samples: samples,
                max_random_len,
                seed,
            };
            let r = check_equiv(&x, &y, &symbols, &cfg)?;
            let ce = r.counterexample.as_ref().map(|c| json!({"word": c.word, "a": c.a, "b": c.b}));
            out.emit(
                || match &r.counterexample {
                    None => format!(
                        "equivalent ({} exhaustive, {} random words)",
                        r.exhaustive_words, r.random_words
                    ),
                    Some(c) => format!("counterexample `{}`: a = {}, b = {}", c.word, c.a, c.b),
                },
                json!({
                    "equivalent": r.equivalent,
                    "alphabet": symbols.iter().collect::<String>(),
                    "exhaustive_words": r.exhaustive_words,
                    "random_words": r.random_words,
                    "counterexample": ce,
                }),
            );
            if !r.equivalent {
                return Err(CliError::Counterexample);
            }
        }
    }
    Ok(())
}

fn source(src: &FormulaSource, alphabet: Option<&Alphabet>) -> Result<Formula> {
    match (&src.formula, &src.text) {
        (Some(p), _) => read_formula(p, alphabet),
        (None, Some(t)) => parse_formula(t, alphabet),
        (None, None) => Err(CliError::Usage("give --formula or --text".into())),
    }
}

fn dialect(f: &Formula) -> &'static str {
    let fe = features(f);
    if fe.fits(Dialect::Past) {
        "past"
    } else if fe.fits(Dialect::Bidirectional) {
        "bidirectional"
    } else if fe.fits(Dialect::PastPrevMod) {
        "past-prev-mod"
    } else {
        "full"
    }
}

fn language(name: &str, bidirectional: bool) -> Result<Formula> {
    let bad = || CliError::Usage(format!("bad language `{name}`; expected altplus:K, jexpr:SYMS, dyck or prediction:K"));
    let k = |t: &str| t.parse::<usize>().map_err(|_| bad());
    let ab = Alphabet::parse("ab").expect("valid");
    Ok(match name.split_once(':') {
        None if name == "dyck" => dyck_formula(),
        Some(("altplus", n)) => altplus_formula(k(n)?, &ab)?,
        Some(("prediction", n)) => prediction_formula(k(n)?)?,
        Some(("jexpr", syms)) => {
            let s: Vec<char> = syms.chars().collect();
            if s.contains(&BOS) {
                return Err(bad());
            }
            if bidirectional {
                jexpr_formula_bidirectional(&s)?
            } else {
                jexpr_formula(&s)?
            }
        }
        _ => return Err(bad()),
    })
}

fn rows(m: &Matrix) -> Vec<&[i64]> {
    (0..m.rows()).map(|r| m.row(r)).collect()
}

/// Every activation as significands.
fn trace_json(a: &Activations) -> Value {
    let layers: Vec<Value> = a
        .layers
        .iter()
        .map(|l| {
            json!({
                "q": rows(&l.q),
                "k": rows(&l.k),
                "v": rows(&l.v),
                "c": rows(&l.c),
                "h": rows(&l.h),
                "scores": l.scores,
            })
        })
        .collect();
    json!({"h0": rows(&a.h0), "layers": layers})
}

fn trace_text(a: &Activations, w: &[char]) -> String {
    let mut s = String::new();
    let line = |s: &mut String, name: &str, m: &Matrix| {
        for (i, r) in rows(m).iter().enumerate() {
            s.push_str(&format!("  {name}[{}] {} {:?}\n", i + 1, w[i], r));
        }
    };
    s.push_str("embedding\n");
    line(&mut s, "h", &a.h0);
    for (n, l) in a.layers.iter().enumerate() {
        s.push_str(&format!("layer {}\n", n + 1));
        line(&mut s, "q", &l.q);
        line(&mut s, "k", &l.k);
        line(&mut s, "v", &l.v);
        line(&mut s, "c", &l.c);
        line(&mut s, "h", &l.h);
    }
    s.pop();
    s
}
