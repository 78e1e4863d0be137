use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const DYCK: &str = "#<[Q(()] = #<[Q())] && #<[#<[Q(()] < #<[Q())]] = 0";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn craspkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_craspkit"))
        .args(args)
        .env("CRASPKIT_THREADS", "2")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let r = craspkit(args);
    assert_eq!(r.code, 0, "{args:?}\nstdout: {}\nstderr: {}", r.stdout, r.stderr);
    r.stdout.trim_end().to_string()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Run with `--json` and check the output against the shipped schema.
fn json(name: &str, args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let v: Value = serde_json::from_str(&ok(&all)).unwrap();
    let s = schema(name);
    let validator = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v}");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_prints_canonical_text() {
    assert_eq!(ok(&["parse", "--text", "#<[Q(a)]>=1"]), "#<[Q(a)] >= 1");
    let v = json("parse", &["parse", "--text", "#>[Q(a)] > 0 && Q(b)"]);
    assert_eq!(v["dialect"], "bidirectional");
    assert_eq!(v["depth"], 1);
    let r = craspkit(&["parse", "--text", "#<[Q(a] >= 1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("syntax error"));
    assert_eq!(craspkit(&["--alphabet", "ab", "parse", "--text", "Q(c)"]).code, 2);
}

#[test]
fn eval_and_depth_of_dyck() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dyck.tl", DYCK);
    assert_eq!(ok(&["eval", "--formula", s(&f), "--word", "(())()"]), "true");
    assert_eq!(ok(&["eval", "--formula", s(&f), "--word", "())()("]), "false");
    assert_eq!(ok(&["eval", "--formula", s(&f), "--word", "())()(", "--trace"]), "false\nFTFFFF");
    assert_eq!(ok(&["depth", "--formula", s(&f)]), "2");
    let v = json("eval", &["eval", "--formula", s(&f), "--word", "(())()", "--position", "4"]);
    assert_eq!(v["value"], true);
    assert_eq!(v["positions"].as_array().unwrap().len(), 6);
    json("depth", &["depth", "--formula", s(&f)]);
    assert_eq!(craspkit(&["eval", "--text", "Q(a)", "--word", ""]).code, 2);
    assert_eq!(craspkit(&["eval", "--text", "Q(a)", "--word", "ab", "--position", "3"]).code, 2);
    assert_eq!(craspkit(&["eval", "--text", "Q(a)", "--word", "^ab"]).code, 1);
}

#[test]
fn normalize_forms() {
    let y = ok(&["--alphabet", "ab", "normalize", "--text", "!Y(Q(a))", "--ynf"]);
    assert!(y.contains("Y("));
    let d = ok(&["normalize", "--text", "#[Q(a)] > 1", "--desugar"]);
    assert!(!d.contains("#["));
    let m = ok(&["normalize", "--text", "#<[Q(a)] >= 2 * #<[Q(b)]", "--minimal"]);
    assert!(m.contains('<'));
    let v = json(
        "normalize",
        &["--alphabet", "abe", "normalize", "--text", "Y(Q(a)) && MOD(2,0)", "--neutral-e", "e"],
    );
    assert_eq!(v["padding"], 4);
    assert!(!v["formula"].as_str().unwrap().contains("Y("));
    // the two flags that need an alphabet refuse to guess it
    assert_eq!(craspkit(&["normalize", "--text", "Y(Q(a))", "--ynf"]).code, 1);
    assert_eq!(craspkit(&["normalize", "--text", "Q(a)"]).code, 1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n.tl");
    ok(&["normalize", "--text", "#[Q(a)] > 1", "--desugar", "--out", s(&out)]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().trim_end(), d);
}

#[test]
fn compile_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "alt2.tl", &ok(&["langs", "--emit", "altplus:2"]));
    let model = dir.path().join("alt2.json");
    let v = json(
        "compile",
        &["--alphabet", "ab", "compile", "--formula", s(&f), "--precision", "12,4", "--out", s(&model)],
    );
    assert_eq!(v["layers"], 2);
    let sim = |w: &str| ok(&["simulate", "--model", s(&model), "--word", w]);
    assert!(sim("ab").ends_with("accepted true"));
    assert!(sim("^ab").ends_with("accepted true"));
    assert!(sim("ba").ends_with("accepted false"));
    let t = json("simulate", &["simulate", "--model", s(&model), "--word", "aab", "--trace"]);
    assert_eq!(t["accepted"], true);
    assert_eq!(t["trace"]["layers"].as_array().unwrap().len(), 2);
    assert_eq!(t["trace"]["h0"].as_array().unwrap().len(), 4);
    let text = ok(&["simulate", "--model", s(&model), "--word", "ab", "--trace"]);
    assert!(text.contains("layer 2"));
    assert_eq!(craspkit(&["simulate", "--model", s(&model), "--word", "abc"]).code, 2);
    let bad = craspkit(&["compile", "--formula", s(&f), "--precision", "4,2", "--out", s(&model)]);
    assert_eq!(bad.code, 2);
    assert_eq!(craspkit(&["compile", "--formula", s(&f), "--precision", "12", "--out", s(&model)]).code, 1);
}

#[test]
fn compile_then_decompile_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.tl", "#<[Q(a)] >= 1");
    let model = dir.path().join("a.json");
    ok(&["--alphabet", "ab", "compile", "--formula", s(&f), "--precision", "4,1", "--out", s(&model)]);
    let back = dir.path().join("back.tl");
    let v = json("decompile", &["decompile", "--model", s(&model), "--out", s(&back)]);
    assert_eq!(v["depth"], 1);
    let spec_a = format!("formula:{}", s(&back));
    let spec_m = format!("model:{}", s(&model));
    let spec_f = format!("formula:{}", s(&f));
    ok(&["--alphabet", "ab", "check-equiv", "--a", &spec_a, "--b", &spec_f, "--max-len", "8"]);
    ok(&["--alphabet", "ab", "check-equiv", "--a", &spec_m, "--b", &spec_f, "--max-len", "8"]);
    // too big to decompile
    let big = dir.path().join("big.json");
    ok(&["--alphabet", "ab", "compile", "--formula", s(&f), "--precision", "12,4", "--out", s(&big)]);
    let r = craspkit(&["decompile", "--model", s(&big), "--out", s(&back)]);
    assert_eq!(r.code, 2);
    assert!(!r.stderr.is_empty());
}

#[test]
fn translate_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.tl", "Q(a) && #<[Q(a)] < #<[Q(b)] + 1");
    let m = dir.path().join("f.maj2");
    let closed = dir.path().join("c.maj2");
    let back = dir.path().join("back.tl");
    let v = json("translate", &["translate", "--to", "maj2", "--in", s(&f), "--out", s(&m)]);
    assert_eq!(v["depth"], 1);
    let v = json(
        "translate",
        &["translate", "--to", "maj2", "--in", s(&f), "--out", s(&closed), "--closed"],
    );
    assert_eq!(v["depth"], 2);
    ok(&["translate", "--to", "tl", "--in", s(&m), "--out", s(&back)]);
    let fa = format!("formula:{}", s(&f));
    for other in [format!("maj2:{}", s(&closed)), format!("formula:{}", s(&back))] {
        ok(&["--alphabet", "ab", "check-equiv", "--a", &fa, "--b", &other, "--max-len", "7"]);
    }
    let two = write(dir.path(), "two.maj2", "x < y");
    let r = craspkit(&["translate", "--to", "tl", "--in", s(&two), "--out", s(&back)]);
    assert_eq!(r.code, 2);
    assert_eq!(craspkit(&["translate", "--to", "rasp", "--in", s(&f), "--out", s(&back)]).code, 1);
}

#[test]
fn gen_data_is_seeded_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    json(
        "gen-data",
        &["gen-data", "--k", "2", "--bin", "2:2", "--count", "1", "--seed", "0", "--out", s(&one)],
    );
    let line: Value = serde_json::from_str(std::fs::read_to_string(&one).unwrap().trim()).unwrap();
    assert_eq!(line["source"], "^ab");
    assert_eq!(line["target"], "001");
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for p in [&a, &b] {
        ok(&["gen-data", "--k", "4", "--bin", "10:30", "--count", "200", "--seed", "17", "--out", s(p)]);
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let rec = schema("dataset-record");
    let validator = jsonschema::validator_for(&rec).unwrap();
    let lines: Vec<&str> = std::str::from_utf8(&text).unwrap().lines().collect();
    assert_eq!(lines.len(), 200);
    for l in lines {
        let v: Value = serde_json::from_str(l).unwrap();
        assert!(validator.is_valid(&v), "{l}");
        let src = v["source"].as_str().unwrap();
        assert!((11..=31).contains(&src.len()));
        assert_eq!(v["target"].as_str().unwrap().len(), src.len());
    }
    let r = craspkit(&["gen-data", "--k", "5", "--bin", "2:4", "--count", "1", "--out", s(&a)]);
    assert_eq!(r.code, 2);
    assert_eq!(craspkit(&["gen-data", "--k", "5", "--bin", "9:4", "--count", "1", "--out", s(&a)]).code, 1);
}

#[test]
fn langs_emit_formulas() {
    let v = json("langs", &["langs", "--emit", "altplus:3"]);
    assert_eq!(v["depth"], 3);
    assert_eq!(json("langs", &["langs", "--emit", "dyck"])["depth"], 2);
    assert_eq!(json("langs", &["langs", "--emit", "jexpr:abc"])["depth"], 3);
    assert_eq!(json("langs", &["langs", "--emit", "jexpr:aba", "--bidirectional"])["depth"], 2);
    assert_eq!(json("langs", &["langs", "--emit", "prediction:4"])["depth"], 2);
    assert_eq!(craspkit(&["langs", "--emit", "regex:ab*"]).code, 1);
    assert_eq!(craspkit(&["langs", "--emit", "prediction:2"]).code, 2);
    assert_eq!(craspkit(&["langs", "--emit", "jexpr:ab", "--bidirectional"]).code, 2);
}

#[test]
fn check_equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let alt3 = write(dir.path(), "altplus3.tl", &ok(&["langs", "--emit", "altplus:3"]));
    let alt3_arg = format!("formula:{}", s(&alt3));
    let v = json(
        "check-equiv",
        &["check-equiv", "--a", &alt3_arg, "--b", "dfa:altplus:3", "--max-len", "12", "--samples", "200", "--seed", "4"],
    );
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["alphabet"], "ab");
    assert_eq!(v["exhaustive_words"], 8190);
    let qa = write(dir.path(), "qa.tl", "Q(a)");
    let qb = write(dir.path(), "qb.tl", "Q(b)");
    let (a, b) = (format!("formula:{}", s(&qa)), format!("formula:{}", s(&qb)));
    let r = craspkit(&["check-equiv", "--a", &a, "--b", &b]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.contains("counterexample `a`"));
    let r = craspkit(&["--json", "check-equiv", "--a", &a, "--b", &b]);
    assert_eq!(r.code, 3);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["counterexample"]["word"], "a");
    let dyck = write(dir.path(), "dyck.tl", DYCK);
    ok(&["check-equiv", "--a", &format!("formula:{}", s(&dyck)), "--b", "dfa:dyck", "--max-len", "10"]);
    assert_eq!(craspkit(&["check-equiv", "--a", "dfa:nfa:3", "--b", &b]).code, 1);
    assert_eq!(craspkit(&["check-equiv", "--a", "formula:/no/such/file", "--b", &b]).code, 2);
    // an acceptor that cannot read a symbol of the alphabet
    assert_eq!(craspkit(&["--alphabet", "abc", "check-equiv", "--a", &a, "--b", "dfa:altplus:2"]).code, 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(craspkit(&[]).code, 1);
    assert_eq!(craspkit(&["frobnicate"]).code, 1);
    assert_eq!(craspkit(&["eval", "--text", "Q(a)"]).code, 1);
    assert_eq!(craspkit(&["depth", "--text", "Q(a)", "--formula", "x"]).code, 1);
    assert_eq!(craspkit(&["--alphabet", "a^", "depth", "--text", "Q(a)"]).code, 1);
    let help = craspkit(&["--help"]);
    assert_eq!(help.code, 0);
    for cmd in [
        "parse", "eval", "depth", "normalize", "compile", "decompile", "simulate", "translate", "gen-data", "langs",
        "check-equiv",
    ] {
        assert!(help.stdout.contains(cmd), "{cmd}");
    }
}
