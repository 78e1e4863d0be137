mod common;

use std::collections::BTreeMap;

use common::{random_word, s, words};
use craspkit::compiler::*;
use craspkit::equiv::{check_equiv, Acceptor, EquivConfig};
use craspkit::fixedpoint::{round, Fixed, Precision};
use craspkit::formula::random::{random_formula, RandomConfig};
use craspkit::formula::{
    accepts, depth, eval_formula, parse, print, Alphabet, CmpOp, Formula, Term, BOS,
};
use craspkit::languages::{altplus_dfa, altplus_formula, dyck_formula, jexpr_formula};
use craspkit::transformer::{Layer, LocalMap, Stage, Transformer};
use craspkit::transforms::Folder;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prec(p: u32, s: u32) -> Precision {
    Precision::new(p, s).unwrap()
}

fn agree_model_formula(t: &Transformer, f: &Formula, ws: &[Vec<char>]) {
    for w in ws {
        assert_eq!(
            t.accepts_word(w).unwrap(),
            accepts(f, w).unwrap(),
            "{} on {}",
            print(f),
            w.iter().collect::<String>()
        );
    }
}

#[test]
fn compile_exists_a_small_precision() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#<[Q(a)] >= 1", &ab).unwrap();
    let t = compile(&f, &ab, prec(4, 1)).unwrap();
    assert_eq!(t.depth(), 1);
    agree_model_formula(&t, &f, &words(&['a', 'b'], 8));
}

#[test]
fn compile_dyck_verdicts() {
    let par = Alphabet::parse("()").unwrap();
    let t = compile(&dyck_formula(), &par, prec(12, 4)).unwrap();
    assert_eq!(t.depth(), 2);
    assert!(t.accepts_word(&s("(())()")).unwrap());
    assert!(!t.accepts_word(&s("())()(")).unwrap());
    agree_model_formula(&t, &dyck_formula(), &words(&['(', ')'], 8));
}

#[test]
fn compile_altplus_matches_dfa() {
    let ab = Alphabet::parse("ab").unwrap();
    for k in 1..=5 {
        let f = altplus_formula(k, &ab).unwrap();
        let t = compile(&f, &ab, prec(12, 4)).unwrap();
        assert_eq!(t.depth(), k);
        let r = check_equiv(
            &Acceptor::Model(t),
            &Acceptor::Dfa(altplus_dfa(k, false)),
            &['a', 'b'],
            &EquivConfig {
                max_exhaustive_len: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.equivalent, "k = {k}: {:?}", r.counterexample);
    }
}

#[test]
fn compile_altplus2_examples() {
    let ab = Alphabet::parse("ab").unwrap();
    let t = compile(&altplus_formula(2, &ab).unwrap(), &ab, prec(12, 4)).unwrap();
    assert!(t.accepts_word(&s("ab")).unwrap());
    assert!(!t.accepts_word(&s("ba")).unwrap());
}

#[test]
fn compile_random_formulas() {
    let abc = Alphabet::parse("abc").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cfg = RandomConfig::past(abc.clone(), 3);
    cfg.size = 10;
    let mut done = 0;
    while done < 12 {
        let f = random_formula(&mut rng, &cfg);
        let t = match compile(&f, &abc, prec(12, 4)) {
            Ok(t) => t,
            Err(CompileError::Precision(_)) => continue,
            Err(e) => panic!("{}: {e}", print(&f)),
        };
        assert_eq!(t.depth(), depth(&f));
        let mut ws = words(abc.symbols(), 5);
        for _ in 0..100 {
            ws.push(random_word(&mut rng, abc.symbols(), 6, 60));
        }
        agree_model_formula(&t, &f, &ws);
        done += 1;
    }
}

#[test]
fn compile_keeps_depth_when_comparisons_fold() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#<[Q(a)] - #<[Q(a)] >= 0 && Q(b)", &ab).unwrap();
    let t = compile(&f, &ab, prec(8, 2)).unwrap();
    assert_eq!(t.depth(), 1);
    agree_model_formula(&t, &f, &words(&['a', 'b'], 6));
}

#[test]
fn compile_sugar_and_ite() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("(Q(a) ? 2 * #<o[Q(b)] : #<[Q(a)]) + 1 > #<[Q(b) || #<[Q(a)] = 2]", &ab).unwrap();
    let t = compile(&f, &ab, prec(12, 4)).unwrap();
    assert_eq!(t.depth(), depth(&f));
    agree_model_formula(&t, &f, &words(&['a', 'b'], 8));
}

#[test]
fn compile_rejects_what_it_cannot_build() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#>[Q(a)] >= 1", &ab).unwrap();
    assert!(matches!(compile(&f, &ab, prec(12, 4)), Err(CompileError::Dialect(_))));
    let g = parse("Y(Q(a))", &ab).unwrap();
    assert!(matches!(compile(&g, &ab, prec(12, 4)), Err(CompileError::Dialect(_))));
    let h = parse("#<[Q(a)] >= 1", &ab).unwrap();
    assert!(matches!(compile(&h, &ab, prec(8, 0)), Err(CompileError::Precision(_))));
    let big = parse("#<[Q(a)] >= 500", &ab).unwrap();
    assert!(matches!(compile(&big, &ab, prec(8, 2)), Err(CompileError::Precision(_))));
}

#[test]
fn compiled_model_survives_json() {
    let par = Alphabet::parse("()").unwrap();
    let t = compile(&dyck_formula(), &par, prec(12, 4)).unwrap();
    let back = Transformer::from_json(&t.to_json()).unwrap();
    assert_eq!(t, back);
    assert_eq!(t.to_json(), back.to_json());
}

fn decompiled_matches(t: &Transformer, max_len: usize) -> Formula {
    let f = decompile(t).unwrap();
    assert_eq!(depth(&f), t.depth());
    for w in words(&t.alphabet, max_len) {
        assert_eq!(
            accepts(&f, &w).unwrap(),
            t.accepts_word(&w).unwrap(),
            "{}",
            w.iter().collect::<String>()
        );
    }
    f
}

#[test]
fn decompile_compiled_model() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#<[Q(a)] >= 1", &ab).unwrap();
    let t = compile(&f, &ab, prec(4, 1)).unwrap();
    let g = decompiled_matches(&t, 8);
    for w in words(&['a', 'b'], 8) {
        assert_eq!(accepts(&f, &w).unwrap(), accepts(&g, &w).unwrap());
    }
}

fn last_symbol_model() -> Transformer {
    let p = prec(4, 1);
    let mut embedding = BTreeMap::new();
    embedding.insert(BOS, vec![0]);
    embedding.insert('a', vec![2]);
    embedding.insert('b', vec![-2]);
    let table = |entries: Vec<(i64, i64)>| {
        LocalMap(vec![Stage::Table {
            entries: entries.into_iter().map(|(i, o)| (vec![i], vec![o])).collect(),
        }])
    };
    Transformer {
        precision: p,
        alphabet: vec!['a', 'b'],
        bos: BOS,
        d: 1,
        embedding,
        layers: vec![Layer {
            wq: LocalMap::constant(1, vec![0]),
            wk: LocalMap::constant(1, vec![0]),
            wv: LocalMap::constant(1, vec![0]),
            f: table(vec![(2, 3), (-2, -3), (0, 0)]),
        }],
        w_out: table(vec![(3, 1), (-3, -1), (0, -1)]),
        ..Default::default()
    }
}

#[test]
fn decompile_table_model_is_last_symbol() {
    let t = last_symbol_model();
    let g = decompiled_matches(&t, 8);
    let qa = Formula::sym('a');
    for w in words(&['a', 'b'], 8) {
        assert_eq!(accepts(&g, &w).unwrap(), accepts(&qa, &w).unwrap());
    }
}

#[test]
fn decompile_constant_model() {
    let p = prec(4, 1);
    let mut embedding = BTreeMap::new();
    embedding.insert(BOS, vec![1, 0]);
    embedding.insert('a', vec![2, -1]);
    embedding.insert('b', vec![-3, 2]);
    let id = LocalMap::affine(vec![vec![2, 0], vec![0, 2]], vec![0, 0]);
    let layer = Layer {
        wq: id.clone(),
        wk: id.clone(),
        wv: id.clone(),
        f: id.clone().then(Stage::Relu),
    };
    let t = Transformer {
        precision: p,
        alphabet: vec!['a', 'b'],
        bos: BOS,
        d: 2,
        embedding,
        layers: vec![layer.clone(), layer],
        w_out: LocalMap::constant(2, vec![1]),
        ..Default::default()
    };
    let g = decompiled_matches(&t, 8);
    assert!(words(&['a', 'b'], 6).iter().all(|w| accepts(&g, w).unwrap()));
}

/// Non-uniform attention with every map drawn at random.
fn random_model(rng: &mut ChaCha8Rng, layers: usize) -> Transformer {
    let p = prec(4, 1);
    let mut v = || rng.gen_range(-3i64..=3);
    let mut embedding = BTreeMap::new();
    for c in [BOS, 'a', 'b'] {
        embedding.insert(c, vec![v(), v()]);
    }
    let aff = |v: &mut dyn FnMut() -> i64| LocalMap::affine(vec![vec![v(), v()], vec![v(), v()]], vec![v(), v()]);
    let mut ls = Vec::new();
    for _ in 0..layers {
        ls.push(Layer {
            wq: aff(&mut v),
            wk: aff(&mut v),
            wv: aff(&mut v),
            f: aff(&mut v).then(Stage::Relu),
        });
    }
    let w_out = LocalMap::affine(vec![vec![v(), v()]], vec![v()]);
    Transformer {
        precision: p,
        alphabet: vec!['a', 'b'],
        bos: BOS,
        d: 2,
        embedding,
        layers: ls,
        w_out,
        ..Default::default()
    }
}

#[test]
fn decompile_random_one_layer_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..6 {
        let t = random_model(&mut rng, 1);
        decompiled_matches(&t, 7);
    }
}

#[test]
fn decompile_random_two_layer_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let t = random_model(&mut rng, 2);
    decompiled_matches(&t, 6);
}

#[test]
fn decompile_refuses_big_models() {
    let ab = Alphabet::parse("ab").unwrap();
    let t = compile(&altplus_formula(3, &ab).unwrap(), &ab, prec(12, 4)).unwrap();
    assert!(matches!(decompile(&t), Err(CompileError::Limit(_))));
}

#[test]
fn division_chain_matches_rounding() {
    // the chain yields significands; with s = 0 they are the values
    let p = prec(5, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let qa = Term::count_left(Formula::sym('a'));
    let qb = Term::count_left(Formula::sym('b'));
    for _ in 0..1000 {
        let (ka, kb, ca) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-6..=6));
        let (la, lb, cb) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(1..=3));
        let a = Term::sum_all([Term::scale(ka, qa.clone()), Term::scale(kb, qb.clone()), Term::constant(ca)]);
        let b = Term::sum_all([Term::scale(la, qa.clone()), Term::scale(lb, qb.clone()), Term::constant(cb)]);
        let mut fold = Folder::new();
        let bits = division_bits(&a, &b, p, &mut fold);
        let w = random_word(&mut rng, &['a', 'b'], 1, 20);
        let n = w.len();
        let av = craspkit::formula::eval_term(&a, &w, n).unwrap();
        let bv = craspkit::formula::eval_term(&b, &w, n).unwrap();
        let q = round(&BigRational::new(av.into(), bv.into()), p);
        for (b, f) in bits.iter().enumerate() {
            let want = q.bit(b as u32 + 1).unwrap();
            assert_eq!(eval_formula(f, &w, n).unwrap(), want, "{av}/{bv}, bit {}", b + 1);
        }
    }
}

#[test]
fn synth_identity_keeps_bank() {
    let p = prec(3, 0);
    let bank = vec![vec![Formula::sym('a'), Formula::sym('b'), Formula::sym('c')]];
    let out = synth_function_formula(&bank, p, |x| x.to_vec()).unwrap();
    assert_eq!(out, bank);
}

fn all_assignments(symbols: &[char], k: usize) -> Vec<Vec<char>> {
    words(symbols, k).into_iter().filter(|w| w.len() == k).collect()
}

#[test]
fn synth_negation_on_three_bits() {
    let p = prec(3, 0);
    let bank = vec![(0..3).map(position_is_one).collect::<Vec<_>>()];
    let neg = |x: &[Fixed]| vec![Fixed::from_sig(x[0].precision().clamp(-(x[0].sig() as i128)), p).unwrap()];
    let out = synth_function_formula(&bank, p, neg).unwrap();
    let ws = all_assignments(&['0', '1'], 3);
    assert_eq!(ws.len(), 8);
    for w in ws {
        let m = Fixed::from_bits(&w.iter().map(|c| *c == '1').collect::<Vec<_>>(), p);
        let want = neg(&[m])[0];
        for b in 0..3 {
            assert_eq!(eval_formula(&out[0][b], &w, 3).unwrap(), want.bit(b as u32 + 1).unwrap());
        }
    }
}

/// At the last position: position `b+1` holds `1`.
fn position_is_one(b: usize) -> Formula {
    // #<[Q(1) && #<[TRUE] = b+1] >= 1
    let at = Formula::cmp(Term::count_left(Formula::truth(true)), CmpOp::Eq, Term::constant(b as i64 + 1));
    Formula::cmp(
        Term::count_left(Formula::and(Formula::sym('1'), at)),
        CmpOp::Ge,
        Term::constant(1),
    )
}

#[test]
fn synth_saturating_add_on_pairs() {
    let p = prec(3, 1);
    let bank: Vec<Vec<Formula>> = (0..2)
        .map(|c| (0..3).map(|b| position_is_one(3 * c + b)).collect())
        .collect();
    let add = |x: &[Fixed]| vec![x[0].saturating_add(x[1])];
    let out = synth_function_formula(&bank, p, add).unwrap();
    let ws = all_assignments(&['0', '1'], 6);
    assert_eq!(ws.len(), 64);
    for w in ws {
        let bits: Vec<bool> = w.iter().map(|c| *c == '1').collect();
        let x = Fixed::from_bits(&bits[..3], p);
        let y = Fixed::from_bits(&bits[3..], p);
        let want = x.saturating_add(y);
        for b in 0..3 {
            assert_eq!(eval_formula(&out[0][b], &w, 6).unwrap(), want.bit(b as u32 + 1).unwrap());
        }
    }
}

#[test]
fn synth_rejects_mismatched_banks() {
    let p = prec(3, 0);
    let bank = vec![vec![Formula::sym('a')]];
    assert!(synth_function_formula(&bank, p, |x| x.to_vec()).is_err());
}

#[test]
fn jexpr_compiles() {
    let abc = Alphabet::parse("abc").unwrap();
    let f = jexpr_formula(&['a', 'b', 'c']).unwrap();
    let t = compile(&f, &abc, prec(12, 4)).unwrap();
    assert_eq!(t.depth(), 3);
    agree_model_formula(&t, &f, &words(abc.symbols(), 6));
}
