mod common;

use common::{random_word, s, words};
use craspkit::formula::random::{random_formula, RandomConfig};
use craspkit::formula::{depth, eval_positions, features, parse, print, Alphabet, Formula};
use craspkit::transforms::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn same_everywhere(f: &Formula, g: &Formula, ws: &[Vec<char>]) {
    for w in ws {
        assert_eq!(
            eval_positions(f, w).unwrap(),
            eval_positions(g, w).unwrap(),
            "{} vs {} on {}",
            print(f),
            print(g),
            w.iter().collect::<String>()
        );
    }
}

fn corpus(rng: &mut ChaCha8Rng, ab: &[char], longer: usize) -> Vec<Vec<char>> {
    let mut ws = words(ab, 6);
    for _ in 0..longer {
        ws.push(random_word(rng, ab, 7, 40));
    }
    ws
}

#[test]
fn desugar_keeps_language_and_depth() {
    let ab = Alphabet::parse("ab").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ws = corpus(&mut rng, ab.symbols(), 20);
    let mut cfg = RandomConfig::full(ab.clone(), 2);
    cfg.prev = false;
    cfg.modulo = false;
    cfg.size = 8;
    for _ in 0..60 {
        let f = random_formula(&mut rng, &cfg);
        let g = desugar(&f);
        assert!(is_desugared(&g), "{}", print(&g));
        assert_eq!(depth(&f), depth(&g), "{}", print(&f));
        same_everywhere(&f, &g, &ws);
    }
}

#[test]
fn desugar_count_all_example() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#[Q(a)] >= 2", &ab).unwrap();
    let g = desugar(&f);
    let fe = features(&g);
    assert!(!fe.ite && !fe.count_sugar);
    assert_eq!(depth(&g), 1);
    same_everywhere(&f, &g, &words(ab.symbols(), 6));
}

#[test]
fn ite_split_shape() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("(Q(a) ? #<[Q(b)] : 0) + 1 >= 2", &ab).unwrap();
    let g = eliminate_ite(&f);
    assert_eq!(
        print(&g),
        "Q(a) && #<[Q(b)] + 1 >= 2 || !Q(a) && 0 + 1 >= 2"
    );
}

#[test]
fn sugar_free_formula_is_unchanged_by_ite_and_count_passes() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#<[Q(a)] < #<[Q(b)] + 1 && !Q(a)", &ab).unwrap();
    assert_eq!(eliminate_ite(&eliminate_count_sugar(&f)), f);
}

#[test]
fn minimal_basis_examples() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("#<[Q(a)] = #<[Q(b)]", &ab).unwrap();
    assert_eq!(
        print(&normalize_to_minimal_basis(&f)),
        "!(#<[Q(a)] < #<[Q(b)]) && !(#<[Q(b)] < #<[Q(a)])"
    );
    let f = parse("Q(a) || Q(b)", &ab).unwrap();
    assert_eq!(print(&normalize_to_minimal_basis(&f)), "!(!Q(a) && !Q(b))");
}

#[test]
fn minimal_basis_random() {
    let ab = Alphabet::parse("ab").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ws = corpus(&mut rng, ab.symbols(), 0);
    let cfg = RandomConfig::full(ab.clone(), 2);
    for _ in 0..500 {
        let f = random_formula(&mut rng, &cfg);
        let g = normalize_to_minimal_basis(&f);
        assert_eq!(depth(&f), depth(&g));
        let w = random_word(&mut rng, ab.symbols(), 1, 12);
        assert_eq!(eval_positions(&f, &w).unwrap(), eval_positions(&g, &w).unwrap());
    }
    let f = parse("Q(a) && #<[Q(b)] != 2 || #>[Q(a)] <= 1", &ab).unwrap();
    same_everywhere(&f, &normalize_to_minimal_basis(&f), &ws);
}

#[test]
fn ynf_examples() {
    let ab = Alphabet::parse("ab").unwrap();
    let f = parse("Y(Q(a) && Q(b))", &ab).unwrap();
    assert_eq!(print(&y_normal_form(&f, &ab).unwrap()), "Y(Q(a)) && Y(Q(b))");
    let f = parse("Y(MOD(2,1))", &ab).unwrap();
    assert_eq!(y_normal_form(&f, &ab).unwrap(), f);
    let f = parse("Y(!Q(a))", &ab).unwrap();
    let g = y_normal_form(&f, &ab).unwrap();
    assert_eq!(print(&g), "Y(Q(a) || Q(b)) && !Y(Q(a))");
    // position 1: Y(...) is false, the unguarded push would say true
    assert_eq!(eval_positions(&g, &s("b")).unwrap(), vec![false]);
    same_everywhere(&f, &g, &words(ab.symbols(), 6));
}

#[test]
fn ynf_random() {
    let ab = Alphabet::parse("ab").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ws = corpus(&mut rng, ab.symbols(), 30);
    let mut cfg = RandomConfig::past(ab.clone(), 2);
    cfg.prev = true;
    cfg.modulo = true;
    cfg.ite = true;
    cfg.strict = true;
    for _ in 0..100 {
        let f = random_formula(&mut rng, &cfg);
        let g = y_normal_form(&f, &ab).unwrap();
        assert!(is_ynf(&g), "{}", print(&g));
        assert_eq!(depth(&f), depth(&g));
        same_everywhere(&f, &g, &ws);
    }
}

fn check_reduction(f: &Formula, abe: &Alphabet, e: char, max_len: usize, extra: &[Vec<char>]) -> NeutralReduction {
    let red = neutral_letter_reduce(f, e, abe).unwrap();
    let fe = features(&red.reduced);
    assert!(!fe.prev && !fe.modulo && !fe.future);
    assert!(!craspkit::formula::symbols(&red.reduced).contains(&e));
    assert_eq!(depth(f), depth(&red.reduced), "{}", print(f));
    let sigma: Vec<char> = abe.symbols().iter().copied().filter(|c| *c != e).collect();
    let mut ws = words(&sigma, max_len);
    ws.extend(extra.iter().cloned());
    for w in &ws {
        let padded = pad_word(w, e, red.padding);
        assert_eq!(
            craspkit::formula::accepts(f, &padded).unwrap(),
            craspkit::formula::accepts(&red.reduced, w).unwrap(),
            "{} on {}",
            print(f),
            w.iter().collect::<String>()
        );
    }
    red
}

#[test]
fn neutral_examples() {
    let abe = Alphabet::parse("abe").unwrap();
    let red = check_reduction(&parse("Q(a)", &abe).unwrap(), &abe, 'e', 5, &[]);
    assert_eq!(red.padding, 1);
    let red = check_reduction(&parse("MOD(2,0)", &abe).unwrap(), &abe, 'e', 5, &[]);
    assert_eq!(red.padding, 2);
    assert_eq!(depth(&red.reduced), 0);
    check_reduction(&parse("#<[Q(e)] >= 3", &abe).unwrap(), &abe, 'e', 5, &[]);
    let red = check_reduction(&parse("Y(Y(Q(a))) && MOD(3,1)", &abe).unwrap(), &abe, 'e', 5, &[]);
    assert_eq!(red.padding, 9);
}

#[test]
fn neutral_random() {
    let abe = Alphabet::parse("abe").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut cfg = RandomConfig::past(abe.clone(), 2);
    cfg.prev = true;
    cfg.modulo = true;
    cfg.size = 8;
    let mut extra = Vec::new();
    for _ in 0..10 {
        extra.push(random_word(&mut rng, &['a', 'b'], 6, 15));
    }
    for _ in 0..40 {
        let f = random_formula(&mut rng, &cfg);
        if craspkit::formula::moduli(&f).iter().any(|m| *m > 3) {
            continue;
        }
        check_reduction(&f, &abe, 'e', 4, &extra);
    }
}
