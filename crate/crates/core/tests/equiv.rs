use craspkit::equiv::*;
use craspkit::formula::{parse, Alphabet, Formula};
use craspkit::languages::{altplus_dfa, altplus_formula};
use craspkit::maj2::{end_wrapper, tl_to_maj2};

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

#[test]
fn first_counterexample_is_shortest() {
    let a = Acceptor::Formula(Formula::sym('a'));
    let b = Acceptor::Formula(Formula::sym('b'));
    let r = check_equiv(&a, &b, &['a', 'b'], &EquivConfig::default()).unwrap();
    assert!(!r.equivalent);
    let ce = r.counterexample.unwrap();
    assert_eq!((ce.word.as_str(), ce.a, ce.b), ("a", true, false));
    assert_eq!(r.exhaustive_words, 1);
}

#[test]
fn altplus3_matches_dfa_to_twelve() {
    let f = Acceptor::Formula(altplus_formula(3, &ab()).unwrap());
    let d = Acceptor::Dfa(altplus_dfa(3, false));
    let cfg = EquivConfig {
        max_exhaustive_len: 12,
        random_samples: 500,
        max_random_len: 60,
        seed: 9,
    };
    let r = check_equiv(&f, &d, &['a', 'b'], &cfg).unwrap();
    assert!(r.equivalent);
    assert_eq!(r.exhaustive_words as u128, count_words(2, 12));
    assert_eq!(r.random_words, 500);
}

#[test]
fn counterexample_found_among_random_words() {
    // differs only on words with at least 12 a's
    let f = Acceptor::Formula(parse("#<[Q(a)] < 12", &ab()).unwrap());
    let t = Acceptor::Formula(Formula::truth(true));
    let cfg = EquivConfig {
        max_exhaustive_len: 6,
        random_samples: 200,
        max_random_len: 80,
        seed: 1,
    };
    let r = check_equiv(&f, &t, &['a', 'b'], &cfg).unwrap();
    assert!(!r.equivalent);
    assert_eq!(r.exhaustive_words as u128, count_words(2, 6));
    let ce = r.counterexample.unwrap();
    assert!(ce.word.chars().filter(|c| *c == 'a').count() >= 12);
    // the same seed finds the same word
    let again = check_equiv(&f, &t, &['a', 'b'], &cfg).unwrap();
    assert_eq!(again.counterexample.unwrap().word, ce.word);
}

#[test]
fn maj2_acceptor() {
    let f = altplus_formula(2, &ab()).unwrap();
    let m = Acceptor::Maj2(end_wrapper(&tl_to_maj2(&f).unwrap()));
    let r = check_equiv(&Acceptor::Formula(f), &m, &['a', 'b'], &EquivConfig::default()).unwrap();
    assert!(r.equivalent);
}

#[test]
fn alphabet_mismatch_is_reported() {
    let d = Acceptor::Dfa(altplus_dfa(2, false));
    let f = Acceptor::Formula(Formula::sym('a'));
    let err = check_equiv(&f, &d, &['a', 'b', 'c'], &EquivConfig::default()).unwrap_err();
    assert!(matches!(err, EquivError::Alphabet { symbol: 'c', .. }));
}

#[test]
fn word_enumeration() {
    assert_eq!(count_words(2, 3), 14);
    let ws = words_up_to(&['a', 'b'], 2);
    let text: Vec<String> = ws.iter().map(|w| w.iter().collect()).collect();
    assert_eq!(text, ["a", "b", "aa", "ab", "ba", "bb"]);
    let r = random_words(&['a', 'b'], 100, 5, 3);
    assert!(r.iter().all(|w| (1..=5).contains(&w.len())));
    assert_eq!(r, random_words(&['a', 'b'], 100, 5, 3));
}
