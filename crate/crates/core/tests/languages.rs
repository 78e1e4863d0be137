mod common;

use common::{random_word, s, words};
use craspkit::formula::{accepts, depth, eval_positions, parse, print, Alphabet, Formula};
use craspkit::languages::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agrees(f: &Formula, lang: BlockLanguage, ws: &[Vec<char>]) {
    for w in ws {
        assert_eq!(
            accepts(f, w).unwrap(),
            lang.member(w).unwrap(),
            "{:?} on {}",
            lang,
            w.iter().collect::<String>()
        );
    }
}

#[test]
fn membership_examples() {
    assert!(BlockLanguage::AltPlus(3).member(&s("aabba")).unwrap());
    assert!(!BlockLanguage::AltPlus(3).member(&s("abab")).unwrap());
    assert!(BlockLanguage::AltPlusNeutral(3).member(&s("aeabbea")).unwrap());
    assert!(!BlockLanguage::AltPlus(3).member(&s("baba")).unwrap());
    assert!(BlockLanguage::AltPlus(4).member(&s("abab")).unwrap());
    assert!(BlockLanguage::L2(2).member(&s("aba")).unwrap());
    assert!(matches!(
        BlockLanguage::AltPlus(3).member(&s("abc")),
        Err(LangError::ForeignSymbol('c'))
    ));
}

#[test]
fn jexpr_shapes() {
    assert_eq!(print(&jexpr_formula(&['a']).unwrap()), "#<[Q(a)] >= 1");
    let f = jexpr_formula(&['a', 'b', 'c']).unwrap();
    assert_eq!(
        print(&f),
        "#<[#<[#<[Q(a)] >= 1 && Q(b)] >= 1 && Q(c)] >= 1"
    );
    assert_eq!(depth(&f), 3);
    let g = jexpr_formula_bidirectional(&['a', 'b', 'c']).unwrap();
    let expected = parse(
        "#<[ (#<[Q(a)]>=1) && Q(b) && (#>[Q(c)]>=1) ] >= 1",
        &Alphabet::parse("abc").unwrap(),
    )
    .unwrap();
    assert_eq!(g, expected);
    assert_eq!(depth(&g), 2);
    assert_eq!(print(&jexpr_formula_bidirectional(&['a']).unwrap()), "#<[Q(a)] >= 1");
    assert!(matches!(
        jexpr_formula_bidirectional(&['a', 'b']),
        Err(LangError::EvenLength(2))
    ));
}

fn is_subsequence(p: &[char], w: &[char]) -> bool {
    let mut it = w.iter();
    p.iter().all(|c| it.any(|x| x == c))
}

#[test]
fn jexpr_matches_subsequence_checker() {
    let ab = ['a', 'b'];
    let ws = words(&ab, 10);
    for p in words(&ab, 4) {
        let f = jexpr_formula(&p).unwrap();
        assert_eq!(depth(&f), p.len());
        let d = subsequence_dfa(&p, &ab);
        for w in &ws {
            let want = is_subsequence(&p, w);
            assert_eq!(accepts(&f, w).unwrap(), want, "{:?} {:?}", p, w);
            assert_eq!(d.accepts(w).unwrap(), want);
        }
    }
}

#[test]
fn bidirectional_matches_subsequence_checker() {
    let ab = ['a', 'b'];
    let ws = words(&ab, 12);
    for p in [s("ababa"), s("aabaa"), s("bbb"), s("abb")] {
        let f = jexpr_formula_bidirectional(&p).unwrap();
        assert_eq!(depth(&f), p.len() / 2 + 1);
        for w in &ws {
            assert_eq!(accepts(&f, w).unwrap(), is_subsequence(&p, w), "{:?} {:?}", p, w);
        }
    }
}

#[test]
fn altplus_small_k() {
    let ab = Alphabet::parse("ab").unwrap();
    let f1 = altplus_formula(1, &ab).unwrap();
    assert_eq!(print(&f1), "#<[Q(a)] >= 1 && !(#<[Q(b)] >= 1)");
    assert_eq!(depth(&f1), 1);
    let ws = words(ab.symbols(), 12);
    agrees(&f1, BlockLanguage::AltPlus(1), &ws);
    let f3 = altplus_formula(3, &ab).unwrap();
    agrees(&f3, BlockLanguage::AltPlus(3), &ws);
}

#[test]
fn altplus_neutral_random() {
    let abe = Alphabet::parse("abe").unwrap();
    let f = altplus_formula(5, &abe).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hits = 0;
    let ws: Vec<Vec<char>> = (0..5000)
        .map(|i| {
            if i % 2 == 0 {
                // a member of L5 with e's sprinkled in, so both outcomes occur
                let n = 5 + i % 40;
                let mut w = Vec::new();
                for (j, c) in sample_dataset(5, n, n, 1, i as u64).unwrap()[0].source.chars().skip(1).enumerate() {
                    if j % 3 == 0 {
                        w.push('e');
                    }
                    w.push(c);
                }
                w
            } else {
                random_word(&mut rng, abe.symbols(), 1, 60)
            }
        })
        .collect();
    for w in &ws {
        hits += BlockLanguage::AltPlusNeutral(5).member(w).unwrap() as usize;
    }
    assert!(hits >= 2500);
    agrees(&f, BlockLanguage::AltPlusNeutral(5), &ws);
}

#[test]
fn a_and_b_are_subsequence_languages() {
    let ws = words(&['a', 'b'], 8);
    for k in 1..=4 {
        agrees(&a_formula(k).unwrap(), BlockLanguage::A(k), &ws);
        agrees(&b_formula(k).unwrap(), BlockLanguage::B(k), &ws);
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

#[test]
fn dyck_traces() {
    let d = dyck_formula();
    assert_eq!(
        print(&d),
        "#<[Q(()] = #<[Q())] && #<[#<[Q(()] < #<[Q())]] = 0"
    );
    assert_eq!(depth(&d), 2);
    assert!(accepts(&d, &s("(())()")).unwrap());
    assert!(!accepts(&d, &s("())()(")).unwrap());
    assert_eq!(bits(&eval_positions(&d, &s("(())()")).unwrap()), "000101");
    assert_eq!(bits(&eval_positions(&d, &s("())()(")).unwrap()), "010000");
    for w in words(&['(', ')'], 12) {
        assert_eq!(accepts(&d, &w).unwrap(), dyck_member(&w));
    }
}

#[test]
fn prediction_worked_example() {
    let f = prediction_formula(3).unwrap();
    assert_eq!(depth(&f), 1);
    let w = s("aaabbbbaaaaa");
    assert_eq!(bits(&eval_positions(&f, &w).unwrap()), "000000011111");
    assert_eq!(bits(&prediction_labels(3, &w).unwrap()), "000000011111");
    assert!(prediction_formula(2).is_err());
    for k in 3..=6 {
        assert_eq!(depth(&prediction_formula(k).unwrap()), k - 2);
        let a = vec!['a'; 9];
        assert!(eval_positions(&prediction_formula(k).unwrap(), &a).unwrap().iter().all(|b| !b));
    }
}

#[test]
fn prediction_on_sampled_prefixes() {
    for k in [4usize, 5] {
        let f = prediction_formula(k).unwrap();
        for r in sample_dataset(k, k, 40, 1000, 99).unwrap() {
            let w: Vec<char> = r.source.chars().skip(1).collect();
            let got = eval_positions(&f, &w).unwrap();
            assert_eq!(format!("0{}", bits(&got)), r.target);
        }
    }
}

#[test]
fn dataset_examples() {
    let r = sample_dataset(2, 2, 2, 1, 0).unwrap();
    assert_eq!(r[0].source, "^ab");
    assert_eq!(r[0].target, "001");
    let a = sample_dataset(3, 5, 9, 50, 7).unwrap();
    let b = sample_dataset(3, 5, 9, 50, 7).unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_jsonl(&a, &mut buf).unwrap();
    let mut buf2 = Vec::new();
    write_jsonl(&b, &mut buf2).unwrap();
    assert_eq!(buf, buf2);
    assert_eq!(read_jsonl(&buf[..]).unwrap(), a);
    let first = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
    assert!(first.starts_with("{\"k\":3,\"source\":\"^"));
    for r in &a {
        let w: Vec<char> = r.source.chars().skip(1).collect();
        assert!(BlockLanguage::AltPlus(3).member(&w).unwrap());
        assert!((5..=9).contains(&w.len()));
        assert!(r.target.starts_with('0') && r.target.ends_with('1'));
    }
    assert!(matches!(sample_dataset(3, 2, 5, 1, 0), Err(LangError::Infeasible(_))));
}

#[test]
fn aabba_target() {
    assert_eq!(bits(&prediction_labels(3, &s("aabba")).unwrap()), "00001");
}

#[test]
fn switch_positions_are_uniform() {
    let draws = 100_000usize;
    let recs = sample_dataset(3, 10, 10, draws, 2024).unwrap();
    let mut counts = std::collections::HashMap::new();
    for r in &recs {
        let w: Vec<char> = r.source.chars().skip(1).collect();
        let gaps: Vec<usize> = (1..w.len()).filter(|&i| w[i] != w[i - 1]).collect();
        assert_eq!(gaps.len(), 2);
        *counts.entry((gaps[0], gaps[1])).or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 36);
    let p = 1.0 / 36.0;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for (&pair, &c) in &counts {
        assert!(
            (c as f64 - draws as f64 * p).abs() <= 3.0 * sigma + 1e-9,
            "pair {pair:?} seen {c} times"
        );
    }
}
