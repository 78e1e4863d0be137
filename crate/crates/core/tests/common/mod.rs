#![allow(dead_code)]

use rand::Rng;

/// Every nonempty word over `symbols` with length at most `max_len`.
pub fn words(symbols: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<char>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in symbols {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R, symbols: &[char], min_len: usize, max_len: usize) -> Vec<char> {
    let n = rng.gen_range(min_len..=max_len);
    (0..n).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect()
}

pub fn s(w: &str) -> Vec<char> {
    w.chars().collect()
}

pub fn bools(text: &str) -> Vec<bool> {
    text.chars().map(|c| c == 'T').collect()
}

/// Row values for one Dyck trace: Q(, Q), #<Q(, #<Q), balanced, violates,
/// #violations, matched, matched and balanced.
pub struct DyckTrace {
    pub word: &'static str,
    pub open: &'static str,
    pub close: &'static str,
    pub n_open: [i128; 6],
    pub n_close: [i128; 6],
    pub balanced: &'static str,
    pub violates: &'static str,
    pub n_violations: [i128; 6],
    pub matched: &'static str,
    pub accepted: &'static str,
}

pub const TRACES: [DyckTrace; 2] = [
    DyckTrace {
        word: "(())()",
        open: "TTFFTF",
        close: "FFTTFT",
        n_open: [1, 2, 2, 2, 3, 3],
        n_close: [0, 0, 1, 2, 2, 3],
        balanced: "FFFTFT",
        violates: "FFFFFF",
        n_violations: [0, 0, 0, 0, 0, 0],
        matched: "TTTTTT",
        accepted: "FFFTFT",
    },
    DyckTrace {
        word: "())()(",
        open: "TFFTFT",
        close: "FTTFTF",
        n_open: [1, 1, 1, 2, 2, 3],
        n_close: [0, 1, 2, 2, 3, 3],
        balanced: "FTFTFT",
        violates: "FFTFTF",
        n_violations: [0, 0, 1, 1, 2, 2],
        matched: "TTFFFF",
        accepted: "FTFFFF",
    },
];
