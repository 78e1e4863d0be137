use std::collections::HashMap;

/// A complete deterministic automaton over single-character symbols.
/// Symbols outside `alphabet` are rejected by [`Dfa::run`].
#[derive(Debug, Clone)]
pub struct Dfa {
    pub alphabet: Vec<char>,
    pub start: usize,
    pub accepting: Vec<bool>,
    delta: Vec<HashMap<char, usize>>,
}

impl Dfa {
    pub fn new(alphabet: Vec<char>, states: usize, start: usize) -> Self {
        Dfa {
            alphabet,
            start,
            accepting: vec![false; states],
            delta: vec![HashMap::new(); states],
        }
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn set(&mut self, from: usize, c: char, to: usize) {
        self.delta[from].insert(c, to);
    }

    pub fn step(&self, q: usize, c: char) -> Option<usize> {
        self.delta[q].get(&c).copied()
    }

    /// Acceptance after each prefix; `None` on a foreign symbol.
    pub fn run(&self, w: &[char]) -> Option<Vec<bool>> {
        let mut q = self.start;
        let mut out = Vec::with_capacity(w.len());
        for &c in w {
            q = self.step(q, c)?;
            out.push(self.accepting[q]);
        }
        Some(out)
    }

    pub fn accepts(&self, w: &[char]) -> Option<bool> {
        let mut q = self.start;
        for &c in w {
            q = self.step(q, c)?;
        }
        Some(self.accepting[q])
    }
}

/// Alternating blocks starting with `a`, exactly `k` of them. States
/// `0..=k` count blocks seen, `k+1` is dead. With `neutral`, `e` loops
/// everywhere.
pub fn altplus_dfa(k: usize, neutral: bool) -> Dfa {
    let mut alphabet = vec!['a', 'b'];
    if neutral {
        alphabet.push('e');
    }
    let dead = k + 1;
    let mut d = Dfa::new(alphabet, k + 2, 0);
    d.accepting[k] = true;
    for q in 0..=k {
        // the symbol that continues the current block, and the one that opens
        // the next block
        let (cur, next) = if q % 2 == 1 { ('a', 'b') } else { ('b', 'a') };
        if q > 0 {
            d.set(q, cur, q);
        }
        d.set(q, next, if q < k { q + 1 } else { dead });
        if q == 0 {
            d.set(0, 'b', dead);
        }
        if neutral {
            d.set(q, 'e', q);
        }
    }
    for c in d.alphabet.clone() {
        d.set(dead, c, dead);
    }
    d
}

/// Strings containing `pattern` as a (scattered) subsequence. State `j`
/// means the first `j` symbols were found.
pub fn subsequence_dfa(pattern: &[char], alphabet: &[char]) -> Dfa {
    let k = pattern.len();
    let mut d = Dfa::new(alphabet.to_vec(), k + 1, 0);
    d.accepting[k] = true;
    for j in 0..=k {
        for &c in alphabet {
            let to = if j < k && pattern[j] == c { j + 1 } else { j };
            d.set(j, c, to);
        }
    }
    d
}

/// The alternating pattern `a b a b ...` (or starting with `b`) of length k.
pub fn alternating(first: char, k: usize) -> Vec<char> {
    let other = if first == 'a' { 'b' } else { 'a' };
    (0..k).map(|i| if i % 2 == 0 { first } else { other }).collect()
}

/// Balanced parentheses, checked with a counter.
pub fn dyck_member(w: &[char]) -> bool {
    let mut depth: i64 = 0;
    for &c in w {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => return false,
        }
    }
    depth == 0
}
