//! Small ideals for exhaustive and sampled checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ideal::MonomialIdeal;
use crate::word::{Letter, Word};

/// All words over `1..=d` with length in `min_len..=max_len`, shortlex.
pub fn words(d: usize, min_len: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level = vec![Word::empty()];
    for len in 1..=max_len {
        level = level
            .iter()
            .flat_map(|w| (1..=d as Letter).map(move |a| w.append(a)))
            .collect();
        if len >= min_len {
            out.extend(level.iter().cloned());
        }
    }
    out
}

/// Every ideal over `d` letters whose basis words have length in
/// `2..=max_len`, the zero ideal included.
pub fn enumerate_ideals(d: usize, max_len: usize) -> Vec<MonomialIdeal> {
    let cands = words(d, 2, max_len);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        i: usize,
        cands: &[Word],
        chosen: &mut Vec<Word>,
        d: usize,
        out: &mut Vec<MonomialIdeal>,
    ) {
        if i == cands.len() {
            out.push(
                MonomialIdeal::from_generators(d, chosen.clone(), vec![]).expect("valid antichain"),
            );
            return;
        }
        go(i + 1, cands, chosen, d, out);
        if !chosen.iter().any(|c| cands[i].contains_factor(c)) {
            chosen.push(cands[i].clone());
            go(i + 1, cands, chosen, d, out);
            chosen.pop();
        }
    }
    go(0, &cands, &mut chosen, d, &mut out);
    out
}

/// `count` distinct random ideals over `d` letters with basis words of
/// length in `2..=max_len`, reproducible from `seed`.
pub fn sample_ideals(d: usize, max_len: usize, count: usize, seed: u64) -> Vec<MonomialIdeal> {
    let cands = words(d, 2, max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count + 100 {
        attempts += 1;
        let p: f64 = rng.gen_range(0.03..0.45);
        let mut chosen: Vec<Word> = Vec::new();
        for c in &cands {
            if rng.gen_bool(p) && !chosen.iter().any(|x| c.contains_factor(x)) {
                chosen.push(c.clone());
            }
        }
        let ideal = MonomialIdeal::from_generators(d, chosen, vec![]).expect("valid antichain");
        if seen.insert(ideal.clone()) {
            out.push(ideal);
        }
    }
    out
}

/// All permutations of `1..=d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::new();
    fn go(d: usize, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for a in 1..=d as Letter {
            if !cur.contains(&a) {
                cur.push(a);
                go(d, cur, out);
                cur.pop();
            }
        }
    }
    go(d, &mut cur, &mut out);
    out
}

/// The default check corpus: every ideal with `d <= 2` and basis words of
/// length at most 3, plus `d3_samples` seeded ideals with `d = 3`.
pub fn standard_corpus(d3_samples: usize, seed: u64) -> Vec<MonomialIdeal> {
    let mut out = enumerate_ideals(1, 3);
    out.extend(enumerate_ideals(2, 3));
    out.extend(sample_ideals(3, 3, d3_samples, seed));
    out
}
