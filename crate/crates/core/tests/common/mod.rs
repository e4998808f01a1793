//! Brute-force reference implementations used by the integration tests.
//! Nothing here goes through the automaton or the class machinery.

#![allow(dead_code)]

use monoqd_core::{Letter, MonomialIdeal, QuantisedSystem, Word};

pub fn w(s: &str) -> Word {
    Word::from_digits(s).expect("digit word")
}

pub fn ideal(d: usize, gens: &[&str]) -> MonomialIdeal {
    MonomialIdeal::from_generators(d, gens.iter().map(|s| w(s)), vec![]).expect("valid ideal")
}

pub fn has_factor(hay: &[Letter], needle: &[Letter]) -> bool {
    if needle.len() > hay.len() {
        return false;
    }
    (0..=hay.len() - needle.len()).any(|s| &hay[s..s + needle.len()] == needle)
}

/// Forbidden iff some raw generator occurs as a factor.
pub fn brute_forbidden(gens: &[Word], x: &[Letter]) -> bool {
    gens.iter().any(|g| has_factor(x, g.letters()))
}

/// Every word over `1..=d` of length at most `max_len`, shortlex.
pub fn all_words(d: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut level = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &level {
            for a in 1..=d as Letter {
                let mut y = x.clone();
                y.push(a);
                next.push(y);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        level = next;
    }
    out
}

pub fn brute_allowable(gens: &[Word], d: usize, max_len: usize) -> Vec<Word> {
    all_words(d, max_len)
        .into_iter()
        .filter(|x| !brute_forbidden(gens, x.letters()))
        .collect()
}

pub fn concat(a: &Word, b: &Word) -> Vec<Letter> {
    let mut v = a.letters().to_vec();
    v.extend_from_slice(b.letters());
    v
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations_of(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn edge_multiset(
    sys: &QuantisedSystem,
    relabel: impl Fn(Letter) -> Letter,
    f: &[usize],
) -> Vec<(usize, usize, Letter)> {
    let mut e: Vec<_> = (0..sys.len())
        .flat_map(|c| (1..=sys.d() as Letter).filter_map(move |i| sys.phi(i, c).map(|t| (c, t, i))))
        .map(|(s, t, i)| (f[s], f[t], relabel(i)))
        .collect();
    e.sort_unstable();
    e
}

/// Exhaustive search for a labelled isomorphism up to a global renaming.
pub fn brute_conjugate(a: &QuantisedSystem, b: &QuantisedSystem) -> bool {
    if a.d() != b.d() || a.len() != b.len() {
        return false;
    }
    let id: Vec<usize> = (0..a.len()).collect();
    let target = edge_multiset(a, |i| i, &id);
    for sigma in permutations_of(a.d()) {
        for f in permutations_of(b.len()) {
            if edge_multiset(b, |i| sigma[i as usize - 1] as Letter + 1, &f) == target {
                return true;
            }
        }
    }
    false
}

/// Exhaustive search for an isomorphism of the unlabelled multigraphs.
pub fn brute_local(a: &QuantisedSystem, b: &QuantisedSystem) -> bool {
    if a.d() != b.d() || a.len() != b.len() {
        return false;
    }
    let id: Vec<usize> = (0..a.len()).collect();
    let target = edge_multiset(a, |_| 0, &id);
    permutations_of(b.len())
        .into_iter()
        .any(|f| edge_multiset(b, |_| 0, &f) == target)
}
