use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph;
use crate::ideal::{MonomialIdeal, TypeK};
use crate::word::{Letter, Word};

/// Deterministic recognizer of the allowable words of an ideal.
///
/// A state is keyed by the last `window` letters read (fewer at the start).
/// Finite type uses `window = k`, which makes the automaton exact. Pattern
/// ideals use the exploration bound as window; the result then only sees
/// forbidden words of length at most `bound + 1`.
#[derive(Clone, Debug)]
pub struct FactorAutomaton {
    d: usize,
    window: usize,
    bound: Option<usize>,
    keys: Vec<Word>,
    trans: Vec<Option<usize>>,
    reaches_cycle: Vec<bool>,
}

impl FactorAutomaton {
    pub fn build(ideal: &MonomialIdeal) -> Result<Self> {
        match ideal.type_k() {
            TypeK::Finite(k) => Ok(Self::construct(ideal, k, None)),
            TypeK::Infinite => Err(Error::BoundRequired),
        }
    }

    /// As [`build`](Self::build), but pattern ideals are accepted with the
    /// given exploration bound. Finite-type ideals ignore the bound.
    pub fn build_bounded(ideal: &MonomialIdeal, bound: usize) -> Self {
        match ideal.type_k() {
            TypeK::Finite(k) => Self::construct(ideal, k, None),
            TypeK::Infinite => Self::construct(ideal, bound, Some(bound)),
        }
    }

    fn construct(ideal: &MonomialIdeal, window: usize, bound: Option<usize>) -> Self {
        let d = ideal.d();
        let mut keys = vec![Word::empty()];
        let mut index: HashMap<Word, usize> = HashMap::from([(Word::empty(), 0)]);
        let mut trans = Vec::new();
        let mut s = 0;
        while s < keys.len() {
            for a in 1..=d as Letter {
                let x = keys[s].append(a);
                let t = if ideal.is_forbidden(x.letters()) {
                    None
                } else {
                    let key = x.suffix(window);
                    let next = keys.len();
                    Some(*index.entry(key.clone()).or_insert_with(|| {
                        keys.push(key);
                        next
                    }))
                };
                trans.push(t);
            }
            s += 1;
        }
        let adj: Vec<Vec<usize>> = (0..keys.len())
            .map(|s| {
                trans[s * d..(s + 1) * d]
                    .iter()
                    .flatten()
                    .copied()
                    .collect()
            })
            .collect();
        let reaches_cycle = graph::reaches_cycle(&adj);
        FactorAutomaton {
            d,
            window,
            bound,
            keys,
            trans,
            reaches_cycle,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `Some(B)` when answers are only sound for words of length at most `B`.
    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn num_states(&self) -> usize {
        self.keys.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state_key(&self, s: usize) -> &Word {
        &self.keys[s]
    }

    pub fn state_reaches_cycle(&self, s: usize) -> bool {
        self.reaches_cycle[s]
    }

    /// Transition on letter `a`; `None` is the dead state.
    pub fn step(&self, s: usize, a: Letter) -> Option<usize> {
        self.trans[s * self.d + a as usize - 1]
    }

    pub fn run(&self, word: &[Letter]) -> Option<usize> {
        word.iter()
            .try_fold(self.initial(), |s, &a| self.step(s, a))
    }

    pub fn is_allowable(&self, word: &Word) -> bool {
        self.run(word.letters()).is_some()
    }

    /// Allowable words of length at most `max_len`, in shortlex order.
    pub fn enumerate_allowable(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut level = vec![(Word::empty(), self.initial())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, s) in &level {
                for a in 1..=self.d as Letter {
                    if let Some(t) = self.step(*s, a) {
                        next.push((w.append(a), t));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            level = next;
        }
        out
    }

    /// Number of allowable words of length exactly `n`.
    pub fn count_allowable(&self, n: usize) -> Result<u128> {
        let mut v = vec![0u128; self.num_states()];
        v[self.initial()] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; self.num_states()];
            for (s, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for a in 1..=self.d as Letter {
                    if let Some(t) = self.step(s, a) {
                        next[t] = next[t]
                            .checked_add(c)
                            .ok_or(Error::Overflow("count_allowable"))?;
                    }
                }
            }
            v = next;
        }
        v.into_iter()
            .try_fold(0u128, |acc, c| acc.checked_add(c))
            .ok_or(Error::Overflow("count_allowable"))
    }

    /// True iff infinitely many allowable words start with `word`.
    pub fn has_infinite_extensions(&self, word: &Word) -> Result<bool> {
        match self.run(word.letters()) {
            Some(s) => Ok(self.reaches_cycle[s]),
            None => Err(Error::ForbiddenWord(word.clone())),
        }
    }
}
