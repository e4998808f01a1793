use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph;
use crate::ideal::{MonomialIdeal, TypeK};
use crate::language::FactorAutomaton;
use crate::word::{Letter, Word};

/// Words `w` of length at most `l` with `w·nu` allowable.
pub fn predecessor_set(ideal: &MonomialIdeal, nu: &Word, l: usize) -> Result<Vec<Word>> {
    if ideal.is_forbidden(nu.letters()) {
        return Err(Error::ForbiddenWord(nu.clone()));
    }
    Ok(ideal
        .allowable_words_up_to(l)
        .into_iter()
        .filter(|w| ideal.is_allowable(w.concat(nu).letters()))
        .collect())
}

fn signature(ideal: &MonomialIdeal, sig_words: &[Word], nu: &Word) -> Vec<bool> {
    sig_words
        .iter()
        .map(|w| ideal.is_allowable(w.concat(nu).letters()))
        .collect()
}

/// One class of a partition of the allowable words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    /// Shortest, then lexicographically least, member.
    pub representative: Word,
    /// Membership bits over the partition's signature words.
    pub signature: Vec<bool>,
    /// Enumerated members (all allowable words up to the enumeration length).
    pub members: Vec<Word>,
    pub infinite: bool,
}

/// The quotient of the allowable words at a fixed level.
#[derive(Clone, Debug)]
pub struct Partition {
    pub level: usize,
    /// Allowable words of length at most `level`, indexing signature bits.
    pub signature_words: Vec<Word>,
    pub classes: Vec<OmegaClass>,
}

impl Partition {
    /// The class index of every enumerated member, keyed by member.
    pub fn grouping(&self) -> BTreeMap<Word, usize> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| cl.members.iter().map(move |m| (m.clone(), c)))
            .collect()
    }
}

fn group(
    members: &[Word],
    sigs: Vec<Vec<bool>>,
    signature_words: Vec<Word>,
    level: usize,
    infinite: impl Fn(&Word) -> bool,
) -> Partition {
    let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut classes: Vec<OmegaClass> = Vec::new();
    // Members arrive in shortlex order, so first-seen is the representative
    // and classes come out ordered by representative.
    for (m, sig) in members.iter().zip(sigs) {
        let c = *by_sig.entry(sig.clone()).or_insert_with(|| {
            classes.push(OmegaClass {
                representative: m.clone(),
                signature: sig,
                members: Vec::new(),
                infinite: false,
            });
            classes.len() - 1
        });
        classes[c].members.push(m.clone());
        if infinite(m) {
            classes[c].infinite = true;
        }
    }
    Partition {
        level,
        signature_words,
        classes,
    }
}

/// The partition of the allowable words by predecessor sets of words of
/// length at most `l`. Pattern ideals need `bound`, which caps the member
/// enumeration.
pub fn omega_level(ideal: &MonomialIdeal, l: usize, bound: Option<usize>) -> Result<Partition> {
    let (auto, member_len) = match (ideal.type_k(), bound) {
        (TypeK::Finite(k), _) => (FactorAutomaton::build(ideal)?, k),
        (TypeK::Infinite, Some(b)) => (FactorAutomaton::build_bounded(ideal, b), b),
        (TypeK::Infinite, None) => return Err(Error::BoundRequired),
    };
    let members = auto.enumerate_allowable(member_len);
    let sig_words = auto.enumerate_allowable(l);
    let sigs = members
        .iter()
        .map(|m| signature(ideal, &sig_words, m))
        .collect();
    let infinite = |m: &Word| {
        m.len() == member_len
            && match auto.bound() {
                None => auto.has_infinite_extensions(m).unwrap_or(false),
                Some(_) => true,
            }
    };
    Ok(group(&members, sigs, sig_words, l, infinite))
}

/// Finite quotient `Ω` with the partial maps given by prepending letters.
#[derive(Clone, Debug)]
pub struct QuantisedSystem {
    d: usize,
    level: usize,
    bound: Option<usize>,
    ideal: MonomialIdeal,
    signature_words: Vec<Word>,
    classes: Vec<OmegaClass>,
    lookup: HashMap<Vec<bool>, usize>,
    domains: Vec<Vec<usize>>,
    maps: Vec<Vec<Option<usize>>>,
}

impl QuantisedSystem {
    /// Builds the system of a finite-type ideal at level `k`.
    pub fn build(ideal: &MonomialIdeal) -> Result<Self> {
        let k = ideal.type_k().finite().ok_or(Error::BoundRequired)?;
        let part = omega_level(ideal, k, None)?;
        let next = omega_level(ideal, k + 1, None)?;
        if part.grouping() != next.grouping() {
            return Err(Error::Invariant(format!(
                "partition at level {k} differs from level {}",
                k + 1
            )));
        }
        Self::assemble(ideal, part, None)
    }

    /// Like [`build`](Self::build); pattern ideals detect the stabilisation
    /// level empirically among words of length at most `bound`, requiring
    /// two confirming levels.
    pub fn build_bounded(ideal: &MonomialIdeal, bound: usize) -> Result<Self> {
        if ideal.type_k() != TypeK::Infinite {
            return Self::build(ideal);
        }
        let auto = FactorAutomaton::build_bounded(ideal, bound);
        let members = auto.enumerate_allowable(bound);
        let mut groupings: Vec<Vec<usize>> = Vec::new();
        let mut sig_words: Vec<Word> = Vec::new();
        let mut sigs: Vec<Vec<bool>> = vec![Vec::new(); members.len()];
        let all_words = auto.enumerate_allowable(bound);
        for l in 0..=bound {
            let level_words: Vec<Word> =
                all_words.iter().filter(|w| w.len() == l).cloned().collect();
            for (m, sig) in members.iter().zip(sigs.iter_mut()) {
                sig.extend(
                    level_words
                        .iter()
                        .map(|w| ideal.is_allowable(w.concat(m).letters())),
                );
            }
            sig_words.extend(level_words);
            groupings.push(canonical_grouping(&sigs));
            if l >= 2 && groupings[l] == groupings[l - 1] && groupings[l] == groupings[l - 2] {
                let level = l - 2;
                let n = sig_words.iter().filter(|w| w.len() <= level).count();
                let sigs = sigs.iter().map(|s| s[..n].to_vec()).collect();
                let sw = sig_words[..n].to_vec();
                let part = group(&members, sigs, sw, level, |m| m.len() == bound);
                return Self::assemble(ideal, part, Some(bound));
            }
        }
        Err(Error::NotStabilized { bound })
    }

    fn assemble(ideal: &MonomialIdeal, part: Partition, bound: Option<usize>) -> Result<Self> {
        let d = ideal.d();
        let lookup: HashMap<Vec<bool>, usize> = part
            .classes
            .iter()
            .enumerate()
            .map(|(c, cl)| (cl.signature.clone(), c))
            .collect();
        let mut sys = QuantisedSystem {
            d,
            level: part.level,
            bound,
            ideal: ideal.clone(),
            signature_words: part.signature_words,
            classes: part.classes,
            lookup,
            domains: vec![Vec::new(); d],
            maps: vec![Vec::new(); d],
        };
        for i in 1..=d as Letter {
            let mut map = Vec::with_capacity(sys.classes.len());
            for c in 0..sys.classes.len() {
                let x = sys.classes[c].representative.prepend(i);
                if ideal.is_allowable(x.letters()) {
                    let t = sys.class_of(&x).map_err(|_| match bound {
                        Some(b) => Error::NotStabilized { bound: b },
                        None => Error::Invariant(format!("no class for {x}")),
                    })?;
                    sys.domains[i as usize - 1].push(c);
                    map.push(Some(t));
                } else {
                    map.push(None);
                }
            }
            sys.maps[i as usize - 1] = map;
        }
        Ok(sys)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `Some(B)` when the system was detected among words of length at most `B`.
    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[OmegaClass] {
        &self.classes
    }

    pub fn representative(&self, c: usize) -> &Word {
        &self.classes[c].representative
    }

    pub fn is_infinite(&self, c: usize) -> bool {
        self.classes[c].infinite
    }

    pub fn signature_words(&self) -> &[Word] {
        &self.signature_words
    }

    /// Sorted classes in the domain of letter `i`.
    pub fn domain(&self, i: Letter) -> &[usize] {
        &self.domains[i as usize - 1]
    }

    pub fn in_domain(&self, i: Letter, c: usize) -> bool {
        self.maps[i as usize - 1][c].is_some()
    }

    pub fn phi(&self, i: Letter, c: usize) -> Option<usize> {
        self.maps[i as usize - 1][c]
    }

    /// Letters whose domain contains `c`.
    pub fn support(&self, c: usize) -> Vec<Letter> {
        (1..=self.d as Letter)
            .filter(|&i| self.in_domain(i, c))
            .collect()
    }

    /// Class of an allowable word.
    pub fn class_of(&self, word: &Word) -> Result<usize> {
        if self.ideal.is_forbidden(word.letters()) {
            return Err(Error::ForbiddenWord(word.clone()));
        }
        let sig = signature(&self.ideal, &self.signature_words, word);
        self.lookup
            .get(&sig)
            .copied()
            .ok_or_else(|| Error::Invariant(format!("no class for {word}")))
    }

    /// Checks that prepending a letter to any two members of a class lands
    /// in the same class, over allowable words of length at most `max_len`.
    pub fn check_well_defined(&self, max_len: usize) -> Result<()> {
        for nu in self.ideal.allowable_words_up_to(max_len) {
            let c = self.class_of(&nu)?;
            for i in 1..=self.d as Letter {
                let x = nu.prepend(i);
                let direct = if self.ideal.is_allowable(x.letters()) {
                    Some(self.class_of(&x)?)
                } else {
                    None
                };
                if direct != self.phi(i, c) {
                    return Err(Error::Invariant(format!(
                        "prepending {i} to {nu} disagrees with the class map"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Decides whether `mu` is forbidden from the dynamics alone: the
    /// composite of the maps for the letters of `mu`, last letter first,
    /// has empty domain.
    pub fn forbidden_via_dynamics(&self, mu: &Word) -> bool {
        let mut alive: Vec<bool> = vec![true; self.len()];
        for &a in mu.letters().iter().rev() {
            let mut next = vec![false; self.len()];
            for c in (0..self.len()).filter(|&c| alive[c]) {
                if let Some(t) = self.phi(a, c) {
                    next[t] = true;
                }
            }
            alive = next;
        }
        !alive.iter().any(|&x| x)
    }

    pub fn graph(&self) -> LabeledDigraph {
        let mut edges = Vec::new();
        for c in 0..self.len() {
            for i in 1..=self.d as Letter {
                if let Some(t) = self.phi(i, c) {
                    edges.push((c, t, i));
                }
            }
        }
        LabeledDigraph {
            d: self.d,
            vertices: self
                .classes
                .iter()
                .map(|c| c.representative.clone())
                .collect(),
            edges,
        }
    }

    /// Finds, for each class `c`, words `w` (nonempty) and `z` with
    /// `w^n z ν` allowable for every `n` and every `ν` in `c`.
    pub fn check_auto_continuity(&self) -> AutoContinuity {
        let g = self.graph();
        let adj = g.adjacency();
        let cyc = graph::on_cycle(&adj);
        let pairs: Vec<(usize, usize)> = g.edges.iter().map(|&(s, t, _)| (s, t)).collect();
        let labels = |path: &[usize]| -> Word {
            Word::new(path.iter().rev().map(|&e| g.edges[e].2).collect())
        };
        let mut witnesses = Vec::with_capacity(self.len());
        for c in 0..self.len() {
            let best = (0..self.len())
                .filter(|&v| cyc[v])
                .filter_map(|v| {
                    graph::shortest_path(self.len(), &pairs, c, v, true).map(|p| (p, v))
                })
                .min_by_key(|(p, v)| (p.len(), *v));
            let Some((path, v)) = best else {
                return AutoContinuity::Fails { class: c };
            };
            let cycle = graph::shortest_path(self.len(), &pairs, v, v, false)
                .expect("vertex lies on a cycle");
            witnesses.push((labels(&cycle), labels(&path)));
        }
        AutoContinuity::Holds { witnesses }
    }

    /// Groups classes by which letters they admit. Keys are bit strings
    /// `m_1 … m_d`; only nonempty supports are listed.
    pub fn q_projection_supports(&self) -> QSupports {
        let mut map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for c in 0..self.len() {
            map.entry(self.support_pattern(c)).or_default().push(c);
        }
        QSupports { d: self.d, map }
    }

    /// The bit string `m_1 … m_d` with `m_i = 1` iff `c` is in the domain of `i`.
    pub fn support_pattern(&self, c: usize) -> String {
        (1..=self.d as Letter)
            .map(|i| if self.in_domain(i, c) { '1' } else { '0' })
            .collect()
    }
}

fn canonical_grouping(sigs: &[Vec<bool>]) -> Vec<usize> {
    let mut ids: HashMap<&[bool], usize> = HashMap::new();
    sigs.iter()
        .map(|s| {
            let n = ids.len();
            *ids.entry(s.as_slice()).or_insert(n)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutoContinuity {
    /// One `(w, z)` per class.
    Holds { witnesses: Vec<(Word, Word)> },
    /// A class with no path to a cycle.
    Fails { class: usize },
}

impl AutoContinuity {
    pub fn holds(&self) -> bool {
        matches!(self, AutoContinuity::Holds { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSupports {
    d: usize,
    map: BTreeMap<String, Vec<usize>>,
}

impl QSupports {
    /// Classes with support pattern `pattern`; empty when none.
    pub fn support(&self, pattern: &str) -> &[usize] {
        self.map.get(pattern).map_or(&[], Vec::as_slice)
    }

    pub fn nonempty(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.map
    }

    /// Classes admitting no letter, i.e. the left sinks.
    pub fn sink_classes(&self) -> &[usize] {
        self.support(&"0".repeat(self.d))
    }
}

/// The graph of an ideal: one vertex per class, an edge `c -> φ_i(c)`
/// labelled `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub d: usize,
    pub vertices: Vec<Word>,
    /// `(source, target, label)`, sorted by source then label.
    pub edges: Vec<(usize, usize, Letter)>,
}

impl LabeledDigraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(s, t, _) in &self.edges {
            adj[s].push(t);
        }
        adj
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quantised {\n    node [shape=circle];\n");
        for (v, rep) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "    c{v} [label=\"{}\"];", escape(&rep.label(self.d)));
        }
        for &(s, t, l) in &self.edges {
            let _ = writeln!(out, "    c{s} -> c{t} [label=\"{l}\"];");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
