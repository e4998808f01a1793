use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ideal::MonomialIdeal;
use crate::iso::{self, ColoredGraph};
use crate::quantised::QuantisedSystem;
use crate::word::Letter;

/// A letter permutation `sigma` (as `sigma[a - 1]`) with
/// `sigma(basis(I)) = basis(J)`, trying permutations in lexicographic order.
pub fn permutation_equal(i: &MonomialIdeal, j: &MonomialIdeal) -> Option<Vec<Letter>> {
    let d = i.d();
    if d != j.d()
        || i.basis().len() != j.basis().len()
        || i.patterns().len() != j.patterns().len()
        || i.type_k() != j.type_k()
    {
        return None;
    }
    let pi = letter_profiles(i);
    let pj = letter_profiles(j);
    let mut sigma = vec![0 as Letter; d];
    let mut used = vec![false; d];
    fn go(
        a: usize,
        i: &MonomialIdeal,
        j: &MonomialIdeal,
        pi: &[Vec<(usize, usize, usize)>],
        pj: &[Vec<(usize, usize, usize)>],
        sigma: &mut [Letter],
        used: &mut [bool],
    ) -> bool {
        if a == sigma.len() {
            return &i.permute(sigma) == j;
        }
        for b in 0..sigma.len() {
            if used[b] || pi[a] != pj[b] {
                continue;
            }
            used[b] = true;
            sigma[a] = b as Letter + 1;
            if go(a + 1, i, j, pi, pj, sigma, used) {
                return true;
            }
            used[b] = false;
        }
        false
    }
    go(0, i, j, &pi, &pj, &mut sigma, &mut used).then_some(sigma)
}

/// Per letter, the sorted occurrences `(part, word length, position)` in
/// the basis and patterns; a renaming must preserve them.
fn letter_profiles(ideal: &MonomialIdeal) -> Vec<Vec<(usize, usize, usize)>> {
    let mut prof = vec![Vec::new(); ideal.d()];
    let mut record = |part: usize, w: &crate::word::Word| {
        for (pos, &a) in w.letters().iter().enumerate() {
            prof[a as usize - 1].push((part, w.len(), pos));
        }
    };
    for w in ideal.basis() {
        record(0, w);
    }
    for p in ideal.patterns() {
        record(1, &p.u);
        record(2, &p.v);
        record(3, &p.w);
    }
    for p in &mut prof {
        p.sort_unstable();
    }
    prof
}

/// A conjugacy between the systems of `I` and `J`: `label_permutation[i - 1]`
/// is the letter of `I` matched with letter `i` of `J`, and `vertex_map[c]`
/// is the class of `I` matched with class `c` of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyWitness {
    pub label_permutation: Vec<Letter>,
    pub vertex_map: Vec<usize>,
}

impl ConjugacyWitness {
    /// Re-checks the witness against both systems point by point.
    pub fn verify(&self, sys_i: &QuantisedSystem, sys_j: &QuantisedSystem) -> Result<(), String> {
        let d = sys_j.d();
        if sys_i.d() != d || self.label_permutation.len() != d {
            return Err("alphabet sizes differ".into());
        }
        if !is_bijection(
            &self
                .label_permutation
                .iter()
                .map(|&a| a as usize - 1)
                .collect::<Vec<_>>(),
            d,
        ) {
            return Err("labels are not a permutation".into());
        }
        if sys_i.len() != sys_j.len() || !is_bijection(&self.vertex_map, sys_i.len()) {
            return Err("vertex map is not a bijection".into());
        }
        for i in 1..=d as Letter {
            let s = self.label_permutation[i as usize - 1];
            let mut image: Vec<usize> = sys_j
                .domain(i)
                .iter()
                .map(|&c| self.vertex_map[c])
                .collect();
            image.sort_unstable();
            if image != sys_i.domain(s) {
                return Err(format!(
                    "domain of letter {i} is not carried onto domain of {s}"
                ));
            }
            for &c in sys_j.domain(i) {
                let lhs = sys_j.phi(i, c).map(|t| self.vertex_map[t]);
                let rhs = sys_i.phi(s, self.vertex_map[c]);
                if lhs != rhs {
                    return Err(format!("letter {i} at class {c} does not intertwine"));
                }
            }
        }
        Ok(())
    }

    /// The witness for the swapped pair.
    pub fn inverse(&self) -> ConjugacyWitness {
        ConjugacyWitness {
            label_permutation: invert(
                &self
                    .label_permutation
                    .iter()
                    .map(|&a| a as usize - 1)
                    .collect::<Vec<_>>(),
            )
            .into_iter()
            .map(|a| a as Letter + 1)
            .collect(),
            vertex_map: invert(&self.vertex_map),
        }
    }

    /// Every conjugacy is a local conjugacy with constant label bijections.
    pub fn to_local(&self, sys_j: &QuantisedSystem) -> LocalWitness {
        LocalWitness {
            vertex_map: self.vertex_map.clone(),
            bijections: (0..sys_j.len())
                .map(|c| {
                    sys_j
                        .support(c)
                        .into_iter()
                        .map(|i| (i, self.label_permutation[i as usize - 1]))
                        .collect()
                })
                .collect(),
        }
    }
}

/// A local conjugacy: `vertex_map[c]` is the class of `I` matched with class
/// `c` of `J`, and `bijections[c]` pairs each letter `i` admitted at `c` with
/// a letter `j` admitted at `vertex_map[c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWitness {
    pub vertex_map: Vec<usize>,
    pub bijections: Vec<Vec<(Letter, Letter)>>,
}

impl LocalWitness {
    pub fn verify(&self, sys_i: &QuantisedSystem, sys_j: &QuantisedSystem) -> Result<(), String> {
        if sys_i.len() != sys_j.len() || !is_bijection(&self.vertex_map, sys_i.len()) {
            return Err("vertex map is not a bijection".into());
        }
        if self.bijections.len() != sys_j.len() {
            return Err("one label bijection per class required".into());
        }
        for (c, pairs) in self.bijections.iter().enumerate() {
            let x = self.vertex_map[c];
            let mut left: Vec<Letter> = pairs.iter().map(|p| p.0).collect();
            let mut right: Vec<Letter> = pairs.iter().map(|p| p.1).collect();
            left.sort_unstable();
            right.sort_unstable();
            if left != sys_j.support(c) || right != sys_i.support(x) {
                return Err(format!(
                    "label bijection at class {c} does not match supports"
                ));
            }
            for &(i, j) in pairs {
                let lhs = sys_j.phi(i, c).map(|t| self.vertex_map[t]);
                if lhs.is_none() || lhs != sys_i.phi(j, x) {
                    return Err(format!("letters ({i},{j}) at class {c} do not intertwine"));
                }
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> LocalWitness {
        let vm = invert(&self.vertex_map);
        let bijections = (0..vm.len())
            .map(|x| {
                let mut pairs: Vec<_> = self.bijections[vm[x]]
                    .iter()
                    .map(|&(i, j)| (j, i))
                    .collect();
                pairs.sort_unstable();
                pairs
            })
            .collect();
        LocalWitness {
            vertex_map: vm,
            bijections,
        }
    }
}

fn is_bijection(f: &[usize], n: usize) -> bool {
    if f.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    f.iter()
        .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

fn invert(f: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; f.len()];
    for (a, &b) in f.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

fn edge_graph(sys: &QuantisedSystem, colour: impl Fn(Letter) -> u32) -> ColoredGraph {
    ColoredGraph {
        n: sys.len(),
        edges: sys
            .graph()
            .edges
            .into_iter()
            .map(|(s, t, l)| (s, t, colour(l)))
            .collect(),
    }
}

/// Decides conjugacy of the two systems, up to a global renaming of letters.
pub fn conjugate(sys_i: &QuantisedSystem, sys_j: &QuantisedSystem) -> Option<ConjugacyWitness> {
    let d = sys_j.d();
    if sys_i.d() != d || sys_i.len() != sys_j.len() {
        return None;
    }
    let gi = edge_graph(sys_i, |l| l as u32);
    let size_i: Vec<usize> = (1..=d as Letter).map(|a| sys_i.domain(a).len()).collect();
    let size_j: Vec<usize> = (1..=d as Letter).map(|a| sys_j.domain(a).len()).collect();
    let mut sigma = vec![0 as Letter; d];
    let mut used = vec![false; d];

    fn go(
        a: usize,
        sys_j: &QuantisedSystem,
        gi: &ColoredGraph,
        size_i: &[usize],
        size_j: &[usize],
        sigma: &mut [Letter],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        if a == sigma.len() {
            let gj = edge_graph(sys_j, |l| sigma[l as usize - 1] as u32);
            return iso::isomorphism(&gj, gi);
        }
        for b in 0..sigma.len() {
            if used[b] || size_i[b] != size_j[a] {
                continue;
            }
            used[b] = true;
            sigma[a] = b as Letter + 1;
            if let Some(f) = go(a + 1, sys_j, gi, size_i, size_j, sigma, used) {
                return Some(f);
            }
            used[b] = false;
        }
        None
    }

    let f = go(0, sys_j, &gi, &size_i, &size_j, &mut sigma, &mut used)?;
    Some(ConjugacyWitness {
        label_permutation: sigma,
        vertex_map: f,
    })
}

/// Decides whether the unlabelled graphs of the systems are isomorphic as
/// multigraphs, and pairs the labels edge by edge.
pub fn locally_conjugate(sys_i: &QuantisedSystem, sys_j: &QuantisedSystem) -> Option<LocalWitness> {
    if sys_i.d() != sys_j.d() || sys_i.len() != sys_j.len() {
        return None;
    }
    let gj = edge_graph(sys_j, |_| 0);
    let gi = edge_graph(sys_i, |_| 0);
    let f = iso::isomorphism(&gj, &gi)?;
    let labels_by_target = |sys: &QuantisedSystem, c: usize| -> BTreeMap<usize, Vec<Letter>> {
        let mut m: BTreeMap<usize, Vec<Letter>> = BTreeMap::new();
        for i in sys.support(c) {
            m.entry(sys.phi(i, c).expect("in support"))
                .or_default()
                .push(i);
        }
        m
    };
    let bijections = (0..sys_j.len())
        .map(|c| {
            let on_i = labels_by_target(sys_i, f[c]);
            let mut pairs = Vec::new();
            for (t, ls) in labels_by_target(sys_j, c) {
                let ms = &on_i[&f[t]];
                pairs.extend(ls.iter().copied().zip(ms.iter().copied()));
            }
            pairs.sort_unstable();
            pairs
        })
        .collect();
    Some(LocalWitness {
        vertex_map: f,
        bijections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn ideal(d: usize, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::from_generators(
            d,
            gens.iter().map(|s| Word::from_digits(s).unwrap()),
            vec![],
        )
        .unwrap()
    }

    fn sys(i: &MonomialIdeal) -> QuantisedSystem {
        QuantisedSystem::build(i).unwrap()
    }

    #[test]
    fn permutation_examples() {
        let sq = ideal(2, &["11", "22"]);
        let alt = ideal(2, &["12", "21"]);
        assert_eq!(permutation_equal(&sq, &sq), Some(vec![1, 2]));
        assert_eq!(permutation_equal(&sq, &alt), None);
        assert_eq!(
            permutation_equal(&ideal(2, &["12"]), &ideal(2, &["21"])),
            Some(vec![2, 1])
        );
        assert_eq!(permutation_equal(&sq, &ideal(3, &["11", "22"])), None);
    }

    #[test]
    fn squares_and_alternating_are_not_conjugate() {
        let (a, b) = (sys(&ideal(2, &["11", "22"])), sys(&ideal(2, &["12", "21"])));
        assert!(conjugate(&a, &b).is_none());
        assert!(locally_conjugate(&a, &b).is_none());
        let w = conjugate(&a, &a).unwrap();
        assert_eq!(w.label_permutation, vec![1, 2]);
        assert_eq!(w.vertex_map, vec![0, 1, 2]);
        w.verify(&a, &a).unwrap();
    }

    #[test]
    fn swapped_letters_give_swapped_witness() {
        let i = ideal(2, &["12"]);
        let j = ideal(2, &["21"]);
        let (si, sj) = (sys(&i), sys(&j));
        let w = conjugate(&si, &sj).unwrap();
        w.verify(&si, &sj).unwrap();
        assert_eq!(w.label_permutation, vec![2, 1]);
        w.inverse().verify(&sj, &si).unwrap();
        let l = w.to_local(&sj);
        l.verify(&si, &sj).unwrap();
        l.inverse().verify(&sj, &si).unwrap();
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let s = sys(&ideal(2, &["11", "22"]));
        let bad = ConjugacyWitness {
            label_permutation: vec![1, 2],
            vertex_map: vec![0, 2, 1],
        };
        assert!(bad.verify(&s, &s).is_err());
        let mut l = locally_conjugate(&s, &s).unwrap();
        l.verify(&s, &s).unwrap();
        l.bijections[0] = vec![(1, 2), (2, 1)];
        assert!(l.verify(&s, &s).is_err());
    }
}
