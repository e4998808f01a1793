use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::word::{contains_factor, GeneratorPattern, Letter, Word};

/// Largest basis-word length minus one, or `Infinite` when a pattern
/// contributes infinitely many basis words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeK {
    Finite(usize),
    Infinite,
}

impl TypeK {
    pub fn finite(self) -> Option<usize> {
        match self {
            TypeK::Finite(k) => Some(k),
            TypeK::Infinite => None,
        }
    }
}

impl fmt::Display for TypeK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeK::Finite(k) => write!(f, "{k}"),
            TypeK::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubshiftClass {
    TwoSided,
    LeftOnly,
    RightOnly,
    NotSubshift,
}

impl SubshiftClass {
    fn from_sinks(left: bool, right: bool) -> Self {
        match (left, right) {
            (false, false) => SubshiftClass::TwoSided,
            (false, true) => SubshiftClass::LeftOnly,
            (true, false) => SubshiftClass::RightOnly,
            (true, true) => SubshiftClass::NotSubshift,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SubshiftClass::TwoSided => "TwoSided",
            SubshiftClass::LeftOnly => "LeftOnly",
            SubshiftClass::RightOnly => "RightOnly",
            SubshiftClass::NotSubshift => "NotSubshift",
        }
    }
}

/// A monomial ideal in `d` noncommuting variables, stored through its
/// minimal forbidden words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    d: usize,
    basis: BTreeSet<Word>,
    patterns: Vec<GeneratorPattern>,
    type_k: TypeK,
}

impl MonomialIdeal {
    pub fn zero(d: usize) -> Result<Self> {
        Self::from_generators(d, Vec::new(), Vec::new())
    }

    /// Builds the ideal generated by `generators` and `patterns` and reduces
    /// it to its minimal basis.
    pub fn from_generators(
        d: usize,
        generators: impl IntoIterator<Item = Word>,
        patterns: impl IntoIterator<Item = GeneratorPattern>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let check_letters = |w: &Word| -> Result<()> {
            match w.letters().iter().find(|&&l| l == 0 || l as usize > d) {
                Some(&l) => Err(Error::InvalidLetter {
                    letter: l as u32,
                    d,
                }),
                None => Ok(()),
            }
        };
        let gens: BTreeSet<Word> = generators.into_iter().collect();
        for g in &gens {
            check_letters(g)?;
            if g.len() < 2 {
                return Err(Error::DegenerateGenerator(g.clone()));
            }
        }
        let mut pats: Vec<GeneratorPattern> = patterns.into_iter().collect();
        pats.sort();
        pats.dedup();
        for p in &pats {
            check_letters(&p.u)?;
            check_letters(&p.v)?;
            check_letters(&p.w)?;
            if p.v.is_empty() {
                return Err(Error::EmptyPatternBlock);
            }
            let first = p.instance(1);
            if first.len() < 2 {
                return Err(Error::DegenerateGenerator(first));
            }
        }

        let raw = MonomialIdeal {
            d,
            basis: gens.clone(),
            patterns: pats.clone(),
            type_k: TypeK::Infinite,
        };
        let mut basis: BTreeSet<Word> = gens
            .iter()
            .filter(|g| raw.is_minimal_forbidden(g.letters()))
            .cloned()
            .collect();

        // A pattern whose long members all contain a shorter forbidden word
        // only contributes finitely many basis words; those become plain.
        let plain_max = gens.iter().map(Word::len).max().unwrap_or(0);
        let pat_total: usize = pats.iter().map(|p| p.u.len() + p.v.len() + p.w.len()).sum();
        let mut infinite = Vec::new();
        for p in &pats {
            let threshold = 2 * (plain_max + pat_total) / p.v.len() + 8;
            let mut tail_minimal = false;
            for n in 1..=3 * threshold {
                let inst = p.instance(n);
                if raw.is_minimal_forbidden(inst.letters()) {
                    if n > threshold {
                        tail_minimal = true;
                        break;
                    }
                    basis.insert(inst);
                }
            }
            if tail_minimal {
                infinite.push(p.clone());
            }
        }
        if !infinite.is_empty() {
            // Keep only the plain words that are minimal for the full family.
            basis.retain(|b| !infinite.iter().any(|p| p.is_instance(b.letters())));
        }
        let type_k = if infinite.is_empty() {
            TypeK::Finite(basis.iter().map(Word::len).max().map_or(0, |m| m - 1))
        } else {
            TypeK::Infinite
        };
        Ok(MonomialIdeal {
            d,
            basis,
            patterns: infinite,
            type_k,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Plain minimal forbidden words. For infinite type the pattern members
    /// are held separately in [`patterns`](Self::patterns).
    pub fn basis(&self) -> &BTreeSet<Word> {
        &self.basis
    }

    pub fn patterns(&self) -> &[GeneratorPattern] {
        &self.patterns
    }

    pub fn type_k(&self) -> TypeK {
        self.type_k
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty() && self.patterns.is_empty()
    }

    pub fn is_forbidden(&self, word: &[Letter]) -> bool {
        self.basis
            .iter()
            .any(|b| contains_factor(word, b.letters()))
            || self.patterns.iter().any(|p| p.occurs_in(word))
    }

    pub fn is_allowable(&self, word: &[Letter]) -> bool {
        !self.is_forbidden(word)
    }

    fn is_minimal_forbidden(&self, word: &[Letter]) -> bool {
        let n = word.len();
        n > 0
            && self.is_forbidden(word)
            && !self.is_forbidden(&word[..n - 1])
            && !self.is_forbidden(&word[1..])
    }

    /// All minimal forbidden words of length at most `max_len`, including
    /// pattern members, in shortlex order.
    pub fn basis_words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out: BTreeSet<Word> = self
            .basis
            .iter()
            .filter(|b| b.len() <= max_len)
            .cloned()
            .collect();
        for p in &self.patterns {
            for n in 1.. {
                let inst = p.instance(n);
                if inst.len() > max_len {
                    break;
                }
                if self.is_minimal_forbidden(inst.letters()) {
                    out.insert(inst);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Allowable words of length at most `max_len` in shortlex order.
    pub fn allowable_words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut level = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &level {
                for a in 1..=self.d as Letter {
                    let x = w.append(a);
                    if self.is_allowable(x.letters()) {
                        next.push(x);
                    }
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// For each letter `i`, the stem `μ_i` of the shortest (then least) basis
    /// word ending in `i`; `μ_i` is allowable and `μ_i i` is forbidden.
    /// `None` when some letter ends no basis word.
    pub fn kernel_witnesses(&self) -> Result<Option<Vec<Word>>> {
        if self.type_k == TypeK::Infinite {
            return Err(Error::InfiniteType);
        }
        Ok((1..=self.d as Letter)
            .map(|i| {
                self.basis
                    .iter()
                    .find(|b| b.last() == Some(i))
                    .map(|b| b.prefix(b.len() - 1))
            })
            .collect())
    }

    /// Letters that end no basis word: appending them never creates a
    /// forbidden word.
    pub fn free_right_letters(&self) -> Vec<Letter> {
        (1..=self.d as Letter)
            .filter(|&i| {
                !self.basis.iter().any(|b| b.last() == Some(i))
                    && !self
                        .patterns
                        .iter()
                        .any(|p| p.instance(1).last() == Some(i))
            })
            .collect()
    }

    pub fn reverse(&self) -> MonomialIdeal {
        MonomialIdeal {
            d: self.d,
            basis: self.basis.iter().map(Word::reversed).collect(),
            patterns: {
                let mut p: Vec<_> = self
                    .patterns
                    .iter()
                    .map(GeneratorPattern::reversed)
                    .collect();
                p.sort();
                p
            },
            type_k: self.type_k,
        }
    }

    /// Renames letters by `sigma[letter - 1]`, which must be a permutation.
    pub fn permute(&self, sigma: &[Letter]) -> MonomialIdeal {
        assert_eq!(sigma.len(), self.d, "permutation length must equal d");
        MonomialIdeal {
            d: self.d,
            basis: self.basis.iter().map(|w| w.map_letters(sigma)).collect(),
            patterns: {
                let mut p: Vec<_> = self.patterns.iter().map(|p| p.map_letters(sigma)).collect();
                p.sort();
                p
            },
            type_k: self.type_k,
        }
    }

    fn is_sink(&self, w: &Word, side: Side) -> bool {
        (1..=self.d as Letter).all(|i| {
            let x = match side {
                Side::Left => w.prepend(i),
                Side::Right => w.append(i),
            };
            self.is_forbidden(x.letters())
        })
    }

    /// Shortlex-least sink on `side`. Complete for finite type: a sink's
    /// length-k prefix (left) or suffix (right) is again a sink.
    pub fn find_sink(&self, side: Side) -> Result<Option<Word>> {
        match self.type_k {
            TypeK::Finite(k) => Ok(self.find_sink_within(side, k)),
            TypeK::Infinite => Err(Error::UnboundedSearch),
        }
    }

    /// Shortlex-least sink among allowable words of length at most `bound`.
    pub fn find_sink_within(&self, side: Side, bound: usize) -> Option<Word> {
        self.allowable_words_up_to(bound)
            .into_iter()
            .find(|w| self.is_sink(w, side))
    }

    pub fn subshift_class(&self) -> Result<SubshiftClass> {
        let left = self.find_sink(Side::Left)?.is_some();
        let right = self.find_sink(Side::Right)?.is_some();
        Ok(SubshiftClass::from_sinks(left, right))
    }

    /// Sink search restricted to words of length at most `bound`; a verdict
    /// of "no sink" is only sound up to that length for infinite type.
    pub fn subshift_class_within(&self, bound: usize) -> SubshiftClass {
        let left = self.find_sink_within(Side::Left, bound).is_some();
        let right = self.find_sink_within(Side::Right, bound).is_some();
        SubshiftClass::from_sinks(left, right)
    }

    /// Membership of a scalar point in the zero set: `‖z‖ <= 1` and every
    /// basis monomial vanishes at `z`. Returns false when `z.len() != d`.
    pub fn zero_set_member(&self, z: &[Complex64]) -> bool {
        if z.len() != self.d {
            return false;
        }
        let norm_sq: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq > 1.0 + 1e-12 {
            return false;
        }
        let vanishes = |w: &Word| {
            w.letters()
                .iter()
                .any(|&l| z[l as usize - 1] == Complex64::new(0.0, 0.0))
        };
        self.basis.iter().all(vanishes)
            && self
                .patterns
                .iter()
                .all(|p| vanishes(&p.u) || vanishes(&p.v) || vanishes(&p.w))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .basis
            .iter()
            .map(|w| w.to_spec_string(self.d))
            .collect();
        parts.extend(self.patterns.iter().map(|p| p.to_string()));
        write!(f, "<{}> (d={})", parts.join(","), self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_digits(s).unwrap()
    }

    fn ideal(d: usize, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::from_generators(d, gens.iter().map(|s| w(s)), vec![]).unwrap()
    }

    #[test]
    fn basis_and_type() {
        let i = ideal(2, &["11", "12"]);
        assert_eq!(
            i.basis().iter().cloned().collect::<Vec<_>>(),
            vec![w("11"), w("12")]
        );
        assert_eq!(i.type_k(), TypeK::Finite(1));

        let z = ideal(2, &[]);
        assert!(z.basis().is_empty());
        assert_eq!(z.type_k(), TypeK::Finite(0));

        let r = ideal(2, &["12", "212", "2122"]);
        assert_eq!(r.basis().iter().cloned().collect::<Vec<_>>(), vec![w("12")]);
        assert_eq!(r.type_k(), TypeK::Finite(1));
    }

    #[test]
    fn rejects_bad_generators() {
        assert_eq!(
            MonomialIdeal::from_generators(2, vec![w("1")], vec![]),
            Err(Error::DegenerateGenerator(w("1")))
        );
        assert_eq!(
            MonomialIdeal::from_generators(2, vec![w("13")], vec![]),
            Err(Error::InvalidLetter { letter: 3, d: 2 })
        );
        assert_eq!(MonomialIdeal::zero(0), Err(Error::EmptyAlphabet));
        let p = GeneratorPattern::new(Word::empty(), w("1"), Word::empty()).unwrap();
        assert!(matches!(
            MonomialIdeal::from_generators(2, vec![], vec![p]),
            Err(Error::DegenerateGenerator(_))
        ));
    }

    #[test]
    fn pattern_type() {
        let p = GeneratorPattern::new(w("1"), w("2"), w("1")).unwrap();
        let i = MonomialIdeal::from_generators(2, vec![], vec![p.clone()]).unwrap();
        assert_eq!(i.type_k(), TypeK::Infinite);
        assert_eq!(i.reverse().patterns(), std::slice::from_ref(&p));
        assert_eq!(
            i.basis_words_up_to(5),
            vec![w("121"), w("1221"), w("12221")]
        );

        // 22 kills every member beyond 121.
        let j = MonomialIdeal::from_generators(2, vec![w("22")], vec![p]).unwrap();
        assert_eq!(j.type_k(), TypeK::Finite(2));
        assert_eq!(
            j.basis().iter().cloned().collect::<Vec<_>>(),
            vec![w("22"), w("121")]
        );

        // (12)+ collapses to its first member.
        let q = GeneratorPattern::new(Word::empty(), w("12"), Word::empty()).unwrap();
        let k = MonomialIdeal::from_generators(2, vec![], vec![q]).unwrap();
        assert_eq!(k.type_k(), TypeK::Finite(1));
        assert_eq!(k.basis().iter().cloned().collect::<Vec<_>>(), vec![w("12")]);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(ideal(2, &["12"]).reverse(), ideal(2, &["21"]));
        assert_eq!(ideal(2, &["11", "22"]).reverse(), ideal(2, &["11", "22"]));
    }

    #[test]
    fn sinks_and_classes() {
        let a = ideal(2, &["12", "21"]);
        assert_eq!(a.find_sink(Side::Left).unwrap(), None);
        assert_eq!(a.find_sink(Side::Right).unwrap(), None);
        assert_eq!(a.subshift_class().unwrap(), SubshiftClass::TwoSided);

        let b = ideal(2, &["11", "12"]);
        assert_eq!(b.find_sink(Side::Right).unwrap(), Some(w("1")));
        assert_eq!(b.find_sink(Side::Left).unwrap(), None);
        assert_eq!(b.subshift_class().unwrap(), SubshiftClass::LeftOnly);
        assert_eq!(
            b.reverse().subshift_class().unwrap(),
            SubshiftClass::RightOnly
        );

        let z = ideal(2, &[]);
        assert_eq!(z.find_sink(Side::Left).unwrap(), None);
        assert_eq!(z.subshift_class().unwrap(), SubshiftClass::TwoSided);

        let all = ideal(2, &["11", "12", "21", "22"]);
        assert_eq!(all.subshift_class().unwrap(), SubshiftClass::NotSubshift);
    }

    #[test]
    fn pattern_sink_search_needs_bound() {
        let p = GeneratorPattern::new(w("1"), w("2"), w("1")).unwrap();
        let i = MonomialIdeal::from_generators(2, vec![], vec![p]).unwrap();
        assert_eq!(i.find_sink(Side::Left), Err(Error::UnboundedSearch));
        assert_eq!(i.subshift_class_within(8), SubshiftClass::TwoSided);
    }

    #[test]
    fn kernel_witness_scan() {
        assert_eq!(
            ideal(2, &["12", "21"]).kernel_witnesses().unwrap(),
            Some(vec![w("2"), w("1")])
        );
        assert_eq!(
            ideal(2, &["11", "12"]).kernel_witnesses().unwrap(),
            Some(vec![w("1"), w("1")])
        );
        assert_eq!(ideal(2, &["11"]).kernel_witnesses().unwrap(), None);
        assert_eq!(ideal(2, &["11"]).free_right_letters(), vec![2]);
        assert_eq!(ideal(2, &[]).free_right_letters(), vec![1, 2]);
    }

    #[test]
    fn zero_set() {
        let a = ideal(2, &["12", "21"]);
        let c = |re: f64| Complex64::new(re, 0.0);
        assert!(a.zero_set_member(&[c(1.0), c(0.0)]));
        let s = 1.0 / 2f64.sqrt();
        assert!(!a.zero_set_member(&[c(s), c(s)]));
        assert!(!a.zero_set_member(&[c(2.0), c(0.0)]));
        let z = ideal(2, &[]);
        assert!(z.zero_set_member(&[c(s), c(s)]));
        assert!(z.zero_set_member(&[c(0.3), Complex64::new(0.0, -0.4)]));
    }
}
