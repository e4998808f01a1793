use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A letter of the alphabet `1..=d`.
pub type Letter = u16;

/// A finite word over `1..=d`. The empty word is allowed.
///
/// Ordering is shortlex: shorter words first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn single(letter: Letter) -> Self {
        Word(vec![letter])
    }

    /// Builds a word from a string of decimal digits, e.g. `"121"`.
    /// Returns `None` on any non-digit or on the digit `0`.
    pub fn from_digits(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c.to_digit(10) {
                Some(v) if v > 0 => Some(v as Letter),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Parses a word in spec syntax: digit strings when `d <= 9` (unless the
    /// text contains a comma), comma-separated integers otherwise.
    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let s = s.trim();
        let letters: Vec<u32> = if s.is_empty() {
            Vec::new()
        } else if d > 9 || s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Spec(format!("bad letter {t:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Spec(format!("bad letter {c:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        for &l in &letters {
            if l == 0 || l as usize > d {
                return Err(Error::InvalidLetter { letter: l, d });
            }
        }
        Ok(Word(letters.into_iter().map(|l| l as Letter).collect()))
    }

    /// Spec syntax for alphabet size `d`; the empty word renders as `""`.
    pub fn to_spec_string(&self, d: usize) -> String {
        if d > 9 {
            self.0
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        } else {
            self.0.iter().map(|l| l.to_string()).collect()
        }
    }

    /// Human label; the empty word renders as `∅`.
    pub fn label(&self, d: usize) -> String {
        if self.is_empty() {
            "∅".to_string()
        } else {
            self.to_spec_string(d)
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn append(&self, letter: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Word {
        let n = n.min(self.len());
        Word(self.0[self.len() - n..].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Repeats the word `n` times.
    pub fn power(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Applies a letter map given as `sigma[letter - 1]`.
    pub fn map_letters(&self, sigma: &[Letter]) -> Word {
        Word(self.0.iter().map(|&l| sigma[l as usize - 1]).collect())
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        contains_factor(&self.0, &factor.0)
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }
}

pub(crate) fn contains_factor(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let wide = self.0.iter().any(|&l| l > 9);
        for (i, l) in self.0.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

/// The family `{ u v^n w : n >= 1 }`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GeneratorPattern {
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

impl GeneratorPattern {
    pub fn new(u: Word, v: Word, w: Word) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyPatternBlock);
        }
        Ok(GeneratorPattern { u, v, w })
    }

    /// The member `u v^n w`.
    pub fn instance(&self, n: usize) -> Word {
        self.u.concat(&self.v.power(n)).concat(&self.w)
    }

    pub fn reversed(&self) -> GeneratorPattern {
        GeneratorPattern {
            u: self.w.reversed(),
            v: self.v.reversed(),
            w: self.u.reversed(),
        }
    }

    pub fn map_letters(&self, sigma: &[Letter]) -> GeneratorPattern {
        GeneratorPattern {
            u: self.u.map_letters(sigma),
            v: self.v.map_letters(sigma),
            w: self.w.map_letters(sigma),
        }
    }

    fn min_len(&self) -> usize {
        self.u.len() + self.v.len() + self.w.len()
    }

    /// True iff some member of the family occurs as a factor of `word`.
    pub fn occurs_in(&self, word: &[Letter]) -> bool {
        if word.len() < self.min_len() {
            return false;
        }
        (0..=word.len() - self.min_len()).any(|start| self.matches_at(word, start, false))
    }

    /// True iff `word` is itself a member of the family.
    pub fn is_instance(&self, word: &[Letter]) -> bool {
        word.len() >= self.min_len() && self.matches_at(word, 0, true)
    }

    fn matches_at(&self, word: &[Letter], start: usize, whole: bool) -> bool {
        let (u, v, w) = (self.u.letters(), self.v.letters(), self.w.letters());
        if !word[start..].starts_with(u) {
            return false;
        }
        let mut pos = start + u.len();
        while word[pos..].starts_with(v) {
            pos += v.len();
            let rest = &word[pos..];
            if rest.starts_with(w) && (!whole || rest.len() == w.len()) {
                return true;
            }
        }
        false
    }
}

impl fmt::Display for GeneratorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |w: &Word| {
            if w.is_empty() {
                String::new()
            } else {
                w.to_string()
            }
        };
        write!(f, "{}({})+{}", part(&self.u), self.v, part(&self.w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_digits(s).unwrap()
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w("21"), w("2"), Word::empty(), w("111"), w("12")];
        v.sort();
        assert_eq!(v, vec![Word::empty(), w("2"), w("12"), w("21"), w("111")]);
    }

    #[test]
    fn parse_digits_and_commas() {
        assert_eq!(Word::parse("121", 2).unwrap(), w("121"));
        assert_eq!(Word::parse("", 2).unwrap(), Word::empty());
        assert_eq!(Word::parse("10,2", 12).unwrap(), Word::new(vec![10, 2]));
        assert_eq!(
            Word::parse("13", 2),
            Err(Error::InvalidLetter { letter: 3, d: 2 })
        );
        assert!(Word::parse("1x", 2).is_err());
        assert_eq!(Word::new(vec![10, 2]).to_spec_string(12), "10,2");
    }

    #[test]
    fn pattern_scan() {
        let p = GeneratorPattern::new(w("1"), w("2"), w("1")).unwrap();
        assert!(p.occurs_in(w("2121").letters()));
        assert!(p.occurs_in(w("12221").letters()));
        assert!(!p.occurs_in(w("11").letters()));
        assert!(!p.occurs_in(w("1222").letters()));
        assert!(p.is_instance(w("1221").letters()));
        assert!(!p.is_instance(w("12212").letters()));
        assert_eq!(p.reversed(), p);
    }

    #[test]
    fn pattern_with_repeated_block() {
        let p = GeneratorPattern::new(Word::empty(), w("12"), w("2")).unwrap();
        assert!(p.occurs_in(w("1122").letters()));
        assert!(p.is_instance(w("12122").letters()));
        assert!(!p.is_instance(w("121").letters()));
    }
}
