//! Fixture ideals shared by the benchmarks.

use monoqd_core::{MonomialIdeal, Word};

pub fn ideal(d: usize, gens: &[&str]) -> MonomialIdeal {
    MonomialIdeal::from_generators(
        d,
        gens.iter()
            .map(|s| Word::from_digits(s).expect("digit word")),
        Vec::new(),
    )
    .expect("valid fixture")
}

/// The pair of 4-letter ideals whose graphs differ only in one label.
pub fn four_letter_pair() -> (MonomialIdeal, MonomialIdeal) {
    (
        ideal(
            4,
            &[
                "11", "12", "13", "21", "22", "24", "31", "32", "33", "41", "42", "44",
            ],
        ),
        ideal(
            4,
            &[
                "11", "12", "13", "14", "21", "22", "31", "32", "33", "41", "42", "44",
            ],
        ),
    )
}
