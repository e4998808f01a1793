//! JSON ideal specs:
//! `{"d": 2, "generators": ["11","12"], "patterns": [{"u":"1","v":"2","w":"1"}]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::word::{GeneratorPattern, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(default)]
    pub u: String,
    pub v: String,
    #[serde(default)]
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub d: usize,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PatternSpec>,
}

impl IdealSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialises")
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        let d = self.d;
        if d == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let gens = self
            .generators
            .iter()
            .map(|g| Word::parse(g, d))
            .collect::<Result<Vec<_>>>()?;
        let pats = self
            .patterns
            .iter()
            .map(|p| {
                GeneratorPattern::new(
                    Word::parse(&p.u, d)?,
                    Word::parse(&p.v, d)?,
                    Word::parse(&p.w, d)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::from_generators(d, gens, pats)
    }

    /// An `IdealSpec` listing the ideal's basis and patterns.
    pub fn of_ideal(ideal: &MonomialIdeal) -> Self {
        let d = ideal.d();
        IdealSpec {
            d,
            generators: ideal.basis().iter().map(|w| w.to_spec_string(d)).collect(),
            patterns: ideal
                .patterns()
                .iter()
                .map(|p| PatternSpec {
                    u: p.u.to_spec_string(d),
                    v: p.v.to_spec_string(d),
                    w: p.w.to_spec_string(d),
                })
                .collect(),
        }
    }
}
