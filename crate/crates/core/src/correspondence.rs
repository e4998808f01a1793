//! Finite model of the correspondence over the functions on `Ω`, with its
//! kernel, Katsura ideal, dichotomy and envelope verdicts, and block-matrix
//! witnesses for unitary equivalence.

use serde::{Deserialize, Serialize};

use crate::equivalence::{locally_conjugate, LocalWitness};
use crate::error::{Error, Result};
use crate::fock::FockTruncation;
use crate::ideal::{MonomialIdeal, Side, TypeK};
use crate::quantised::QuantisedSystem;
use crate::sparse::SparseOp;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kernel {
    Zero,
    /// Spanned by the vacuum projection; `witnesses[i - 1]` is an allowable
    /// word `μ_i` with `μ_i i` forbidden.
    SpanOfVacuum {
        witnesses: Vec<Word>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Katsura {
    FullAlgebra,
    ComplementOfVacuum,
}

/// `1 - T_μ*T_μ` seen as the indicator of the classes `c` with `μ·rep(c)`
/// forbidden.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JGenerator {
    pub word: Word,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CorrespondenceModel {
    pub system: QuantisedSystem,
    pub kernel: Kernel,
    pub katsura: Katsura,
    /// Distinct nonzero generators, first word in shortlex order kept.
    pub relative_j_generators: Vec<JGenerator>,
    /// No left sinks: the correspondence is full.
    pub full: bool,
    pub zero_ideal: bool,
}

pub fn correspondence_model(ideal: &MonomialIdeal) -> Result<CorrespondenceModel> {
    let TypeK::Finite(k) = ideal.type_k() else {
        return Err(Error::BoundRequired);
    };
    let system = QuantisedSystem::build(ideal)?;
    let kernel = match ideal.kernel_witnesses()? {
        None => Kernel::Zero,
        Some(witnesses) => {
            verify_vacuum_product(ideal, k, &witnesses)?;
            Kernel::SpanOfVacuum { witnesses }
        }
    };
    let katsura = match kernel {
        Kernel::Zero => Katsura::FullAlgebra,
        Kernel::SpanOfVacuum { .. } => Katsura::ComplementOfVacuum,
    };
    let mut relative_j_generators: Vec<JGenerator> = Vec::new();
    for mu in system.signature_words().iter().filter(|w| !w.is_empty()) {
        let support: Vec<usize> = (0..system.len())
            .filter(|&c| ideal.is_forbidden(mu.concat(system.representative(c)).letters()))
            .collect();
        if !support.is_empty() && !relative_j_generators.iter().any(|g| g.support == support) {
            relative_j_generators.push(JGenerator {
                word: mu.clone(),
                support,
            });
        }
    }
    let full = ideal.find_sink(Side::Left)?.is_none();
    Ok(CorrespondenceModel {
        system,
        kernel,
        katsura,
        relative_j_generators,
        full,
        zero_ideal: ideal.is_zero(),
    })
}

/// Checks `P_∅ = Π T_{μ_i}*T_{μ_i}` on the interior of a Fock truncation.
fn verify_vacuum_product(ideal: &MonomialIdeal, k: usize, mus: &[Word]) -> Result<()> {
    let margin = mus.iter().map(Word::len).max().unwrap_or(0);
    let fock = FockTruncation::new(ideal, margin + k + 2)?;
    let mut prod = SparseOp::identity(fock.dim());
    for mu in mus {
        let t = fock.word_operator(mu);
        prod = prod.mul(&t.adjoint().mul(&t)?)?;
    }
    let vac = fock.vacuum_projection();
    for j in fock.interior(margin)? {
        if prod.col(j) != vac.col(j) {
            return Err(Error::Invariant(format!(
                "vacuum product fails at e_{}",
                fock.basis()[j]
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    /// The Cuntz-Pimsner algebra is the Fock C*-algebra itself.
    ToeplitzFock,
    /// The Cuntz-Pimsner algebra is the Fock C*-algebra modulo compacts.
    CuntzQuotient,
}

impl Dichotomy {
    pub fn name(self) -> &'static str {
        match self {
            Dichotomy::ToeplitzFock => "OE_equals_Toeplitz_CstarT",
            Dichotomy::CuntzQuotient => "OE_equals_Cuntz_quotient",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DichotomyVerdict {
    pub branch: Dichotomy,
    /// The Fock C*-algebra is the Toeplitz-Pimsner algebra (zero ideal only).
    pub fock_is_toeplitz_pimsner: bool,
}

pub fn dichotomy_verdict(model: &CorrespondenceModel) -> DichotomyVerdict {
    DichotomyVerdict {
        branch: match model.kernel {
            Kernel::Zero => Dichotomy::CuntzQuotient,
            Kernel::SpanOfVacuum { .. } => Dichotomy::ToeplitzFock,
        },
        fock_is_toeplitz_pimsner: model.zero_ideal,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Envelope {
    /// Some letter can be appended to every allowable word.
    Cuntz {
        letter: Letter,
    },
    /// Equal-length words `μ_i` with `μ_i i` forbidden.
    Toeplitz {
        words: Vec<Word>,
    },
    Inconclusive,
}

impl Envelope {
    pub fn name(&self) -> &'static str {
        match self {
            Envelope::Cuntz { .. } => "CuntzEnvelope",
            Envelope::Toeplitz { .. } => "ToeplitzEnvelope",
            Envelope::Inconclusive => "Inconclusive",
        }
    }

    /// The distinct words of a Toeplitz verdict, in first-seen order.
    pub fn gap_words(&self) -> Vec<Word> {
        let Envelope::Toeplitz { words } = self else {
            return Vec::new();
        };
        let mut out: Vec<Word> = Vec::new();
        for w in words {
            if !out.contains(w) {
                out.push(w.clone());
            }
        }
        out
    }
}

pub fn cenv_verdict(ideal: &MonomialIdeal) -> Result<Envelope> {
    if ideal.type_k() == TypeK::Infinite {
        return Err(Error::InfiniteType);
    }
    if let Some(&letter) = ideal.free_right_letters().first() {
        return Ok(Envelope::Cuntz { letter });
    }
    let words = ideal
        .kernel_witnesses()?
        .ok_or_else(|| Error::Invariant("every letter ends a basis word but no witness".into()))?;
    let target = words.iter().map(Word::len).max().unwrap_or(0);
    if words.iter().all(|w| w.len() == target) {
        return Ok(Envelope::Toeplitz { words });
    }
    if ideal.find_sink(Side::Left)?.is_some() {
        return Ok(Envelope::Inconclusive);
    }
    let d = ideal.d() as Letter;
    let padded = words
        .into_iter()
        .map(|mut w| {
            while w.len() < target {
                w = (1..=d)
                    .map(|a| w.prepend(a))
                    .find(|x| ideal.is_allowable(x.letters()))
                    .ok_or_else(|| Error::Invariant(format!("{w} is a left sink")))?;
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Envelope::Toeplitz { words: padded })
}

/// A unitary between the two correspondences: a class bijection `gamma`
/// (classes of `J` to classes of `I`) and 0/1 functions `b[i-1][j-1][c]` on
/// the classes of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMatrixWitness {
    pub gamma: Vec<usize>,
    pub b: Vec<Vec<Vec<bool>>>,
}

impl BlockMatrixWitness {
    pub fn from_local(w: &LocalWitness, d: usize) -> Self {
        let n = w.vertex_map.len();
        let mut b = vec![vec![vec![false; n]; d]; d];
        for (c, pairs) in w.bijections.iter().enumerate() {
            for &(i, j) in pairs {
                b[i as usize - 1][j as usize - 1][c] = true;
            }
        }
        BlockMatrixWitness {
            gamma: w.vertex_map.clone(),
            b,
        }
    }

    /// Re-checks calibration, pointwise unitarity and intertwining.
    pub fn verify(
        &self,
        sys_i: &QuantisedSystem,
        sys_j: &QuantisedSystem,
    ) -> std::result::Result<(), String> {
        let d = sys_j.d();
        let n = sys_j.len();
        if sys_i.d() != d || sys_i.len() != n {
            return Err("systems differ in size".into());
        }
        let mut seen = vec![false; n];
        if self.gamma.len() != n
            || !self
                .gamma
                .iter()
                .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        {
            return Err("gamma is not a bijection".into());
        }
        if self.b.len() != d
            || self
                .b
                .iter()
                .any(|row| row.len() != d || row.iter().any(|f| f.len() != n))
        {
            return Err("b has the wrong shape".into());
        }
        for c in 0..n {
            let g = self.gamma[c];
            for i in 1..=d as Letter {
                for j in 1..=d as Letter {
                    if self.b[i as usize - 1][j as usize - 1][c]
                        && !(sys_j.in_domain(i, c) && sys_i.in_domain(j, g))
                    {
                        return Err(format!("b_{i}{j} is not calibrated at class {c}"));
                    }
                }
            }
            let rows = sys_j.support(c);
            let cols = sys_i.support(g);
            if rows.len() != cols.len() {
                return Err(format!("supports at class {c} differ in size"));
            }
            for &i in &rows {
                let hits = cols
                    .iter()
                    .filter(|&&j| self.b[i as usize - 1][j as usize - 1][c])
                    .count();
                if hits != 1 {
                    return Err(format!("row {i} at class {c} has {hits} entries"));
                }
            }
            for &j in &cols {
                let hits = rows
                    .iter()
                    .filter(|&&i| self.b[i as usize - 1][j as usize - 1][c])
                    .count();
                if hits != 1 {
                    return Err(format!("column {j} at class {c} has {hits} entries"));
                }
            }
            for &i in &rows {
                for &j in &cols {
                    if !self.b[i as usize - 1][j as usize - 1][c] {
                        continue;
                    }
                    let left = sys_j.phi(i, c).map(|t| self.gamma[t]);
                    let right = sys_i.phi(j, g);
                    // Compare against every indicator function on Ω_I.
                    for x in 0..n {
                        if (left == Some(x)) != (right == Some(x)) {
                            return Err(format!("b_{i}{j} fails to intertwine at class {c}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn unitary_equivalence(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
) -> Result<Option<BlockMatrixWitness>> {
    let si = QuantisedSystem::build(i)?;
    let sj = QuantisedSystem::build(j)?;
    Ok(unitary_equivalence_of(&si, &sj))
}

/// As [`unitary_equivalence`], for already-built systems.
pub fn unitary_equivalence_of(
    si: &QuantisedSystem,
    sj: &QuantisedSystem,
) -> Option<BlockMatrixWitness> {
    locally_conjugate(si, sj).map(|w| BlockMatrixWitness::from_local(&w, sj.d()))
}
