//! Truncated Fock representation and the operator identities it satisfies.
//!
//! Operators send the top level to zero, so identities are compared only on
//! interior basis vectors, those short enough that no word in the identity
//! can push them past the truncation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ideal::{MonomialIdeal, TypeK};
use crate::language::FactorAutomaton;
use crate::quantised::QuantisedSystem;
use crate::sparse::{SparseOp, SparseVec};
use crate::word::{Letter, Word};

/// Allowable words of length at most `depth`, in shortlex order.
#[derive(Clone, Debug)]
pub struct FockTruncation {
    ideal: MonomialIdeal,
    k: usize,
    depth: usize,
    basis: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl FockTruncation {
    pub fn new(ideal: &MonomialIdeal, depth: usize) -> Result<Self> {
        let TypeK::Finite(k) = ideal.type_k() else {
            return Err(Error::BoundRequired);
        };
        if depth == 0 {
            return Err(Error::TruncationTooShallow { depth, margin: 1 });
        }
        let basis = FactorAutomaton::build(ideal)?.enumerate_allowable(depth);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        Ok(FockTruncation {
            ideal: ideal.clone(),
            k,
            depth,
            basis,
            index,
        })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Indices of basis words of length at most `len`; a prefix of the basis.
    pub fn up_to(&self, len: usize) -> std::ops::Range<usize> {
        0..self.basis.partition_point(|w| w.len() <= len)
    }

    /// Interior indices for an identity involving words of length `margin`.
    pub fn interior(&self, margin: usize) -> Result<std::ops::Range<usize>> {
        if margin > self.depth {
            return Err(Error::TruncationTooShallow {
                depth: self.depth,
                margin,
            });
        }
        Ok(self.up_to(self.depth - margin))
    }

    /// `T_μ`: sends `e_ν` to `e_{μν}` when `μν` is allowable and fits.
    pub fn word_operator(&self, mu: &Word) -> SparseOp {
        assert!(
            mu.letters()
                .iter()
                .all(|&l| l >= 1 && l as usize <= self.ideal.d()),
            "letter outside alphabet in {mu}"
        );
        let entries = self.basis.iter().enumerate().filter_map(|(c, nu)| {
            let x = mu.concat(nu);
            if x.len() > self.depth || self.ideal.is_forbidden(x.letters()) {
                None
            } else {
                Some((self.index[&x], c, 1))
            }
        });
        SparseOp::from_entries(self.dim(), entries).expect("0/1 entries")
    }

    pub fn letter(&self, i: Letter) -> SparseOp {
        self.word_operator(&Word::single(i))
    }

    /// Projection onto the vacuum `e_∅`.
    pub fn vacuum_projection(&self) -> SparseOp {
        SparseOp::from_entries(self.dim(), [(0, 0, 1)]).expect("single entry")
    }

    fn interior_words(&self, max_len: usize) -> Vec<Word> {
        self.basis
            .iter()
            .filter(|w| !w.is_empty() && w.len() <= max_len)
            .cloned()
            .collect()
    }

    /// Checks the generator identities: range and source projections,
    /// orthogonal ranges, commutation, covariance, the identity
    /// decomposition, and generation of the matrix units.
    pub fn verify_generator_relations(&self) -> Result<RelationReport> {
        let w = self.k.max(1);
        let cols = self.interior(w + 1)?;
        let d = self.ideal.d() as Letter;
        let mut words = vec![Word::empty()];
        words.extend(self.interior_words(w));
        let ops = OpCache::new(
            self,
            words
                .iter()
                .cloned()
                .chain(words.iter().flat_map(|m| (1..=d).map(move |i| m.append(i)))),
        );
        let vac = self.vacuum_projection();
        let mut rep = RelationReport::new(self.depth, self.depth - (w + 1));

        let mut c = Check::new("source projections");
        for mu in &words {
            let (t, ts) = ops.get(mu);
            for j in cols.clone() {
                let x = &self.basis[j];
                let p = chain(&[ts, t], j)?;
                let expect = if self.ideal.is_allowable(mu.concat(x).letters()) {
                    SparseVec::unit(j)
                } else {
                    SparseVec::zero()
                };
                c.expect_eq(&p, &expect, || format!("T_{mu}*T_{mu} at e_{x}"));
                c.expect_eq(&chain(&[ts, t, ts, t], j)?, &p, || {
                    format!("(T_{mu}*T_{mu})^2 at e_{x}")
                });
            }
        }
        rep.push(c);

        let mut c = Check::new("range projections");
        for nu in &words {
            let (t, ts) = ops.get(nu);
            for j in cols.clone() {
                let x = &self.basis[j];
                let q = chain(&[t, ts], j)?;
                let expect = if x.prefix(nu.len()) == *nu {
                    SparseVec::unit(j)
                } else {
                    SparseVec::zero()
                };
                c.expect_eq(&q, &expect, || format!("T_{nu}T_{nu}* at e_{x}"));
                c.expect_eq(&chain(&[t, ts, t, ts], j)?, &q, || {
                    format!("(T_{nu}T_{nu}*)^2 at e_{x}")
                });
            }
        }
        rep.push(c);

        let mut c = Check::new("orthogonal ranges");
        for mu in &words {
            for nu in words.iter().filter(|nu| nu.len() == mu.len()) {
                let (_, mus) = ops.get(mu);
                let (nt, nts) = ops.get(nu);
                for j in cols.clone() {
                    let lhs = chain(&[mus, nt], j)?;
                    let expect = if mu == nu {
                        chain(&[nts, nt], j)?
                    } else {
                        SparseVec::zero()
                    };
                    c.expect_eq(&lhs, &expect, || {
                        format!("T_{mu}*T_{nu} at e_{}", self.basis[j])
                    });
                }
            }
            let (mt, mts) = ops.get(mu);
            c.expect(!chain(&[mts, mt], 0)?.is_zero(), || {
                format!("T_{mu}*T_{mu} vanishes on e_∅")
            });
        }
        rep.push(c);

        let mut c = Check::new("commutation");
        for mu in &words {
            let (mt, mts) = ops.get(mu);
            for nu in &words {
                let (nt, nts) = ops.get(nu);
                for j in cols.clone() {
                    let a = chain(&[mts, mt, nts, nt], j)?;
                    let b = chain(&[nts, nt, mts, mt], j)?;
                    c.expect_eq(&a, &b, || {
                        format!("[P_{mu}, P_{nu}] at e_{}", self.basis[j])
                    });
                    let a = chain(&[mts, mt, nt, nts], j)?;
                    let b = chain(&[nt, nts, mts, mt], j)?;
                    c.expect_eq(&a, &b, || {
                        format!("[P_{mu}, Q_{nu}] at e_{}", self.basis[j])
                    });
                }
            }
        }
        rep.push(c);

        let mut c = Check::new("covariance");
        for mu in &words {
            let (mt, mts) = ops.get(mu);
            for i in 1..=d {
                let (it, _) = ops.get(&Word::single(i));
                let mi = mu.append(i);
                let (mit, mits) = ops.get(&mi);
                for j in cols.clone() {
                    let a = chain(&[mts, mt, it], j)?;
                    let b = chain(&[it, mits, mit], j)?;
                    c.expect_eq(&a, &b, || {
                        format!("covariance for {mu},{i} at e_{}", self.basis[j])
                    });
                }
            }
        }
        rep.push(c);

        let mut c = Check::new("identity decomposition");
        let sum = self.row_sum(&ops)?;
        let total = sum.add(&vac)?;
        c.expect(total == SparseOp::identity(self.dim()), || {
            "sum T_iT_i* + P_∅ != I".into()
        });
        rep.push(c);

        let mut c = Check::new("matrix units");
        for mu in &words {
            let (mt, _) = ops.get(mu);
            for nu in &words {
                let (_, nts) = ops.get(nu);
                for j in cols.clone() {
                    let lhs = chain(&[mt, &vac, nts], j)?;
                    let expect = if self.basis[j] == *nu {
                        SparseVec::unit(self.index[mu])
                    } else {
                        SparseVec::zero()
                    };
                    c.expect_eq(&lhs, &expect, || {
                        format!("T_{mu}P_∅T_{nu}* at e_{}", self.basis[j])
                    });
                }
            }
        }
        rep.push(c);

        let mut c = Check::new("compacts generated");
        let defect = SparseOp::identity(self.dim()).sub(&sum)?;
        c.expect(defect == vac, || "I - sum T_iT_i* is not P_∅".into());
        let inner: Vec<Word> = self.basis[cols.clone()].to_vec();
        let units = OpCache::new(self, inner.iter().cloned());
        for mu in &inner {
            let (mt, _) = units.get(mu);
            for nu in &inner {
                let (_, nts) = units.get(nu);
                for j in cols.clone() {
                    let lhs = chain(&[mt, &defect, nts], j)?;
                    let expect = if self.basis[j] == *nu {
                        SparseVec::unit(self.index[mu])
                    } else {
                        SparseVec::zero()
                    };
                    c.expect_eq(&lhs, &expect, || {
                        format!("E_{mu},{nu} at e_{}", self.basis[j])
                    });
                }
            }
        }
        rep.push(c);
        Ok(rep)
    }

    fn row_sum(&self, ops: &OpCache) -> Result<SparseOp> {
        let mut sum = SparseOp::zeros(self.dim());
        for i in 1..=self.ideal.d() as Letter {
            let (t, ts) = ops.get(&Word::single(i));
            sum = sum.add(&t.mul(ts)?)?;
        }
        Ok(sum)
    }

    /// Diagonal entries of a diagonal operator grouped by class, read off
    /// basis words of length at most `max_len`.
    pub fn class_values(
        &self,
        system: &QuantisedSystem,
        op: &SparseOp,
        max_len: usize,
    ) -> Result<Vec<i64>> {
        if !op.is_diagonal() {
            return Err(Error::NotClassConstant("operator is not diagonal".into()));
        }
        let mut values: Vec<Option<i64>> = vec![None; system.len()];
        for j in self.up_to(max_len) {
            let c = system.class_of(&self.basis[j])?;
            let v = op.get(j, j);
            match values[c] {
                None => values[c] = Some(v),
                Some(prev) if prev != v => {
                    return Err(Error::NotClassConstant(format!(
                        "class {c} takes values {prev} and {v}"
                    )))
                }
                Some(_) => {}
            }
        }
        values
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                v.ok_or_else(|| Error::NotClassConstant(format!("class {c} not sampled")))
            })
            .collect()
    }
}

/// `T_μ` and `T_μ*` for a fixed set of words.
struct OpCache {
    ops: HashMap<Word, (SparseOp, SparseOp)>,
}

impl OpCache {
    fn new(fock: &FockTruncation, words: impl IntoIterator<Item = Word>) -> Self {
        let mut ops = HashMap::new();
        for w in words {
            ops.entry(w.clone()).or_insert_with(|| {
                let t = fock.word_operator(&w);
                let ts = t.adjoint();
                (t, ts)
            });
        }
        OpCache { ops }
    }

    fn get(&self, w: &Word) -> (&SparseOp, &SparseOp) {
        let (t, ts) = &self.ops[w];
        (t, ts)
    }
}

/// Applies `ops[0] ops[1] … ops[n-1]` to `e_j`.
fn chain(ops: &[&SparseOp], j: usize) -> Result<SparseVec> {
    let mut v = SparseVec::unit(j);
    for op in ops.iter().rev() {
        v = op.apply(&v)?;
    }
    Ok(v)
}

/// Outcome of one family of identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing instance, if any.
    pub first_failure: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Check = RelationCheck;

impl RelationCheck {
    fn new(name: &'static str) -> Self {
        RelationCheck {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn expect_eq(&mut self, a: &SparseVec, b: &SparseVec, what: impl FnOnce() -> String) {
        self.expect(a == b, what);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub depth: usize,
    /// Longest basis word on which interior identities were compared.
    pub interior_len: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    fn new(depth: usize, interior_len: usize) -> Self {
        RelationReport {
            depth,
            interior_len,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, c: RelationCheck) {
        self.checks.push(c);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks the covariance relations of the generators, the vacuum relation
/// through the kernel witnesses, and the finite-rank defect of
/// `T_i*T_i - Σ_{μ ∈ E_i} T_μT_μ*`, where `E_i` holds the words `μ` of length
/// `k` with `iμ` allowable.
pub fn verify_covariance_relations(ideal: &MonomialIdeal, depth: usize) -> Result<RelationReport> {
    let k = ideal.type_k().finite().ok_or(Error::InfiniteType)?;
    if depth < 2 * k + 2 {
        return Err(Error::TruncationTooShallow {
            depth,
            margin: 2 * k + 2,
        });
    }
    let fock = FockTruncation::new(ideal, depth)?;
    let d = ideal.d() as Letter;
    let w = k.max(1);
    let words: Vec<Word> = fock.interior_words(w);
    let letters: Vec<Word> = (1..=d).map(Word::single).collect();
    let ops = OpCache::new(&fock, words.iter().cloned().chain(letters.iter().cloned()));
    let n = fock.dim();
    let mut rep = RelationReport::new(depth, depth - w);

    let mut c = Check::new("commuting source projections");
    for mu in &words {
        let (t, ts) = ops.get(mu);
        let p = ts.mul(t)?;
        c.expect(
            p.is_diagonal() && p.diagonal().iter().all(|&v| v == 0 || v == 1),
            || format!("T_{mu}*T_{mu} is not a diagonal projection"),
        );
    }
    rep.push(c);

    let mut c = Check::new("orthogonality");
    for i in 1..=d {
        let (ti, tis) = ops.get(&Word::single(i));
        let src = tis.mul(ti)?;
        for j in 1..=d {
            let (_, tjs) = ops.get(&Word::single(j));
            let lhs = tjs.mul(ti)?;
            let ok = if i == j { lhs == src } else { lhs.is_zero() };
            c.expect(ok, || format!("T_{j}*T_{i}"));
        }
    }
    rep.push(c);

    let mut c = Check::new("source-range commutation");
    let cols = fock.interior(w)?;
    for mu in &words {
        let (mt, mts) = ops.get(mu);
        for l in &letters {
            let (it, its) = ops.get(l);
            for j in cols.clone() {
                let a = chain(&[mts, mt, it, its], j)?;
                let b = chain(&[it, its, mts, mt], j)?;
                c.expect_eq(&a, &b, || {
                    format!("[P_{mu}, T_{l}T_{l}*] at e_{}", fock.basis[j])
                });
            }
        }
    }
    rep.push(c);

    let sum = fock.row_sum(&ops)?;
    match ideal.kernel_witnesses()? {
        Some(mus) => {
            let mut c = Check::new("vacuum relation");
            let margin = mus.iter().map(Word::len).max().unwrap_or(0) + 1;
            let cols = fock.interior(margin)?;
            let cache = OpCache::new(&fock, mus.iter().cloned());
            let mut prod = SparseOp::identity(n);
            for mu in &mus {
                let (t, ts) = cache.get(mu);
                prod = prod.mul(&ts.mul(t)?)?;
            }
            let lhs = SparseOp::identity(n).sub(&prod)?;
            for j in cols {
                c.expect_eq(&lhs.col(j), &sum.col(j), || {
                    format!("vacuum relation at e_{}", fock.basis[j])
                });
            }
            rep.push(c);
        }
        None => {
            let mut c = Check::new("vacuum defect");
            let defect = SparseOp::identity(n).sub(&sum)?;
            c.expect(defect == fock.vacuum_projection(), || {
                "I - sum T_iT_i* is not P_∅".into()
            });
            rep.push(c);
        }
    }

    let mut c = Check::new("basis words vanish");
    for b in ideal.basis() {
        let mut prod = SparseOp::identity(n);
        for &a in b.letters() {
            prod = prod.mul(ops.get(&Word::single(a)).0)?;
        }
        c.expect(prod.is_zero(), || {
            format!("T_{b} built from letters is nonzero")
        });
    }
    rep.push(c);

    let mut c = Check::new("finite-rank defect");
    let inner = fock.interior(1)?;
    let low_dim = fock.up_to(k.saturating_sub(1)).len() * usize::from(k > 0);
    let level_k: Vec<Word> = fock
        .basis
        .iter()
        .filter(|x| x.len() == k)
        .cloned()
        .collect();
    let cache = OpCache::new(&fock, level_k.iter().cloned());
    for i in 1..=d {
        let (ti, tis) = ops.get(&Word::single(i));
        let mut diff = tis.mul(ti)?;
        for mu in level_k
            .iter()
            .filter(|mu| ideal.is_allowable(mu.prepend(i).letters()))
        {
            let (t, ts) = cache.get(mu);
            diff = diff.sub(&t.mul(ts)?)?;
        }
        let restricted = SparseOp::from_entries(
            n,
            diff.entries()
                .filter(|&(r, col, _)| inner.contains(&r) && inner.contains(&col)),
        )?;
        let rank = restricted.rank()?;
        c.expect(rank <= low_dim, || {
            format!("defect for letter {i} has rank {rank} > {low_dim}")
        });
    }
    rep.push(c);
    Ok(rep)
}

/// Norm of an operator. Exact (`norm_sq_exact`) when `op*op` is diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate {
    pub norm: f64,
    pub norm_sq_exact: Option<i64>,
    pub iterations: usize,
}

pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITERATIONS: usize = 20_000;

pub fn operator_norm(op: &SparseOp) -> Result<NormEstimate> {
    let m = op.adjoint().mul(op)?;
    if m.is_diagonal() {
        let max = m.diagonal().into_iter().max().unwrap_or(0);
        return Ok(NormEstimate {
            norm: (max as f64).sqrt(),
            norm_sq_exact: Some(max),
            iterations: 0,
        });
    }
    let n = m.dim();
    let mut x: Vec<f64> = (0..n).map(|j| 1.0 + (j % 7) as f64 / 10.0).collect();
    normalize(&mut x);
    let mut lambda = 0.0;
    for it in 1..=POWER_MAX_ITERATIONS {
        let mut y = vec![0.0; n];
        for (r, c, v) in m.entries() {
            y[r] += v as f64 * x[c];
        }
        let next: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        let size = normalize(&mut y);
        if size == 0.0 {
            return Ok(NormEstimate {
                norm: 0.0,
                norm_sq_exact: None,
                iterations: it,
            });
        }
        x = y;
        if (next - lambda).abs() <= POWER_TOLERANCE * next.abs().max(1.0) {
            return Ok(NormEstimate {
                norm: next.max(0.0).sqrt(),
                norm_sq_exact: None,
                iterations: it,
            });
        }
        lambda = next;
    }
    Err(Error::NoConvergence {
        estimate: lambda.max(0.0).sqrt(),
        iterations: POWER_MAX_ITERATIONS,
    })
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// Essential norm of a diagonal operator constant on classes: the largest
/// value over classes holding infinitely many words, or 0.
pub fn essential_norm_diagonal(system: &QuantisedSystem, class_values: &[f64]) -> Result<f64> {
    if class_values.len() != system.len() {
        return Err(Error::NotClassConstant(format!(
            "{} values for {} classes",
            class_values.len(),
            system.len()
        )));
    }
    if let Some(v) = class_values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::NotClassConstant(format!("invalid value {v}")));
    }
    Ok((0..system.len())
        .filter(|&c| system.is_infinite(c))
        .map(|c| class_values[c])
        .fold(0.0, f64::max))
}

/// Norms certifying a gap between the Fock algebra and its quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCheck {
    /// `‖T_{μ_1} + … + T_{μ_n}‖²`, computed on a Fock truncation.
    pub full_norm_sq: i64,
    /// Its essential counterpart, from class data.
    pub essential_norm_sq: i64,
}

/// Validates `words` (distinct, equal length, allowable, and every letter
/// `i` has some `μ` in the list with `μi` forbidden) and computes both norms
/// of `T = Σ T_μ`.
pub fn cenv_gap_check(ideal: &MonomialIdeal, words: &[Word]) -> Result<GapCheck> {
    let k = ideal.type_k().finite().ok_or(Error::InfiniteType)?;
    let violation = |w: &Word, reason: &str| Error::PreconditionViolation {
        word: w.clone(),
        reason: reason.to_string(),
    };
    let Some(first) = words.first() else {
        return Err(violation(&Word::empty(), "no words given"));
    };
    for (a, w) in words.iter().enumerate() {
        if w.len() != first.len() {
            return Err(violation(w, "lengths differ"));
        }
        if words[..a].contains(w) {
            return Err(violation(w, "words are not distinct"));
        }
        if w.letters()
            .iter()
            .any(|&l| l == 0 || l as usize > ideal.d())
        {
            return Err(violation(w, "letter outside alphabet"));
        }
        if ideal.is_forbidden(w.letters()) {
            return Err(violation(w, "word is forbidden"));
        }
    }
    for i in 1..=ideal.d() as Letter {
        if !words
            .iter()
            .any(|w| ideal.is_forbidden(w.append(i).letters()))
        {
            return Err(violation(
                &Word::single(i),
                "no word is blocked by this letter",
            ));
        }
    }
    let depth = first.len() + k + 1;
    let fock = FockTruncation::new(ideal, depth)?;
    let mut t = SparseOp::zeros(fock.dim());
    for w in words {
        t = t.add(&fock.word_operator(w))?;
    }
    let full = operator_norm(&t)?
        .norm_sq_exact
        .ok_or_else(|| Error::Invariant("T*T is not diagonal".into()))?;

    // T*T = Σ T_μ*T_μ; its value at ν counts the μ with μν allowable, which
    // depends only on the class of ν.
    let system = QuantisedSystem::build(ideal)?;
    let values: Vec<f64> = system
        .classes()
        .iter()
        .map(|cl| {
            words
                .iter()
                .filter(|w| ideal.is_allowable(w.concat(&cl.representative).letters()))
                .count() as f64
        })
        .collect();
    let essential = essential_norm_diagonal(&system, &values)? as i64;
    Ok(GapCheck {
        full_norm_sq: full,
        essential_norm_sq: essential,
    })
}
