//! Report building for the `monoqd` command line tool.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use monoqd_core::corpus::{permutations, standard_corpus};
use monoqd_core::spec::PatternSpec;
use monoqd_core::{
    cenv_gap_check, cenv_verdict, conjugate, correspondence_model, dichotomy_verdict,
    locally_conjugate, permutation_equal, unitary_equivalence_of, verify_covariance_relations,
    AutoContinuity, BlockMatrixWitness, ConjugacyWitness, Error, FockTruncation, IdealSpec,
    Katsura, Kernel, Letter, LocalWitness, MonomialIdeal, QuantisedSystem, RelationReport, Side,
    TypeK, Word,
};
use serde::{Deserialize, Serialize};

/// Why a command stopped, mapped onto the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Unreadable or malformed input.
    Parse(String),
    /// Well-formed input outside what the tool decides.
    Unsupported(String),
    /// A cross-check that must hold did not.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Unsupported(m) => write!(f, "unsupported: {m}"),
            Failure::Internal(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::EmptyAlphabet
            | Error::InvalidLetter { .. }
            | Error::DegenerateGenerator(_)
            | Error::EmptyPatternBlock
            | Error::Spec(_) => Failure::Parse(msg),
            Error::UnboundedSearch
            | Error::BoundRequired
            | Error::InfiniteType
            | Error::NotStabilized { .. }
            | Error::TruncationTooShallow { .. }
            | Error::ForbiddenWord(_)
            | Error::PreconditionViolation { .. } => Failure::Unsupported(msg),
            Error::NoConvergence { .. }
            | Error::NotClassConstant(_)
            | Error::Overflow(_)
            | Error::Invariant(_) => Failure::Internal(msg),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Fock truncation depth `L`.
    pub fock_depth: usize,
    /// Exploration bound for pattern ideals; 0 means none.
    pub bound: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fock_depth: 6,
            bound: 8,
        }
    }
}

pub fn load_spec(path: &Path) -> CliResult<MonomialIdeal> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Ok(IdealSpec::from_json(&text)?.to_ideal()?)
}

/// Builds the exact system, or the bounded snapshot for pattern ideals.
pub fn build_system(ideal: &MonomialIdeal, opts: Options) -> CliResult<QuantisedSystem> {
    match ideal.type_k() {
        TypeK::Finite(_) => Ok(QuantisedSystem::build(ideal)?),
        TypeK::Infinite if opts.bound == 0 => Err(Error::BoundRequired.into()),
        TypeK::Infinite => Ok(QuantisedSystem::build_bounded(ideal, opts.bound)?),
    }
}

fn label(w: &Word, d: usize) -> String {
    w.label(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealEcho {
    pub d: usize,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PatternSpec>,
    /// Decimal type, or "infinite".
    #[serde(rename = "type")]
    pub type_k: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sinks {
    pub left: Option<String>,
    pub right: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: usize,
    pub representative: String,
    pub infinite: bool,
    /// Bit `i` set when the class lies in the domain of letter `i + 1`.
    pub support: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRow {
    pub letter: Letter,
    pub domain: Vec<usize>,
    /// `[c, φ(c)]` for each `c` in the domain.
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantisedSummary {
    pub size: usize,
    pub level: usize,
    /// Present for pattern ideals, whose system is only explored up to it.
    pub bound: Option<usize>,
    pub classes: Vec<ClassRow>,
    pub maps: Vec<MapRow>,
    pub q_supports: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoficVerdict {
    pub finite_omega: bool,
    /// False when the answer only covers words up to the bound.
    pub exact: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JGeneratorRow {
    pub word: String,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub words: Vec<String>,
    pub full_norm_sq: i64,
    pub essential_norm_sq: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceSummary {
    pub kernel: String,
    pub kernel_witnesses: Vec<String>,
    pub katsura: String,
    pub full: bool,
    pub relative_j_generators: Vec<JGeneratorRow>,
    pub dichotomy: String,
    pub fock_is_toeplitz_pimsner: bool,
    pub envelope: String,
    pub envelope_words: Vec<String>,
    pub gap: Option<GapRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoContinuityRow {
    pub holds: bool,
    /// `[w, z]` per class when it holds.
    pub witnesses: Vec<[String; 2]>,
    pub counterexample: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRows {
    pub depth: usize,
    pub interior_len: usize,
    pub checks: Vec<CheckRow>,
}

impl From<&RelationReport> for RelationRows {
    fn from(r: &RelationReport) -> Self {
        RelationRows {
            depth: r.depth,
            interior_len: r.interior_len,
            checks: r
                .checks
                .iter()
                .map(|c| CheckRow {
                    name: c.name.to_string(),
                    cases: c.cases,
                    failures: c.failures,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSummary {
    pub generator_relations: RelationRows,
    pub covariance_relations: Option<RelationRows>,
    /// Why the covariance relations were not checked.
    pub covariance_skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub ideal: IdealEcho,
    /// Set when answers hold only for words up to the bound.
    pub caveat: Option<String>,
    pub subshift_class: String,
    pub sinks: Sinks,
    pub quantised: QuantisedSummary,
    pub sofic: SoficVerdict,
    pub correspondence: Option<CorrespondenceSummary>,
    pub auto_continuity: AutoContinuityRow,
    pub fock: Option<FockSummary>,
}

fn relation_failure(what: &str, r: &RelationReport) -> CliResult<()> {
    match r.checks.iter().find(|c| !c.passed()) {
        None => Ok(()),
        Some(c) => Err(Failure::Internal(format!(
            "{what} '{}' failed {} of {} cases, first at {}",
            c.name,
            c.failures,
            c.cases,
            c.first_failure.as_deref().unwrap_or("?")
        ))),
    }
}

fn quantised_summary(sys: &QuantisedSystem) -> QuantisedSummary {
    let d = sys.d();
    QuantisedSummary {
        size: sys.len(),
        level: sys.level(),
        bound: sys.bound(),
        classes: (0..sys.len())
            .map(|c| ClassRow {
                class: c,
                representative: label(sys.representative(c), d),
                infinite: sys.is_infinite(c),
                support: sys.support_pattern(c),
            })
            .collect(),
        maps: (1..=d as Letter)
            .map(|i| MapRow {
                letter: i,
                domain: sys.domain(i).to_vec(),
                edges: sys
                    .domain(i)
                    .iter()
                    .map(|&c| [c, sys.phi(i, c).expect("in domain")])
                    .collect(),
            })
            .collect(),
        q_supports: sys.q_projection_supports().nonempty().clone(),
    }
}

fn correspondence_summary(ideal: &MonomialIdeal) -> CliResult<CorrespondenceSummary> {
    let d = ideal.d();
    let model = correspondence_model(ideal)?;
    let verdict = dichotomy_verdict(&model);
    let env = cenv_verdict(ideal)?;
    let words = env.gap_words();
    let gap = if words.is_empty() {
        None
    } else {
        let g = cenv_gap_check(ideal, &words)?;
        if g.full_norm_sq - g.essential_norm_sq < 1 {
            return Err(Failure::Internal(format!("no norm gap for {ideal}: {g:?}")));
        }
        Some(GapRow {
            words: words.iter().map(|w| label(w, d)).collect(),
            full_norm_sq: g.full_norm_sq,
            essential_norm_sq: g.essential_norm_sq,
        })
    };
    let (kernel, kernel_witnesses) = match &model.kernel {
        Kernel::Zero => ("Zero", Vec::new()),
        Kernel::SpanOfVacuum { witnesses } => (
            "SpanOfVacuum",
            witnesses.iter().map(|w| label(w, d)).collect(),
        ),
    };
    Ok(CorrespondenceSummary {
        kernel: kernel.into(),
        kernel_witnesses,
        katsura: match model.katsura {
            Katsura::FullAlgebra => "FullAlgebra",
            Katsura::ComplementOfVacuum => "ComplementOfVacuum",
        }
        .into(),
        full: model.full,
        relative_j_generators: model
            .relative_j_generators
            .iter()
            .map(|g| JGeneratorRow {
                word: label(&g.word, d),
                support: g.support.clone(),
            })
            .collect(),
        dichotomy: verdict.branch.name().into(),
        fock_is_toeplitz_pimsner: verdict.fock_is_toeplitz_pimsner,
        envelope: env.name().into(),
        envelope_words: match &env {
            monoqd_core::Envelope::Toeplitz { words } => {
                words.iter().map(|w| label(w, d)).collect()
            }
            monoqd_core::Envelope::Cuntz { letter } => vec![letter.to_string()],
            monoqd_core::Envelope::Inconclusive => Vec::new(),
        },
        gap,
    })
}

fn fock_summary(ideal: &MonomialIdeal, k: usize, depth: usize) -> CliResult<FockSummary> {
    let fock = FockTruncation::new(ideal, depth)?;
    let gen = fock.verify_generator_relations()?;
    relation_failure("generator relation", &gen)?;
    let need = 2 * k + 2;
    let (covariance_relations, covariance_skipped) = if depth >= need {
        let cov = verify_covariance_relations(ideal, depth)?;
        relation_failure("covariance relation", &cov)?;
        (Some(RelationRows::from(&cov)), None)
    } else {
        (None, Some(format!("needs depth at least {need}")))
    };
    Ok(FockSummary {
        generator_relations: RelationRows::from(&gen),
        covariance_relations,
        covariance_skipped,
    })
}

pub fn run_analyze(ideal: &MonomialIdeal, opts: Options) -> CliResult<AnalysisReport> {
    let d = ideal.d();
    let sys = build_system(ideal, opts)?;
    let spec = IdealSpec::of_ideal(ideal);
    let finite = ideal.type_k().finite();
    let echo = IdealEcho {
        d,
        basis: ideal.basis().iter().map(|w| w.to_spec_string(d)).collect(),
        patterns: spec.patterns,
        type_k: ideal.type_k().to_string(),
    };
    let (subshift, sinks, caveat) = match finite {
        Some(_) => (
            ideal.subshift_class()?,
            Sinks {
                left: ideal.find_sink(Side::Left)?.map(|w| label(&w, d)),
                right: ideal.find_sink(Side::Right)?.map(|w| label(&w, d)),
            },
            None,
        ),
        None => (
            ideal.subshift_class_within(opts.bound),
            Sinks {
                left: ideal
                    .find_sink_within(Side::Left, opts.bound)
                    .map(|w| label(&w, d)),
                right: ideal
                    .find_sink_within(Side::Right, opts.bound)
                    .map(|w| label(&w, d)),
            },
            Some(format!(
                "pattern ideal: answers are sound for words of length at most {}",
                opts.bound
            )),
        ),
    };
    let sofic = match finite {
        Some(k) => SoficVerdict {
            finite_omega: true,
            exact: true,
            note: format!(
                "type {k}: Ω is finite with {} classes, the shift is sofic",
                sys.len()
            ),
        },
        None => SoficVerdict {
            finite_omega: true,
            exact: false,
            note: format!(
                "classes stabilized at level {} within bound {}: {} classes observed",
                sys.level(),
                opts.bound,
                sys.len()
            ),
        },
    };
    let auto_continuity = match sys.check_auto_continuity() {
        AutoContinuity::Holds { witnesses } => AutoContinuityRow {
            holds: true,
            witnesses: witnesses
                .iter()
                .map(|(w, z)| [label(w, d), label(z, d)])
                .collect(),
            counterexample: None,
        },
        AutoContinuity::Fails { class } => AutoContinuityRow {
            holds: false,
            witnesses: Vec::new(),
            counterexample: Some(class),
        },
    };
    let (correspondence, fock) = match finite {
        Some(k) => (
            Some(correspondence_summary(ideal)?),
            Some(fock_summary(ideal, k, opts.fock_depth)?),
        ),
        None => (None, None),
    };
    Ok(AnalysisReport {
        ideal: echo,
        caveat,
        subshift_class: subshift.name().into(),
        sinks,
        quantised: quantised_summary(&sys),
        sofic,
        correspondence,
        auto_continuity,
        fock,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    /// `sigma[a - 1]` is the letter of the second ideal matched with letter `a`.
    pub permutation: Option<Vec<Letter>>,
    pub conjugacy: Option<ConjugacyWitness>,
    pub local_conjugacy: Option<LocalWitness>,
    pub unitary: Option<BlockMatrixWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub permutation_equal: bool,
    pub conjugate: bool,
    pub locally_conjugate: bool,
    pub unitarily_equivalent: bool,
    /// Set when either system is a bounded snapshot.
    pub bounded: Option<usize>,
    pub witnesses: Witnesses,
}

/// Compares `a` (the first ideal, `I`) with `b` (`J`). Witness maps run from
/// the classes of `J` to those of `I`.
pub fn run_compare(
    a: &MonomialIdeal,
    b: &MonomialIdeal,
    opts: Options,
) -> CliResult<CompareReport> {
    let sa = build_system(a, opts)?;
    let sb = build_system(b, opts)?;
    let exact = sa.bound().is_none() && sb.bound().is_none();
    let permutation = permutation_equal(a, b);
    let conj = conjugate(&sa, &sb);
    let local = locally_conjugate(&sa, &sb);
    let unitary = unitary_equivalence_of(&sa, &sb);
    let bug = |m: String| Failure::Internal(m);
    if let Some(w) = &conj {
        w.verify(&sa, &sb).map_err(bug)?;
        if local.is_none() {
            return Err(bug("conjugate but not locally conjugate".into()));
        }
    }
    if let Some(w) = &local {
        w.verify(&sa, &sb).map_err(bug)?;
    }
    if let Some(w) = &unitary {
        w.verify(&sa, &sb).map_err(bug)?;
    }
    if local.is_some() != unitary.is_some() {
        return Err(bug(
            "local conjugacy and unitary equivalence disagree".into()
        ));
    }
    if exact && permutation.is_some() != conj.is_some() {
        return Err(bug("permutation equality and conjugacy disagree".into()));
    }
    Ok(CompareReport {
        permutation_equal: permutation.is_some(),
        conjugate: conj.is_some(),
        locally_conjugate: local.is_some(),
        unitarily_equivalent: unitary.is_some(),
        bounded: if exact { None } else { Some(opts.bound) },
        witnesses: Witnesses {
            permutation,
            conjugacy: conj,
            local_conjugacy: local,
            unitary,
        },
    })
}

pub fn export_dot(ideal: &MonomialIdeal, opts: Options) -> CliResult<String> {
    Ok(build_system(ideal, opts)?.graph().to_dot())
}

/// Coordinate text of `T_μ` on the depth-`L` truncation.
pub fn dump_operator(ideal: &MonomialIdeal, word: &str, opts: Options) -> CliResult<String> {
    let mu = Word::parse(word, ideal.d())?;
    let fock = FockTruncation::new(ideal, opts.fock_depth)?;
    let mut out = String::new();
    for (n, w) in fock.basis().iter().enumerate() {
        writeln!(out, "# {n} {}", label(w, ideal.d())).expect("write to string");
    }
    out.push_str(&fock.word_operator(&mu).to_coordinate_text());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub ideals: usize,
    pub permutation_pairs: usize,
    pub words_checked: usize,
    pub violations: Vec<String>,
}

/// Runs the per-ideal cross-checks over the standard corpus: language
/// reconstruction from the dynamics, well-definedness of the maps, and
/// conjugacy of every letter permutation. Violations are collected, not
/// raised.
pub fn run_corpus(d3_samples: usize, seed: u64) -> CliResult<CorpusReport> {
    let corpus = standard_corpus(d3_samples, seed);
    let mut rep = CorpusReport {
        ideals: corpus.len(),
        permutation_pairs: 0,
        words_checked: 0,
        violations: Vec::new(),
    };
    for i in &corpus {
        let sys = QuantisedSystem::build(i)?;
        let k = i.type_k().finite().unwrap_or(0);
        if let Err(e) = sys.check_well_defined(k + 2) {
            rep.violations.push(format!("{i}: {e}"));
        }
        for mu in monoqd_core::corpus::words(i.d(), 0, 6) {
            rep.words_checked += 1;
            if sys.forbidden_via_dynamics(&mu) != i.is_forbidden(mu.letters()) {
                rep.violations
                    .push(format!("{i}: dynamics disagree at {mu}"));
            }
        }
        for sigma in permutations(i.d()) {
            let j = i.permute(&sigma);
            rep.permutation_pairs += 1;
            match run_compare(i, &j, Options::default()) {
                Ok(c)
                    if c.conjugate
                        && c.permutation_equal
                        && c.locally_conjugate
                        && c.unitarily_equivalent => {}
                Ok(_) => rep
                    .violations
                    .push(format!("{i}: image under {sigma:?} not recognised")),
                Err(e) => rep.violations.push(format!("{i}: {e}")),
            }
        }
    }
    Ok(rep)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let e = &self.ideal;
        let _ = writeln!(
            s,
            "ideal: d={} basis={{{}}} type={}",
            e.d,
            e.basis.join(","),
            e.type_k
        );
        for p in &e.patterns {
            let _ = writeln!(s, "pattern: {} ({})+ {}", p.u, p.v, p.w);
        }
        if let Some(c) = &self.caveat {
            let _ = writeln!(s, "caveat: {c}");
        }
        let _ = writeln!(s, "subshift: {}", self.subshift_class);
        let _ = writeln!(
            s,
            "sinks: left={} right={}",
            self.sinks.left.as_deref().unwrap_or("none"),
            self.sinks.right.as_deref().unwrap_or("none")
        );
        let q = &self.quantised;
        let _ = writeln!(s, "classes: {} (level {})", q.size, q.level);
        for c in &q.classes {
            let _ = writeln!(
                s,
                "  [{}] rep={} support={}{}",
                c.class,
                c.representative,
                c.support,
                if c.infinite { " infinite" } else { "" }
            );
        }
        for m in &q.maps {
            let edges: Vec<String> = m.edges.iter().map(|[a, b]| format!("{a}->{b}")).collect();
            let _ = writeln!(s, "  phi_{}: {}", m.letter, edges.join(" "));
        }
        let _ = writeln!(s, "sofic: {}", self.sofic.note);
        if let Some(c) = &self.correspondence {
            let _ = writeln!(
                s,
                "{}",
                format!("kernel: {} {}", c.kernel, c.kernel_witnesses.join(",")).trim_end()
            );
            let _ = writeln!(s, "katsura: {}", c.katsura);
            let _ = writeln!(s, "full: {}", yes(c.full));
            let _ = writeln!(s, "dichotomy: {}", c.dichotomy);
            let _ = writeln!(
                s,
                "{}",
                format!("envelope: {} {}", c.envelope, c.envelope_words.join(",")).trim_end()
            );
            if let Some(g) = &c.gap {
                let _ = writeln!(
                    s,
                    "norm gap: full={} essential={}",
                    g.full_norm_sq, g.essential_norm_sq
                );
            }
        }
        let _ = writeln!(s, "auto-continuity: {}", yes(self.auto_continuity.holds));
        if let Some(f) = &self.fock {
            let rows =
                std::iter::once(&f.generator_relations).chain(f.covariance_relations.as_ref());
            for r in rows {
                for c in &r.checks {
                    let _ = writeln!(
                        s,
                        "fock L={}: {} {}/{} ok",
                        r.depth,
                        c.name,
                        c.cases - c.failures,
                        c.cases
                    );
                }
            }
            if let Some(why) = &f.covariance_skipped {
                let _ = writeln!(s, "fock: covariance relations skipped, {why}");
            }
        }
        s
    }
}

impl CompareReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "permutation-equal: {}", yes(self.permutation_equal));
        let _ = writeln!(s, "conjugate: {}", yes(self.conjugate));
        let _ = writeln!(s, "locally conjugate: {}", yes(self.locally_conjugate));
        let _ = writeln!(
            s,
            "unitarily equivalent: {}",
            yes(self.unitarily_equivalent)
        );
        if let Some(b) = self.bounded {
            let _ = writeln!(s, "caveat: bounded snapshot, words up to {b}");
        }
        s
    }
}

impl CorpusReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "ideals: {}\npermutation pairs: {}\nwords checked: {}\nviolations: {}\n",
            self.ideals,
            self.permutation_pairs,
            self.words_checked,
            self.violations.len()
        );
        for v in &self.violations {
            let _ = writeln!(s, "  {v}");
        }
        s
    }
}
