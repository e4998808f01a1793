//! Invariants of monomial ideals in the free algebra on `d` letters.
//!
//! An ideal is given by forbidden words over the alphabet `1..=d`. From it
//! the crate builds the language of allowable words, the finite quotient of
//! that language by predecessor sets together with its partial maps, the
//! truncated Fock representation, and the finite model of the associated
//! correspondence. Equivalences between ideals come with witnesses that can
//! be re-checked independently.

pub mod corpus;
pub mod correspondence;
pub mod equivalence;
pub mod error;
pub mod fock;
mod graph;
pub mod ideal;
mod iso;
pub mod language;
pub mod quantised;
pub mod sparse;
pub mod spec;
pub mod word;

pub use correspondence::{
    cenv_verdict, correspondence_model, dichotomy_verdict, unitary_equivalence,
    unitary_equivalence_of, BlockMatrixWitness, CorrespondenceModel, Dichotomy, DichotomyVerdict,
    Envelope, Katsura, Kernel,
};
pub use equivalence::{
    conjugate, locally_conjugate, permutation_equal, ConjugacyWitness, LocalWitness,
};
pub use error::{Error, Result};
pub use fock::{
    cenv_gap_check, essential_norm_diagonal, operator_norm, verify_covariance_relations,
    FockTruncation, GapCheck, NormEstimate, RelationReport,
};
pub use ideal::{MonomialIdeal, Side, SubshiftClass, TypeK};
pub use language::FactorAutomaton;
pub use quantised::{AutoContinuity, LabeledDigraph, QuantisedSystem};
pub use sparse::{SparseOp, SparseVec};
pub use spec::IdealSpec;
pub use word::{GeneratorPattern, Letter, Word};
