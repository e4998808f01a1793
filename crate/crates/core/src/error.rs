use thiserror::Error;

use crate::word::Word;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("letter {letter} is outside the alphabet 1..={d}")]
    InvalidLetter { letter: u32, d: usize },
    #[error("generator {0} has length < 2; remove single letters from the alphabet instead")]
    DegenerateGenerator(Word),
    #[error("pattern has an empty repeated block")]
    EmptyPatternBlock,
    #[error("infinite-type ideal: search cannot be certified without an exploration bound")]
    UnboundedSearch,
    #[error("infinite-type ideal: an exploration bound is required")]
    BoundRequired,
    #[error("infinite-type ideal is not supported here")]
    InfiniteType,
    #[error("word {0} is forbidden")]
    ForbiddenWord(Word),
    #[error("class partition did not stabilise within bound {bound}")]
    NotStabilized { bound: usize },
    #[error("truncation depth {depth} leaves no interior (margin {margin})")]
    TruncationTooShallow { depth: usize, margin: usize },
    #[error(
        "power iteration did not converge after {iterations} iterations (estimate {estimate})"
    )]
    NoConvergence { estimate: f64, iterations: usize },
    #[error("values are not constant on classes: {0}")]
    NotClassConstant(String),
    #[error("precondition violated by word {word}: {reason}")]
    PreconditionViolation { word: Word, reason: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("malformed ideal spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
