use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("genus must be at least {min}, got {got}")]
    Genus { min: usize, got: usize },

    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate matrix entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("expected a homogeneous polynomial of degree {expected}")]
    NotHomogeneous { expected: usize },

    #[error("letter {letter} is outside genus {genus}")]
    LetterOutOfRange { letter: String, genus: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("problem size {size} exceeds the limit {limit}; raise the size limit to proceed")]
    SizeLimit { size: usize, limit: usize },

    #[error("monomial {monomial} is not of type X at l = {chords}")]
    NotTypeX { monomial: String, chords: usize },

    #[error("malformed monomial {0}: every index must appear once as a and once as b")]
    MalformedMonomial(String),

    #[error("endomorphism is not Torelli: its action on abelianization is not the identity")]
    NotTorelli,

    #[error("automorphism certification requested but no inverse was supplied")]
    MissingInverse,

    #[error("generator set {name}: endomorphism #{index} failed validation ({reason})")]
    InvalidGenerator {
        name: String,
        index: usize,
        reason: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
