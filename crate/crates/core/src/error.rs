use thiserror::Error;

/// Errors shared by the whole crate.
///
/// Structural errors (`AlgebraMismatch`, `UnknownAtom`, ...) mean the inputs
/// were assembled from incompatible contexts. `Precondition` and `Domain`
/// mean a well-formed value was passed to an operation outside its stated
/// domain of definition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different Boolean algebras")]
    AlgebraMismatch,
    #[error("unknown atom '{0}'")]
    UnknownAtom(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("at most {max} atoms are supported, got {got}")]
    TooManyAtoms { max: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("family is not complete at index {index}: {detail}")]
    IncompleteFamily { index: usize, detail: String },
    #[error("query needs depth {needed} but the certificate covers depth {certified}; recertify with a larger depth")]
    DepthExceeded { certified: usize, needed: usize },
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
