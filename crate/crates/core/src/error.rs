//! Crate-wide error type. Checks that are *expected* to fail on interesting
//! inputs return report structs instead; `Error` is reserved for genuinely
//! malformed input or violated preconditions.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("matrix is singular")]
    Singular,

    #[error("linear map is not injective on the requested domain")]
    NotInjective,

    #[error("vector does not lie in the requested subspace")]
    NotInSubspace,

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("generator `{0}` has even total degree {1}; only odd generators are supported")]
    EvenGenerator(String, i64),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("too many generators ({0}); the monomial index is capped at 32")]
    TooManyGenerators(usize),

    #[error("elements belong to different presentations")]
    PresentationMismatch,

    #[error("no conjugation pairing declared on this presentation")]
    NoConjugation,

    #[error("derivation image for `{gen}` is not homogeneous of bidegree ({p},{q})")]
    InhomogeneousImage { gen: String, p: i64, q: i64 },

    #[error("element does not lie in the model's basis span")]
    OutsideModel,

    #[error("model basis is not closed under the operator `{0}`")]
    NotClosed(String),

    #[error("operator is not homogeneous of a single bidegree")]
    NotHomogeneous,

    #[error("element is not homogeneous")]
    InhomogeneousElement,

    #[error("transfer invariant violated: {0}")]
    TransferInvariant(&'static str),

    #[error("unsupported operation arity {0} (implemented through 3)")]
    UnsupportedArity(usize),

    #[error("{0}")]
    Invalid(String),
}
