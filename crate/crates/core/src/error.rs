//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },

    #[error("element encoding {value} is out of range for a field of size {q}")]
    ElementOutOfRange { value: u64, q: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("quadratic character is undefined at zero")]
    UndefinedCharacterArgument,

    #[error("{value} is not a square in this field")]
    NonResidue { value: u64 },

    #[error("{r} is not the size of the required subfield of F_{q}")]
    InvalidSubfield { r: u64, q: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("need more evaluation points than the dimension: n = {n}, k = {k}")]
    NotEnoughPoints { n: usize, k: usize },

    #[error("multiplier at position {index} is zero")]
    ZeroMultiplier { index: usize },

    #[error("evaluation point {value} appears more than once")]
    DuplicatePoint { value: u64 },

    #[error("enumeration of {required} codewords exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("rank scan over {required} column subsets exceeds the budget of {budget}")]
    CombinatorialBudgetExceeded { required: u128, budget: u64 },

    #[error("subset search over {required} candidates exceeds the budget of {budget}")]
    SearchBudgetExceeded { required: u128, budget: u64 },

    #[error("evaluation set does not sum to zero")]
    SumNotZero,

    #[error("character profile of the evaluation set is not uniform")]
    NonUniformCharacter,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parity condition violated: {0}")]
    ParityViolation(String),

    #[error("coset indices {i} and {j} select the same coset")]
    CosetCollision { i: u64, j: u64 },

    #[error("witness check failed: {0}")]
    WitnessCheckFailed(String),

    #[error("cannot pair coset representatives into negation pairs")]
    RepresentativePairingImpossible,

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("malformed document: {0}")]
    MalformedDocument(String),
}
