use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),

    #[error("polynomials live over different fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("factorization precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not squarefree")]
    NotSquarefreeInteger(u64),

    #[error("prime {0} divides the discriminant of the defining polynomial")]
    Ramified(u64),

    #[error("defining polynomial is reducible over the rationals")]
    Reducible,

    #[error("index r = {r} out of range for rank n = {n}")]
    IndexOutOfRange { n: usize, r: usize },

    #[error("odd power of q^(1/2) where an integer was expected")]
    OddHalfPower,

    #[error("threshold search too large: {0}")]
    Intractable(String),

    #[error("modular polynomial parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("modular polynomial for level {level} is not symmetric at ({i}, {j})")]
    Asymmetric { level: u64, i: u32, j: u32 },

    #[error("modular polynomial for level {level} has wrong shape: {msg}")]
    BadShape { level: u64, msg: String },

    #[error("modular polynomial for level {level} fails the Kronecker congruence at ({i}, {j})")]
    KroneckerViolation { level: u64, i: u32, j: u32 },

    #[error("no modular polynomial loaded for level {0}")]
    MissingModularPolynomial(u64),

    #[error("mass formula violated for p = {p}: got {got}, expected {expected}")]
    MassFormula { p: u64, got: String, expected: String },

    #[error("root {0} of the modular polynomial is not in the supersingular locus")]
    RootOutsideLocus(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("symmetrized Hecke matrix has residual {0:e}")]
    SymmetrizationResidual(f64),

    #[error("need at least 3 positive samples for a rate fit, got {0}")]
    TooFewSamples(usize),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
