//! Crate-wide error type.

use alloc::string::String;

/// Errors raised by parsing, validation and computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("bad vertex `{0}`")]
    BadVertex(String),
    #[error("level {requested} exceeds the configured limit {max}")]
    LevelTooLarge { requested: u32, max: u32 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("letter {letter} out of range for alphabet of size {d} at {line}:{col}")]
    Arity {
        letter: u32,
        d: usize,
        line: u32,
        col: u32,
    },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid group definition: {0}")]
    InvalidSpec(String),
    #[error("portrait has no completely ramified fixed point \"inf\": {0}")]
    MissingInfinity(String),
    #[error("ramification budget violated: sum of finite local degrees minus one is {got}, limit {limit}")]
    RamificationBudgetViolated { got: u32, limit: u32 },
    #[error("forward orbit of `{0}` leaves the portrait")]
    UnreachableCycle(String),
    #[error("bad local degree {degree} for point `{point}`")]
    BadLocalDegree { point: String, degree: u32 },
    #[error("unknown point `{0}` referenced by the portrait")]
    UnknownPoint(String),
    #[error("duplicate point `{0}` in the portrait")]
    DuplicatePoint(String),
    #[error("not a quadratic critical portrait: {0}")]
    NotQuadratic(String),
    #[error("invalid placement: {0}")]
    PlacementInvalid(String),
    #[error("emitted recursion failed kneading validation: {0}")]
    KneadingValidationFailed(String),
    #[error("point {0} is not a point of the level")]
    BadPoint(usize),
    #[error("element is not a member of the group")]
    NotAMember,
    #[error("the identity element is not admissible here")]
    TrivialElement,
    #[error("no vertex with an orbit of length {0} inside the truncation")]
    NoSuchOrbit(u64),
    #[error("element order mismatch: {0}")]
    OrderMismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;
