use std::fmt;

use thiserror::Error;

/// A witness block, printed as a tuple of element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Vec<u32>);

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("size limit exceeded: {what} needs {needed}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        needed: usize,
        limit: usize,
    },
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("rule is not a homomorphism at {0}")]
    NonHomomorphicRule(Witness),
    #[error("image block {0} violates the target window")]
    WindowViolation(Witness),
    #[error("no finite-type presentation found up to window length {bound}")]
    DepthExceeded { bound: usize },
    #[error("presentation is not contained in the target shift")]
    NotASubshift,
    #[error("shift is not finite (limit degree {0})")]
    NotFinite(usize),
    #[error("undecided: certification failed through level {level}")]
    Undecided { level: usize },
    #[error("identity class at level {0} is not a subgroup")]
    NotASubgroupClass(usize),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error("alphabet group is not simple")]
    NotSimpleAlphabet,
    #[error("normal subshift matches neither Frobenius-kernel nor recurrence shape")]
    UnexpectedShape,
    #[error("action is incompatible with the endomorphism: {0}")]
    IncompatibleAction(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("oracle budget exceeded: {0}")]
    OracleBudgetExceeded(String),
    #[error("object `{object}`: {message}")]
    Validation { object: String, message: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the statuses that mean "not decided" rather than "wrong".
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::Undecided { .. } | Error::DepthExceeded { .. })
    }
}
