use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("decimal notation is not accepted: {0:?} (write p/q)")]
    Decimal(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("malformed rational {0:?}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Rational(#[from] ParseRationalError),

    #[error("duplicate label {0:?} in finite set")]
    DuplicateLabel(String),

    #[error("label {label:?} is not in {set}")]
    UnknownLabel { label: String, set: String },

    #[error("invalid weight {weight} for {label:?}: weights must be positive")]
    NonPositiveWeight { label: String, weight: String },

    #[error("masses sum to {0}, expected 1")]
    BadTotal(String),

    #[error("{0}")]
    Invalid(String),

    #[error("row {row:?} violates the {flavor} contract: {reason}")]
    RowContract {
        row: String,
        flavor: String,
        reason: String,
    },

    #[error("cannot compose: codomain {left} does not match domain {right}")]
    Mismatch { left: String, right: String },

    #[error("expected a {expected} kernel, found {found}")]
    Flavor { expected: String, found: String },

    #[error("rewrite {rule} does not apply at {path}")]
    Rewrite { rule: String, path: String },

    #[error("term parse error at byte {pos}: {msg}")]
    TermParse { pos: usize, msg: String },

    #[error("guard {0} is outside the open interval (0, 1)")]
    GuardDomain(String),

    #[error("term has no normal form: {0}")]
    NoNormalForm(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
