use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("variable set is empty")]
    EmptySet,

    #[error("variable `{0}` is not binary")]
    NotBinary(String),

    #[error("invalid joint distribution: {0}")]
    InvalidJoint(String),

    #[error("setting pair (a={a}, b={b}) has zero probability")]
    MissingSettingPair { a: u8, b: u8 },

    #[error("conditioning event has zero probability: {0}")]
    ZeroProbabilityCondition(&'static str),

    #[error("settings are not uniform and independent: P(a={a}, b={b}) = {prob}")]
    NonUniformSettings { a: u8, b: u8, prob: f64 },

    #[error("enumeration needs {atoms} atoms, cap is {cap}")]
    EnumerationTooLarge { atoms: u128, cap: u128 },

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = core::result::Result<T, Error>;
