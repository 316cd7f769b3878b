use thiserror::Error;

/// Errors raised by constructors and analyses in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QifError {
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value {value} in {what}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("negative mass {value} at label `{label}`")]
    NegativeMass { label: String, value: f64 },
    #[error("mass exceeds one ({value}) in {what}")]
    MassExceedsOne { what: String, value: f64 },
    #[error("distribution sums to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("entry {value} out of [0,1] at ({row}, {col}) in {what}")]
    EntryOutOfRange {
        what: &'static str,
        row: String,
        col: String,
        value: f64,
    },
    #[error("row `{row}` sums to {sum}, not 1")]
    RowNotStochastic { row: String, sum: f64 },
    #[error("secret space is empty")]
    EmptySecretSpace,
    #[error("guess set is empty")]
    EmptyGuessSet,
    #[error("invalid gain function: {0}")]
    InvalidGain(String),
    #[error("joint gain is not coupled to its components at guess {guess} / secret {secret}")]
    GainCoupling { guess: String, secret: String },
    #[error("label spaces differ: {0}")]
    LabelMismatch(String),
    #[error("prior g-vulnerability is zero, leakage is undefined")]
    ZeroVulnerability,
    #[error("operation requires a probability distribution, got a sub-distribution")]
    SubPriorNotSupported,
    #[error("composed channel would have {cells} cells, above the cap of {cap}")]
    SizeOverflow { cells: u128, cap: u128 },
    #[error("channels do not share an input space: {0}")]
    InputSpaceMismatch(String),
    #[error("output label `{0}` cannot be split into a pair")]
    NotFactorableOutputs(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prior times gain is identically zero on every support set")]
    AllSupportsEmpty,
    #[error("prior times gain is identically zero")]
    AllZero,
    #[error("prior is not jointly supported")]
    NotJointlySupported,
    #[error("epsilon {0} is outside [0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("epsilon {epsilon} is not below the posterior vulnerability {vulnerability}")]
    EpsilonTooLarge { epsilon: f64, vulnerability: f64 },
    #[error("noise level {level} outside [0, {max}]")]
    NoiseOutOfRange { level: f64, max: f64 },
    #[error("topology has no honest users")]
    NoHonestUsers,
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("forwarding chain does not absorb: {0}")]
    NonAbsorbing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QifError>;
