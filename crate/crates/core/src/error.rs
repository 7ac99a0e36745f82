use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("shell size {0} is too small: shells need at least 4 links to guarantee complexity >= 6")]
    ShellTooSmall(u32),
    #[error("invalid slope {0}/{1}: not reduced or zero")]
    InvalidSlope(i64, i64),
    #[error("curve support spans {0} window sites; operations are exact only for support <= {1}")]
    SupportTooLarge(usize, usize),
    #[error("per-pants parity violated at pants {0}: boundary intersection sum is odd")]
    ParityViolation(u64),
    #[error("curve is not part of the decomposition")]
    NotInDecomposition,
    #[error("invalid elementary move: {0}")]
    InvalidMove(String),
    #[error("window of site {0} is deformed (an overlapping site is off its base curve); move enumeration there is unsupported")]
    WindowDeformed(u64),
    #[error("decomposition invalid: sites {0} and {1} both deviate from the base curves but their windows overlap")]
    OverlappingDeviation(u64, u64),
    #[error("tail pattern invalid: {0}")]
    InvalidTail(String),
    #[error("restriction data inconsistent: {0}")]
    CorruptRestriction(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("step distance is defined for this pair; lower bounds apply only to undefined pairs")]
    StepDistanceDefined,
    #[error("ultrametric check not applicable: {0}")]
    NotApplicable(String),
    #[error("certificate violated on the materialized prefix: {0}")]
    CertificateViolation(String),
    #[error("points are equal; no separation witness exists")]
    PointsEqual,
    #[error("edge points require adjacent decompositions")]
    NotAdjacent(String),
    #[error("parameter out of supported range: {0}")]
    ParamRange(String),
    #[error("unsupported subsurface: {0}")]
    UnsupportedSubsurface(String),
    #[error("parse error: {0}")]
    Parse(String),
}
