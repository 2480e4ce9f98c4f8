use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("operands have mismatched moduli {left} and {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("operation undefined on the empty set")]
    EmptySet,

    #[error("window {{-t..t}} with t={t} does not fit in Z_{p} (need 2t+1 < p)")]
    WindowTooLarge { t: u64, p: u64 },

    #[error("set is not rectifiable: diameter {diameter} * weight {weight} >= p = {p}")]
    NotRectifiable { diameter: u64, weight: u64, p: u64 },

    #[error("oracle capped at {cap} elements, got {got}")]
    OracleScale { got: usize, cap: usize },

    #[error("dilation by zero is not defined on the circle")]
    InvalidDilate,

    #[error("fattening radius must be nonnegative")]
    NegativeRadius,

    #[error("interval endpoints must satisfy 0 <= a < b <= 1")]
    BadInterval,

    #[error("dilate coefficient {0} vanishes mod p")]
    DegenerateDilate(i64),

    #[error("permutation x -> {multiplier}*x fixes every point of Z_{p}; no valid set")]
    NoValidSet { multiplier: u64, p: u64 },

    #[error("dilate {0} unsupported: the construction needs |lambda| >= 2")]
    UnsupportedDilate(i64),

    #[error("epsilon must lie in (0, 1/2), got {0}")]
    EpsilonOutOfRange(String),

    #[error("interval cap exceeded: level needs {needed} spans, cap is {cap}")]
    IntervalCap { needed: usize, cap: usize },

    #[error("enumeration budget exceeded: C({p},{size}) = {count} > {budget}")]
    EnumerationBudget {
        p: u64,
        size: u64,
        count: u128,
        budget: u128,
    },

    #[error("invalid subset size {size} for Z_{p}")]
    InvalidSize { size: u64, p: u64 },

    #[error("lambda must be at least 2, got {0}")]
    PlagneDomain(i64),

    #[error("alpha must lie in {range}, got {alpha}")]
    AlphaDomain { alpha: f64, range: &'static str },

    #[error("{count} sign changes in the bracket; root is not isolated")]
    MultipleRoots { count: usize },

    #[error("dilate vector must have k >= 1 nonzero coefficients")]
    BadDilateVector,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
