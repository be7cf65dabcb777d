//! Error taxonomy shared across the engine.

/// Everything that can go wrong in the engine.
///
/// Variants mirror the failure modes of the individual subsystems; callers
/// match on them rather than on strings.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("not a unit: branch {branch} has no invertible leading coefficient")]
    NotAUnit { branch: usize },

    #[error("precision exceeded: coefficient of t^{wanted} requested but only exponents < {prec} are known")]
    PrecisionExceeded { wanted: i64, prec: i64 },

    #[error("pole at a=0 on branch {branch}, exponent {exp}")]
    PoleAtZero { branch: usize, exp: i64 },

    #[error("span closure did not stabilize within the window; raise the precision")]
    NoStabilization,

    #[error("module span is identically zero on branch {branch}; not rank-1 torsion-free")]
    NotTorsionFree { branch: usize },

    #[error("spans cannot be compared: no saturated common window")]
    WindowMismatch,

    #[error("multiplier vanishes on branch {branch}")]
    ZeroDivisorMultiplier { branch: usize },

    #[error("rank drop at {fiber} fiber: expected rank {expected}, found {found}")]
    RankDrop {
        fiber: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("unsupported family index n={0}; supported range is 1..=8")]
    UnsupportedN(u32),

    #[error("ambiguous fingerprint: candidates {0:?}")]
    AmbiguousFingerprint(Vec<String>),

    #[error("isomorphism search inconclusive after {retries} retries")]
    Inconclusive { retries: usize },

    #[error("component report not applicable to semilocal id `{0}`")]
    NotApplicable(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
