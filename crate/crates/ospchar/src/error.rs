use crate::rootdata::Convention;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,

    #[error("rank {n} exceeds the configured cap {cap}")]
    RankCapExceeded { n: usize, cap: usize },

    #[error("bilinear pairing requires equal conventions, got {0:?} and {1:?}")]
    ConventionMismatch(Convention, Convention),

    #[error("weights have different ranks: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("critical level: k + h_vee = 0 for {0}")]
    CriticalLevel(&'static str),

    #[error("level duality pole: 2k + 2n + 1 = 0")]
    DualityPole,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("label {0} lies outside the table alphabet")]
    LabelOutsideAlphabet(String),

    #[error("truncation {trunc} exceeds the configured cap {cap}")]
    TruncCapExceeded { trunc: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
