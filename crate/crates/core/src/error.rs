use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("result window of {needed} values exceeds the memory cap of {cap}")]
    WindowOverflow { needed: u64, cap: u64 },

    #[error("source window [{src_lo}, {src_hi}] not contained in destination window [{dst_lo}, {dst_hi}]")]
    WindowMismatch {
        src_lo: u64,
        src_hi: u64,
        dst_lo: u64,
        dst_hi: u64,
    },

    #[error("no witness: {z} is not in the sumset A+B")]
    NoWitness { z: u64 },

    #[error("(i={i}, y={y}) is not a member of the layered sums")]
    NotAMember { i: usize, y: u64 },

    #[error("element {value} out of range [1, {max}]")]
    ElementOutOfRange { value: u64, max: u64 },

    #[error("input of {size} occurrences exceeds the limit of {limit}")]
    SizeLimit { size: u64, limit: u64 },

    #[error("discrepancy guard tripped: |d(S)| = {observed} exceeds the bound {bound}")]
    DiscrepancyGuard { observed: i64, bound: f64 },

    #[error("{y} is not in the computed answer set")]
    NotInAnswer { y: u64 },

    #[error("witness mode was off for this solve; intermediate bitmaps were not retained")]
    WitnessModeOff,

    #[error("malformed set system: {0}")]
    MalformedSystem(String),

    #[error("internal contract violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
