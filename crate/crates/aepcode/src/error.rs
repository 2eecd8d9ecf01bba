//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction, partitioning, clustering, the
/// codec, and the sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pmf must not be empty")]
    EmptyPmf,

    #[error("pmf entry {index} is {value}, expected a finite value >= 0")]
    InvalidPmfEntry { index: usize, value: f64 },

    #[error("pmf sums to {sum:.12}, expected 1 within 1e-9")]
    PmfNotNormalized { sum: f64 },

    #[error("alphabet size {0} exceeds the supported maximum of 65536")]
    AlphabetTooLarge(usize),

    #[error("symbol {symbol} out of range for alphabet of size {alphabet_size}")]
    SymbolOutOfRange { symbol: u16, alphabet_size: usize },

    #[error("block length must be at least 1")]
    EmptyBlock,

    #[error("block length {got} does not match expected length {expected}")]
    BlockLengthMismatch { got: usize, expected: usize },

    #[error("epsilon must be a finite positive value, got {0}")]
    InvalidEpsilon(f64),

    #[error("epsilon {0} is not a valid logarithm base (need 0 < epsilon < 1)")]
    InvalidLogBase(f64),

    #[error("enumerating {blocks} sequences exceeds the cap of {cap}")]
    EnumerationCapExceeded { blocks: u128, cap: u128 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("bit length must be positive, got {0}")]
    InvalidBitLength(f64),

    #[error("duplicate block in sequence set")]
    DuplicateBlock,

    #[error("atypical set is empty; nothing to cluster")]
    EmptyAtypicalSet,

    #[error("cluster count {k} out of range (need 2 <= k <= {max})")]
    ClusterCountOutOfRange { k: usize, max: usize },

    #[error("cluster {j} is empty")]
    EmptyCluster { j: usize },

    #[error("cluster {j} has {size} members; operation requires singleton clusters")]
    NonSingletonCluster { j: usize, size: usize },

    #[error("cluster count {k} requires a wider field than the layout's {width} bits")]
    ClusterWidthTooSmall { k: usize, width: usize },

    #[error("{count} typical sequences do not fit in a {width}-bit index field")]
    IndexWidthTooSmall { count: usize, width: usize },

    #[error("cluster model block length {got} does not match partition block length {expected}")]
    ClusterPartitionMismatch { got: usize, expected: usize },

    #[error("codeword has {got} bits, layout expects {expected}")]
    CodewordLengthMismatch { got: usize, expected: usize },

    #[error("codeword is {got} bytes, expected {expected} for {bits} bits")]
    CodewordByteLengthMismatch { got: usize, expected: usize, bits: usize },

    #[error("codeword trailing padding bits are not zero")]
    NonZeroPadding,

    #[error("flag-0 codeword has a nonzero cluster field")]
    NonZeroClusterField,

    #[error("flag-1 codeword has a nonzero index field")]
    NonZeroIndexField,

    #[error("typical index {index} out of range ({count} typical sequences)")]
    TypicalIndexOutOfRange { index: u128, count: usize },

    #[error("cluster field value {value} out of range (k = {k})")]
    ClusterIndexOutOfRange { value: u128, k: usize },

    #[error("atypical block cannot be encoded without a cluster model")]
    MissingClusterModel,

    #[error("invalid hex codeword: {0}")]
    InvalidHex(String),

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("weight-class probabilities require a binary alphabet, got {0} symbols")]
    NotBinary(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("no rows to emit")]
    EmptyRows,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
