use thiserror::Error;

/// Failure while decoding a netpbm stream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad magic number {:?}; expected P2, P3, P5 or P6", String::from_utf8_lossy(.0))]
    BadMagic(Vec<u8>),
    #[error("header ended before the {0} field")]
    MissingField(&'static str),
    #[error("invalid {field} value {text:?}")]
    InvalidNumber { field: &'static str, text: String },
    #[error("zero {0} in header")]
    ZeroField(&'static str),
    #[error("maxval {0} exceeds 255; only 8-bit images are supported")]
    MaxvalTooLarge(u64),
    #[error("image dimensions {width}x{height} overflow the addressable pixel count")]
    DimensionOverflow { width: u64, height: u64 },
    #[error("pixel data truncated: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample value {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u64, maxval: u64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("image has no pixels")]
    EmptyImage,
    #[error("window size {0} must be odd and at least 1")]
    InvalidWindow(usize),
    #[error("median of an empty window")]
    EmptyWindow,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cluster {cluster} has zero total membership weight")]
    DegenerateCluster { cluster: usize },
    #[error("image has {levels} distinct gray level(s) but {clusters} clusters were requested")]
    TooFewLevels { levels: usize, clusters: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
