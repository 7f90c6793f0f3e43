use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("PGM parse error: {0}")]
    Pgm(String),

    #[error("gain {0} outside supported range [1/64, 64]")]
    GainOutOfRange(f64),

    #[error("sample magnitude {0} exceeds lifting headroom of 2^24")]
    Headroom(i64),

    #[error("unsupported illuminant imbalance: {coeff} = {value} outside [1/64, 64]")]
    UnsupportedImbalance { coeff: &'static str, value: f64 },

    #[error("invalid illuminant: {0}")]
    Illuminant(String),

    #[error("invalid scene parameters: {0}")]
    Scene(String),

    #[error("unknown pipeline mode: {0}")]
    UnknownMode(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("bitstream error: {0}")]
    Bitstream(String),

    #[error("container error: {0}")]
    Container(String),
}

impl Error {
    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
