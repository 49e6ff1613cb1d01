use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("layout error: {0}")]
    Layout(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("measurement error: {0}")]
    Measurement(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("no-signalling violation: {0}")]
    NoSignalling(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
