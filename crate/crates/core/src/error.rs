use core::fmt;

/// Errors raised by the similarity primitives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated the operation's contract (zero dimension,
    /// mismatched sizes, out-of-range parameter, ...).
    InvalidArgument(&'static str),
    /// A pixel window reached outside the image.
    OutOfBounds { x: usize, y: usize },
    /// Sample variance needs at least two pixels.
    UndefinedVariance,
    /// Two perceptual hashes produced by different algorithms.
    AlgorithmMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::OutOfBounds { x, y } => write!(f, "window at ({x}, {y}) exceeds image bounds"),
            Error::UndefinedVariance => f.write_str("variance is undefined for fewer than two pixels"),
            Error::AlgorithmMismatch => f.write_str("hashes were produced by different algorithms"),
        }
    }
}

impl core::error::Error for Error {}
