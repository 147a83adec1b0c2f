use thiserror::Error;

/// Errors shared by the whole crate.
///
/// `InvalidInput` covers parameter-domain violations (negative radius, weight
/// vector that does not normalize, ...), `Degenerate` covers geometry that
/// cannot support the requested computation (zero-length segment, collinear
/// frame points, zero-area polygon, non-coplanar vertex list), and
/// `NoSolution` is reserved for root searches whose target is outside the
/// attainable range.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error(
        "no solution: target {target:.6e} outside attainable range [{attainable_lo:.6e}, {attainable_hi:.6e}]"
    )]
    NoSolution {
        target: f64,
        attainable_lo: f64,
        attainable_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::Degenerate(msg.into())
}
