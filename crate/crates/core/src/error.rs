use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The curve left the linear piece of the map. `theta` is the grid
    /// angle where the excursion is largest, `image_theta` is `theta + omega`
    /// where the bounding curve touches.
    #[error("branch violation at theta = {theta:.12} (image {image_theta:.12}): {excess:.3e} past the breakpoint")]
    BranchViolation { theta: f64, image_theta: f64, excess: f64 },

    #[error("degenerate forcing: extremum {value:.3e} too small, b* is unbounded")]
    DegenerateForcing { value: f64 },

    #[error("no sign change on [0, {b_hi:e}] after doubling")]
    BracketFailure { b_hi: f64 },

    #[error("unexpected zero at theta = {theta:.12}: lambda = {value:.3e} below floor {floor:.3e}")]
    UnexpectedZero { theta: f64, value: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
