use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter lies outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested emission envelope cannot be produced by any mixing
    /// angle: the inversion needs |sin θ| > 1 at `time`.
    #[error("infeasible target envelope at t = {time}: sin(theta) would be {ratio}")]
    Infeasible { time: f64, ratio: f64 },

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("qubit amplitudes are not normalized: |a|^2 + |b|^2 = {norm_sq}")]
    InvalidQubit { norm_sq: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
