use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pitch angle {theta:.4} rad is within {margin} rad of ±π/2")]
    PitchSingularity { theta: f64, margin: f64 },

    #[error("flow angles alpha={alpha:.4} rad, beta={beta:.4} rad are within {margin} rad of ±π/2")]
    FlowAngleSingularity { alpha: f64, beta: f64, margin: f64 },

    #[error("airspeed {airspeed:.4} m/s is below the minimum {min} m/s")]
    LowAirspeed { airspeed: f64, min: f64 },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("time {t} s is outside [{lo}, {hi})")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid config at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Singularity and divergence errors raised while integrating.
    pub fn is_runtime_abort(&self) -> bool {
        matches!(
            self,
            Error::PitchSingularity { .. }
                | Error::FlowAngleSingularity { .. }
                | Error::LowAirspeed { .. }
                | Error::NonFinite(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
