use thiserror::Error;

use crate::model::Leg;

/// Errors raised by the tripod model and everything built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dark states are undefined when the probe and trigger Rabi frequencies both vanish")]
    DegenerateInput,

    #[error("steady state is not unique: generator null space has dimension {nullity}")]
    SingularSystem { nullity: usize },

    #[error("integrator step size underflowed at t = {t}")]
    StepFailure { t: f64 },

    #[error("{leg} Rabi frequency is zero; the coherence ratio is undefined")]
    DivisionByZero { leg: Leg },

    #[error("singular denominator: {factor}")]
    SingularDenominator { factor: &'static str },

    #[error("cross-Kerr response is singular at delta1 = delta3 without ground dephasing gamma13")]
    RegularizationRequired,

    #[error("{leg} group velocity is not positive")]
    NonpositiveVelocity { leg: Leg },

    #[error("unknown sweep axis `{0}`")]
    InvalidAxis(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
