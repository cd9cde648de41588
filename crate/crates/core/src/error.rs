use std::fmt;

/// Which bound of the admissible region the steady-state trajectory hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaBound {
    /// `y` approached the critical root `y_{1,eps}` (flow about to turn critical).
    CriticalRoot,
    /// `y` fell below `c_y = V0/2`.
    LowerSpeed,
    /// `|z|` exceeded the configured bound `C_z`.
    Slope,
}

impl fmt::Display for OmegaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OmegaBound::CriticalRoot => "near-critical speed bound",
            OmegaBound::LowerSpeed => "lower speed bound c_y",
            OmegaBound::Slope => "slope bound C_z",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("viscosity too large for this steady state: trajectory hit the {bound} at x = {x}")]
    OmegaExit { bound: OmegaBound, x: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("simulation diverged at step {step}")]
    Diverged { step: usize },
    #[error("size over budget: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
