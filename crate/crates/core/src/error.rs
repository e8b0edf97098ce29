use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("level {level} at coordinate {index} is outside [1, {q}]")]
    LevelOutOfRange { index: usize, level: u32, q: u32 },

    #[error("coordinate {index} carries sign -1, which an unsigned (PNN3) network cannot hold")]
    SignNotAllowed { index: usize },

    #[error("neuron index {index} out of range for {len} neurons")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("binary length {len} is not divisible by fragment length {fragment}")]
    LengthNotDivisible { len: usize, fragment: usize },

    #[error("no feasible mapping parameter for N = {n}, a = {a}")]
    NoFeasibleK { n: usize, a: f64 },

    #[error("decoded pattern index {index} does not exist (M = {count})")]
    UnknownPattern { index: usize, count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {p} is not a probability")))
    }
}
