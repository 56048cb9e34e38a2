//! Exit codes.

use alphalasso::Error;

pub const PROPERTY: u8 = 1;
pub const USAGE: u8 = 2;
pub const SOLVER: u8 = 3;
pub const CONFIG: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::new(USAGE, anyhow::anyhow!(msg.into()))
    }
}

/// Input and argument errors map to 2, config errors to 4, everything the
/// solver or selection reports to 3.
pub fn classify(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::DimensionMismatch(_)
        | Error::TooSmall { .. }
        | Error::ZeroVarianceColumn(_)
        | Error::InvalidLambda(_)
        | Error::InvalidPenalty(_)
        | Error::BadK { .. }
        | Error::BadFoldSizeForAR2 { .. }
        | Error::BadGrid
        | Error::InvalidRule(_) => USAGE,
        Error::Config { .. } | Error::NonPositiveSnr(_) => CONFIG,
        _ => SOLVER,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(classify(&e), e)
    }
}

pub trait WithCode<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> WithCode<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(code, e))
    }
}
