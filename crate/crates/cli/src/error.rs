use std::fmt;

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_ARITY: u8 = 4;

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        Self::new(EXIT_SCHEMA, message)
    }

    pub fn degenerate(message: impl Into<String>) -> Self {
        Self::new(EXIT_DEGENERATE, message)
    }

    pub fn arity(message: impl Into<String>) -> Self {
        Self::new(EXIT_ARITY, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<jsnr_core::Error> for CliError {
    fn from(e: jsnr_core::Error) -> Self {
        use jsnr_core::Error as E;
        let code = match e {
            E::LinearlyDependent(_) | E::ZeroVector(_) | E::Empty(_) => EXIT_DEGENERATE,
            E::WrongArity { .. } => EXIT_ARITY,
            E::DimensionMismatch { .. }
            | E::InvalidDims { .. }
            | E::NotHermitian(_)
            | E::InvalidDensity(_)
            | E::NonFinite => EXIT_SCHEMA,
            E::UnsupportedDims { .. } | E::InconsistentRegions(_) => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(EXIT_FAILURE, e.to_string())
    }
}
