use std::path::Path;

use hermlift::congr::CongrError;
use hermlift::elliptic::EllipticError;
use hermlift::hecke::HeckeError;
use hermlift::lfun::LfunError;
use hermlift::maass::MaassError;
use hermlift::quadfield::FieldError;
use hermlift::ring::RingError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Maass(#[from] MaassError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Lfun(#[from] LfunError),
    #[error(transparent)]
    Congr(#[from] CongrError),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        }
    }

    /// Process exit code. 1 is reserved for "ran fine, a check failed".
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Config(_) => 3,
            CliError::Elliptic(EllipticError::Parse { .. }) | CliError::Maass(MaassError::Parse { .. }) => 4,
            CliError::Field(_) | CliError::Ring(_) => 5,
            CliError::Elliptic(_) => 6,
            CliError::Maass(_) => 7,
            CliError::Hecke(_) => 8,
            CliError::Lfun(_) => 9,
            CliError::Congr(_) => 10,
        }
    }

    /// Short stable name printed with the message.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "io",
            4 => "parse",
            5 => "field",
            6 => "newform",
            7 => "maass",
            8 => "hecke",
            9 => "lfun",
            _ => "congruence",
        }
    }
}
