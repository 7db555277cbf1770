use std::fmt;

/// A non-zero outcome. The variant fixes the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Inputs were processed but some were invalid or scored as failures.
    Findings(String),
    Usage(String),
    /// File system or external service trouble.
    External(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Findings(_) => 1,
            Failure::Usage(_) => 2,
            Failure::External(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Findings(m) | Failure::Usage(m) | Failure::External(m) => f.write_str(m),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

pub fn io_failure(what: &std::path::Path, e: impl fmt::Display) -> Failure {
    Failure::External(format!("{}: {e}", what.display()))
}
