use thiserror::Error;

/// Errors surfaced by the simulator.
#[derive(Debug, Error)]
pub enum SimError {
    /// A parameter is outside its documented domain (bad sizes, negative
    /// costs, malformed action grids, ...). The message names the field.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A caller broke a documented precondition, e.g. handed the settlement
    /// engine an unsorted instruction sequence or an out-of-range index.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A configuration file could not be read or parsed.
    #[error("config error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
