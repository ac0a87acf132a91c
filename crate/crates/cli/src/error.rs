use std::fmt;
use std::path::Path;

use giro_core::market::MarketError;
use giro_core::policy::{ModelError, ParamsError};
use giro_core::population::PopulationError;
use giro_core::scenario::ScenarioError;

/// Everything that can end a command early, grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, or a bad flag combination. Exit 2.
    Input(String),
    /// Out-of-domain parameters, infeasible budgets, ledger violations,
    /// degenerate fits. Exit 3.
    Domain(String),
    /// Input that parses but fails a data-validation rule. Exit 4.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Input(format!("cannot access {}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ParamsError> for CliError {
    fn from(e: ParamsError) -> Self {
        match e {
            ParamsError::Io { .. } | ParamsError::Parse(_) => CliError::Input(e.to_string()),
            ParamsError::Invalid(_) => CliError::Domain(e.to_string()),
        }
    }
}

impl From<PopulationError> for CliError {
    fn from(e: PopulationError) -> Self {
        match e {
            PopulationError::Io { .. } | PopulationError::Parse(_) => {
                CliError::Input(e.to_string())
            }
            PopulationError::Empty | PopulationError::NotMeanZero { .. } => {
                CliError::Validation(e.to_string())
            }
            PopulationError::NoCondorcetWinner | PopulationError::Model(_) => {
                CliError::Domain(e.to_string())
            }
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse(_) | ScenarioError::Io { .. } => CliError::Input(e.to_string()),
            ScenarioError::Validation(_) => CliError::Validation(e.to_string()),
            ScenarioError::Ledger {
                date,
                label,
                source,
            } => CliError::Domain(format!(
                "ledger violation {} at event {date} `{label}`: {source}",
                source.kind()
            )),
            ScenarioError::Market { .. } => CliError::Domain(e.to_string()),
        }
    }
}

impl From<MarketError> for CliError {
    fn from(e: MarketError) -> Self {
        match e {
            MarketError::Io { .. } | MarketError::Parse(_) => CliError::Input(e.to_string()),
            MarketError::DegenerateFit(_) | MarketError::Domain(_) => {
                CliError::Domain(e.to_string())
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON encoding failed: {e}"))
    }
}
