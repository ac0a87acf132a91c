pub mod fit_agio;
pub mod ledger;
pub mod optimize;
pub mod politics;
pub mod replay;

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use giro_core::scenario::{venice_1629_builtin, Scenario};

use crate::error::CliError;
use crate::Context;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builtin {
    Venice,
}

#[derive(Args)]
pub struct ScenarioSource {
    /// Scenario file.
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    pub scenario: Option<PathBuf>,
    /// Built-in scenario.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

impl ScenarioSource {
    pub fn is_given(&self) -> bool {
        self.scenario.is_some() || self.builtin.is_some()
    }

    /// Loads the scenario. A `--params` file overrides the scenario's own
    /// parameters.
    pub fn load(&self, ctx: &Context) -> Result<Scenario, CliError> {
        let mut scenario = match (&self.scenario, self.builtin) {
            (Some(path), _) => Scenario::load(path)?,
            (None, Some(Builtin::Venice)) => venice_1629_builtin(),
            (None, None) => {
                return Err(CliError::Input(
                    "give a scenario with --scenario PATH or --builtin venice".into(),
                ))
            }
        };
        if ctx.params_from_file {
            scenario.params = ctx.params;
        }
        Ok(scenario)
    }
}
