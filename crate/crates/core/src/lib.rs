//! Accounting and welfare engine for studying money-financed fiscal
//! transfers: a two-authority double-entry ledger, a heterogeneous-agent
//! welfare model with its political-economy extension, an agio calibration
//! and a replayable scenario timeline.

pub mod ledger;
pub mod market;
pub mod policy;
pub mod population;
pub mod scenario;
pub mod text;

pub use ledger::{Authority, Balances, Item, LedgerError, Money, Position, PublicSector, Side, Strategy, Transaction};
pub use market::{AgioModel, AgioObservation, MarketError};
pub use policy::{ModelError, ModelParams, PolicyChoice, WelfareBreakdown};
pub use population::{Inhabitant, Population, PopulationError};
pub use scenario::{Event, EventKind, RunResult, Scenario, ScenarioError};
