//! Dated policy timelines replayed against a [`PublicSector`].

mod format;
mod venice;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::{Balances, LedgerError, Money, Position, PublicSector, Strategy, Transaction};
use crate::market::{self, AgioModel, AgioObservation, MarketError};
use crate::policy::ModelParams;
use crate::text::ParseError;

pub use format::{export, parse};
pub use venice::venice_1629_builtin;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("event {date} `{label}`: {source}")]
    Ledger {
        date: NaiveDate,
        label: String,
        source: LedgerError,
    },
    #[error("event {date} `{label}`: {source}")]
    Market {
        date: NaiveDate,
        label: String,
        source: MarketError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// The Treasury receives an asset of the given value (`TA`, `TW` up).
    Endow,
    NetWorthHelicopter,
    MonetaryBaseHelicopter,
    ClassicalExpansion,
    ReversalBailout,
    /// Fits the agio model on the scenario's observations; the amount is
    /// the reference money stock, or zero for the smallest observed stock.
    SetAgioModel,
    /// Annotation only.
    Observe,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::Endow,
        EventKind::NetWorthHelicopter,
        EventKind::MonetaryBaseHelicopter,
        EventKind::ClassicalExpansion,
        EventKind::ReversalBailout,
        EventKind::SetAgioModel,
        EventKind::Observe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Endow => "Endow",
            EventKind::NetWorthHelicopter => "NetWorthHelicopter",
            EventKind::MonetaryBaseHelicopter => "MonetaryBaseHelicopter",
            EventKind::ClassicalExpansion => "ClassicalExpansion",
            EventKind::ReversalBailout => "ReversalBailout",
            EventKind::SetAgioModel => "SetAgioModel",
            EventKind::Observe => "Observe",
        }
    }

    pub fn strategy(self) -> Option<Strategy> {
        match self {
            EventKind::NetWorthHelicopter => Some(Strategy::NetWorthHelicopter),
            EventKind::MonetaryBaseHelicopter => Some(Strategy::MonetaryBaseHelicopter),
            EventKind::ClassicalExpansion => Some(Strategy::ClassicalExpansion),
            EventKind::ReversalBailout => Some(Strategy::ReversalBailout),
            _ => None,
        }
    }

    fn posts(self) -> bool {
        self == EventKind::Endow || self.strategy().is_some()
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = EventKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown event kind `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub date: NaiveDate,
    pub kind: EventKind,
    pub amount: Money,
    /// Interest rate on the funded debt a reversal creates.
    pub rate: Option<f64>,
    pub note: String,
}

impl Event {
    pub fn new(date: NaiveDate, kind: EventKind, amount: i64, note: impl Into<String>) -> Self {
        Event {
            date,
            kind,
            amount: Money(amount),
            rate: None,
            note: note.into(),
        }
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = Some(rate);
        self
    }

    /// The note, or the kind name when there is no note.
    pub fn label(&self) -> &str {
        if self.note.is_empty() {
            self.kind.name()
        } else {
            &self.note
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let at = format!("event {} {}", self.date, self.kind);
        if self.amount.is_negative() {
            return Err(format!("{at}: amount must not be negative, got {}", self.amount));
        }
        if self.kind.posts() && self.amount == Money::ZERO {
            return Err(format!("{at}: amount must be positive"));
        }
        match (self.kind, self.rate) {
            (EventKind::ReversalBailout, None) => {
                Err(format!("{at}: a reversal needs the funded-debt rate (`rate:R`)"))
            }
            (EventKind::ReversalBailout, Some(r)) if !(r.is_finite() && r >= 0.0) => {
                Err(format!("{at}: rate must be a non-negative number, got {r}"))
            }
            (EventKind::ReversalBailout, Some(_)) | (_, None) => Ok(()),
            (_, Some(_)) => Err(format!("{at}: only reversals carry a rate")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams,
    /// Date of the opening balances and of the first snapshot.
    pub start: NaiveDate,
    pub initial: Balances,
    pub events: Vec<Event>,
    pub agio_observations: Vec<AgioObservation>,
}

impl Scenario {
    /// Validates everything and stable-sorts the events by date.
    pub fn new(
        name: impl Into<String>,
        params: ModelParams,
        start: NaiveDate,
        initial: Balances,
        mut events: Vec<Event>,
        agio_observations: Vec<AgioObservation>,
    ) -> Result<Self, ScenarioError> {
        params
            .validate()
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        initial
            .validate()
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        for e in &events {
            e.validate().map_err(ScenarioError::Validation)?;
            if e.date < start {
                return Err(ScenarioError::Validation(format!(
                    "event {} {} precedes the opening date {start}",
                    e.date, e.kind
                )));
            }
        }
        for o in &agio_observations {
            o.validate()
                .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        }
        events.sort_by_key(|e| e.date);
        Ok(Scenario {
            name: name.into(),
            params,
            start,
            initial,
            events,
            agio_observations,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let input = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse(&input)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScenarioError> {
        std::fs::write(path, export(self)).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub date: NaiveDate,
    /// What produced this snapshot; `opening` for the first one.
    pub label: String,
    #[serde(rename = "MB")]
    pub mb: Money,
    #[serde(rename = "BW")]
    pub bw: Money,
    #[serde(rename = "TW")]
    pub tw: Money,
    #[serde(rename = "TB_fiscal")]
    pub tb_fiscal: Money,
    pub consolidated_net_worth: Money,
    /// `None` until an agio model has been set.
    pub agio: Option<f64>,
}

impl Snapshot {
    fn take(date: NaiveDate, label: &str, sector: &PublicSector, agio: Option<&AgioModel>) -> Self {
        let mb = sector.balance(Position::MONETARY_MB);
        Snapshot {
            date,
            label: label.to_string(),
            mb,
            bw: sector.balance(Position::MONETARY_BW),
            tw: sector.balance(Position::FISCAL_TW),
            tb_fiscal: sector.balance(Position::FISCAL_TB),
            consolidated_net_worth: sector.consolidated_net_worth(),
            // MB is positive whenever a model could have been fitted
            agio: agio.and_then(|m| m.predict(mb.get() as f64).ok()),
        }
    }
}

/// Interest-bearing debt created when bank money is converted by a reversal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundedDebt {
    pub date: NaiveDate,
    pub principal: Money,
    pub rate: f64,
    pub note: String,
}

impl FundedDebt {
    /// Simple annual interest.
    pub fn annual_service(&self) -> f64 {
        self.principal.get() as f64 * self.rate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub series: Vec<Snapshot>,
    pub funded_debt_schedule: Vec<FundedDebt>,
    pub agio_model: Option<AgioModel>,
    #[serde(skip)]
    pub sector: PublicSector,
}

impl RunResult {
    pub fn annual_debt_service(&self) -> f64 {
        self.funded_debt_schedule
            .iter()
            .map(FundedDebt::annual_service)
            .sum()
    }

    /// Debt service after `years` of simple interest on every record.
    pub fn accrued_interest(&self, years: u32) -> f64 {
        self.annual_debt_service() * f64::from(years)
    }
}

/// Applies the events in order. Pure: the same scenario always produces
/// the same result.
pub fn run(scenario: &Scenario) -> Result<RunResult, ScenarioError> {
    let mut sector = PublicSector::with_opening(scenario.initial)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    let mut model: Option<AgioModel> = None;
    let mut series = vec![Snapshot::take(scenario.start, "opening", &sector, None)];
    let mut schedule = Vec::new();

    for event in &scenario.events {
        let ledger_err = |source| ScenarioError::Ledger {
            date: event.date,
            label: event.label().to_string(),
            source,
        };
        match event.kind {
            EventKind::Endow => {
                let x = event.amount;
                sector
                    .post(
                        Transaction::new(format!("{} endowment", event.date))
                            .post(Position::FISCAL_TA, x)
                            .post(Position::FISCAL_TW, x),
                    )
                    .map_err(ledger_err)?;
            }
            EventKind::SetAgioModel => {
                let fitted = if event.amount == Money::ZERO {
                    market::fit(&scenario.agio_observations)
                } else {
                    market::fit_with_reference(
                        &scenario.agio_observations,
                        event.amount.get() as f64,
                    )
                };
                model = Some(fitted.map_err(|source| ScenarioError::Market {
                    date: event.date,
                    label: event.label().to_string(),
                    source,
                })?);
            }
            EventKind::Observe => {}
            kind => {
                let strategy = kind.strategy().expect("posting kinds map to strategies");
                let mut txs = strategy.transactions(event.amount).map_err(ledger_err)?;
                for tx in &mut txs {
                    tx.label = format!("{} {}", event.date, tx.label);
                }
                sector.post_all(txs).map_err(ledger_err)?;
                if kind == EventKind::ReversalBailout {
                    schedule.push(FundedDebt {
                        date: event.date,
                        principal: event.amount,
                        rate: event.rate.expect("validated reversal has a rate"),
                        note: event.note.clone(),
                    });
                }
            }
        }
        series.push(Snapshot::take(
            event.date,
            event.label(),
            &sector,
            model.as_ref(),
        ));
    }
    sector
        .check_invariants()
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(RunResult {
        series,
        funded_debt_schedule: schedule,
        agio_model: model,
        sector,
    })
}

pub const SERIES_HEADER: [&str; 7] = [
    "date",
    "MB",
    "BW",
    "TW",
    "TB_fiscal",
    "consolidated_net_worth",
    "agio",
];

/// Writes the series as CSV. An unset agio is an empty field.
pub fn write_series_csv<W: Write>(result: &RunResult, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SERIES_HEADER)?;
    for s in &result.series {
        w.write_record([
            s.date.to_string(),
            s.mb.to_string(),
            s.bw.to_string(),
            s.tw.to_string(),
            s.tb_fiscal.to_string(),
            s.consolidated_net_worth.to_string(),
            s.agio.map(|a| format!("{a:?}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_csv(result: &RunResult, path: &Path) -> Result<(), ScenarioError> {
    let io_err = |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_series_csv(result, std::io::BufWriter::new(file)).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(source),
        other => ScenarioError::Validation(format!("{other:?}")),
    })
}
