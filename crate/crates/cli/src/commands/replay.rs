use chrono::Datelike;
use giro_core::ledger::Money;
use giro_core::scenario::{self, RunResult};
use serde::Serialize;
use serde_json::json;

use super::ScenarioSource;
use crate::error::CliError;
use crate::output::Format;
use crate::Context;

/// Checkpoints apply to scenarios carrying the built-in scenario's name,
/// including edited copies of it.
const VENICE: &str = "venice-1629";

/// Giro balances reported for the 1630 crisis and its aftermath.
const CHECKPOINTS: [(&str, i32, Option<u32>, i64); 4] = [
    ("April 1630", 1630, Some(4), 2_071_168),
    ("June 1630", 1630, Some(6), 2_666_926),
    ("end of 1630", 1630, Some(12), 1_400_000),
    ("1638", 1638, None, 900_000),
];

/// The September 1630 transfer into 7% Mint deposits.
const REFORM: (i64, f64) = (716_652, 0.07);

#[derive(Serialize)]
pub struct Checkpoint {
    pub label: String,
    pub expected: Money,
    /// Last money stock recorded in the period, if any.
    pub actual: Option<Money>,
    pub pass: bool,
}

pub fn checkpoints(result: &RunResult) -> Vec<Checkpoint> {
    let mut out: Vec<Checkpoint> = CHECKPOINTS
        .iter()
        .map(|&(label, year, month, mb)| {
            let actual = result
                .series
                .iter()
                .filter(|s| s.date.year() == year && month.is_none_or(|m| s.date.month() == m))
                .map(|s| s.mb)
                .next_back();
            Checkpoint {
                label: format!("MB {label}"),
                expected: Money(mb),
                actual,
                pass: actual == Some(Money(mb)),
            }
        })
        .collect();
    let reform = result
        .funded_debt_schedule
        .iter()
        .find(|f| f.principal == Money(REFORM.0));
    out.push(Checkpoint {
        label: format!("funded debt {} at {:.0}%", REFORM.0, REFORM.1 * 100.0),
        expected: Money(REFORM.0),
        actual: reform.map(|f| f.principal),
        pass: reform.is_some_and(|f| f.rate == REFORM.1),
    });
    out
}

pub fn run(ctx: &Context, source: &ScenarioSource) -> Result<(), CliError> {
    let scenario = source.load(ctx)?;
    let result = scenario::run(&scenario)?;
    let checks = (scenario.name == VENICE).then(|| checkpoints(&result));
    let mut series_csv = Vec::new();
    scenario::write_series_csv(&result, &mut series_csv)
        .map_err(|e| CliError::Input(format!("CSV encoding failed: {e}")))?;

    if ctx.output.format == Some(Format::Json) {
        return ctx.output.emit_json(
            "replay",
            json!({
                "scenario": scenario.name,
                "series": result.series,
                "funded_debt_schedule": result.funded_debt_schedule,
                "annual_debt_service": result.annual_debt_service(),
                "agio_model": result.agio_model,
                "checkpoints": checks,
            }),
        );
    }

    let o = &ctx.output;
    o.say(o.heading(&format!(
        "Replay of `{}`: {} events, {} snapshots",
        scenario.name,
        scenario.events.len(),
        result.series.len()
    )));
    if checks.is_some() {
        o.say(format!("  {:<34} {:>12} {:>12}  verdict", "checkpoint", "expected", "actual"));
    }
    for c in checks.iter().flatten() {
        o.say(format!(
            "  {:<34} {:>12} {:>12}  {}",
            c.label,
            c.expected,
            c.actual.map_or("-".into(), |m| m.to_string()),
            o.verdict(c.pass)
        ));
    }
    o.say(o.heading("Funded debt"));
    for f in &result.funded_debt_schedule {
        o.say(format!(
            "  {} {:>10} at {:>5.2}%  service {:>10.2}/yr  {}",
            f.date,
            f.principal,
            f.rate * 100.0,
            f.annual_service(),
            f.note
        ));
    }
    o.say(format!("  total annual service {:.2}", result.annual_debt_service()));
    if ctx.output.format == Some(Format::Csv) || o.out.is_some() {
        o.emit(&series_csv)?;
    } else {
        o.say(o.heading("Series"));
        for line in String::from_utf8_lossy(&series_csv).lines() {
            o.say(format!("  {line}"));
        }
    }
    Ok(())
}
