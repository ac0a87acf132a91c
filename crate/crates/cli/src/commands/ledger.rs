use clap::Args;
use giro_core::ledger::{
    balances_json, write_transaction_log, Authority, Money, PublicSector, Side, Strategy,
};
use giro_core::scenario;
use serde_json::json;

use super::ScenarioSource;
use crate::error::CliError;
use crate::output::Format;
use crate::Context;

#[derive(Args)]
pub struct LedgerArgs {
    #[command(flatten)]
    pub source: ScenarioSource,
    /// Strategy to apply, as `NAME=AMOUNT` (repeatable), after the scenario
    /// if one is given, otherwise to empty books.
    #[arg(long = "apply", value_name = "NAME=AMOUNT", value_parser = parse_step)]
    pub steps: Vec<(Strategy, Money)>,
}

fn parse_step(s: &str) -> Result<(Strategy, Money), String> {
    let (name, amount) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=AMOUNT, got `{s}`"))?;
    let strategy: Strategy = name.trim().parse()?;
    let amount: i64 = amount
        .trim()
        .replace('_', "")
        .parse()
        .map_err(|_| format!("`{amount}` is not a whole number of ducats"))?;
    Ok((strategy, Money(amount)))
}

pub fn run(ctx: &Context, args: &LedgerArgs) -> Result<(), CliError> {
    let mut sector = if args.source.is_given() {
        scenario::run(&args.source.load(ctx)?)?.sector
    } else if args.steps.is_empty() {
        return Err(CliError::Input(
            "give --scenario, --builtin or at least one --apply NAME=AMOUNT".into(),
        ));
    } else {
        PublicSector::new()
    };
    for &(strategy, amount) in &args.steps {
        sector
            .apply(strategy, amount)
            .map_err(|e| CliError::Domain(format!("{} in {strategy} {amount}: {e}", e.kind())))?;
    }
    sector
        .check_invariants()
        .map_err(|e| CliError::Domain(e.to_string()))?;

    let mut log = Vec::new();
    write_transaction_log(&sector, &mut log)
        .map_err(|e| CliError::Input(format!("CSV encoding failed: {e}")))?;

    match ctx.output.format {
        Some(Format::Json) => {
            return ctx.output.emit_json(
                "ledger",
                json!({
                    "balances": balances_json(sector.balances()),
                    "consolidated_net_worth": sector.consolidated_net_worth(),
                    "transactions": sector.history(),
                }),
            )
        }
        Some(Format::Csv) => return ctx.output.emit(&log),
        None => {}
    }

    let o = &ctx.output;
    let b = sector.balances();
    for authority in Authority::ALL {
        o.say(o.heading(&format!("{authority} authority")));
        for side in [Side::Asset, Side::Liability] {
            let cells: Vec<String> = b
                .iter()
                .filter(|(p, _)| p.authority() == authority && p.side() == side)
                .map(|(p, m)| format!("{}={m}", p.item()))
                .collect();
            o.say(format!(
                "  {:<11} {:>12}  {}",
                side.plural(),
                b.total(authority, side),
                cells.join(" ")
            ));
        }
    }
    o.say(format!(
        "consolidated net worth {}  ({} transactions posted)",
        sector.consolidated_net_worth(),
        sector.history().len()
    ));
    if o.out.is_some() {
        o.emit(&log)?;
    }
    Ok(())
}
