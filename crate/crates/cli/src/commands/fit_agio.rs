use std::path::PathBuf;

use clap::Args;
use giro_core::market::{self, AgioObservation};
use serde_json::json;

use crate::error::CliError;
use crate::output::{csv_bytes, num, Format};
use crate::Context;

#[derive(Args)]
pub struct FitAgioArgs {
    /// Observation CSV with header `label,money_stock,agio`. Without it the
    /// early-1629 and 1630 observations are used.
    #[arg(value_name = "OBSERVATIONS")]
    pub observations: Option<PathBuf>,
    /// Reference money stock; defaults to the smallest observed stock.
    #[arg(long)]
    pub m_ref: Option<f64>,
}

fn default_observations() -> Vec<AgioObservation> {
    vec![
        AgioObservation {
            label: "early 1629".into(),
            money_stock: 1_000_000.0,
            agio: 0.195,
        },
        AgioObservation {
            label: "1630".into(),
            money_stock: 2_666_926.0,
            agio: -0.10,
        },
    ]
}

pub fn run(ctx: &Context, args: &FitAgioArgs) -> Result<(), CliError> {
    let obs = match &args.observations {
        Some(path) => market::load_observations(path)?,
        None => default_observations(),
    };
    let model = match args.m_ref {
        Some(m) => market::fit_with_reference(&obs, m)?,
        None => market::fit(&obs)?,
    };
    let residuals = model.residuals(&obs)?;

    let rows = || {
        obs.iter().zip(&residuals).map(|(o, r)| {
            let predicted = o.agio - r;
            [o.label.clone(), num(o.money_stock), num(o.agio), num(predicted), num(*r)]
        })
    };
    let header = ["label", "money_stock", "agio", "predicted", "residual"];

    match ctx.output.format {
        Some(Format::Json) => {
            return ctx.output.emit_json(
                "fit-agio",
                json!({
                    "model": model,
                    "observations": obs.iter().zip(&residuals).map(|(o, r)| json!({
                        "label": o.label,
                        "money_stock": o.money_stock,
                        "agio": o.agio,
                        "predicted": o.agio - r,
                        "residual": r,
                    })).collect::<Vec<_>>(),
                }),
            )
        }
        Some(Format::Csv) => return ctx.output.emit(&csv_bytes(&header, rows())),
        None => {}
    }

    let o = &ctx.output;
    o.say(o.heading("Agio model: agio = agio_ref - kappa ln(M / m_ref)"));
    o.say(format!("  kappa    = {:.6}", model.kappa));
    o.say(format!("  m_ref    = {:.0}", model.m_ref));
    o.say(format!("  agio_ref = {:.6}", model.agio_ref));
    o.say(format!(
        "  {:<14} {:>12} {:>9} {:>10} {:>10}",
        "observation", "M", "agio", "predicted", "residual"
    ));
    for (ob, r) in obs.iter().zip(&residuals) {
        o.say(format!(
            "  {:<14} {:>12.0} {:>9.4} {:>10.6} {:>10.2e}",
            ob.label,
            ob.money_stock,
            ob.agio,
            ob.agio - r,
            r
        ));
    }
    if o.out.is_some() {
        o.emit(&csv_bytes(&header, rows()))?;
    }
    Ok(())
}
