use clap::Args;
use giro_core::policy::{
    central_bank_resource, comparative_statics_sweep, optimal_delta_closed_form,
    optimal_policy_numeric, SweepRow,
};
use serde_json::json;

use crate::error::CliError;
use crate::output::{csv_bytes, num, Format};
use crate::Context;

const TOL: f64 = 1e-10;

#[derive(Args)]
pub struct OptimizeArgs {
    /// Transfer share held fixed in the comparative-statics sweep.
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    /// Labour-supply elasticities of the sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.5, 0.6])]
    pub etas: Vec<f64>,
    /// Interest rates of the sweep.
    #[arg(long = "rates", value_delimiter = ',', default_values_t = [0.03, 0.07, 0.14])]
    pub is: Vec<f64>,
    /// Monetary-instability aversions of the sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [0.07, 0.14, 0.28])]
    pub phis: Vec<f64>,
}

const SWEEP_HEADER: [&str; 12] = [
    "eta", "i", "phi", "eps", "chi", "beta", "delta", "tau", "u", "f", "m", "v",
];

fn sweep_record(r: &SweepRow) -> [String; 12] {
    [r.eta, r.i, r.phi, r.eps, r.chi, r.beta, r.delta, r.tau, r.u, r.f, r.m, r.v].map(num)
}

pub fn run(ctx: &Context, args: &OptimizeArgs) -> Result<(), CliError> {
    let p = &ctx.params;
    let closed = optimal_delta_closed_form(p);
    let numeric = optimal_policy_numeric(p, TOL)?;
    let xi = central_bank_resource(closed.clamped, numeric.policy.beta, p);
    let sweep = comparative_statics_sweep(p, &args.etas, &args.is, &args.phis, args.beta, TOL)?;

    match ctx.output.format {
        Some(Format::Json) => {
            return ctx.output.emit_json(
                "optimize",
                json!({
                    "params": p,
                    "closed_form": closed,
                    "numeric": numeric,
                    "central_bank_resource": xi,
                    "sweep_beta": args.beta,
                    "sweep": sweep,
                }),
            )
        }
        Some(Format::Csv) => {
            return ctx
                .output
                .emit(&csv_bytes(&SWEEP_HEADER, sweep.iter().map(sweep_record)))
        }
        None => {}
    }

    let o = &ctx.output;
    o.say(o.heading("Closed-form social optimum"));
    o.say(format!("  delta* = {:.6} (unclamped {:.6})", closed.clamped, closed.unclamped));
    o.say(format!("  central-bank resource xi = delta* x beta* x theta = {xi:.6}"));
    o.say(o.heading("Numeric optimum (budget-balancing tax)"));
    let (pol, w) = (numeric.policy, numeric.welfare);
    o.say(format!(
        "  beta* = {:.6}  delta* = {:.6}  tau = {:.6}",
        pol.beta, pol.delta, pol.tau
    ));
    o.say(format!(
        "  U = {:.6}  F = {:.6}  M = {:.6}  V = {:.6}",
        w.u, w.f, w.m, w.v
    ));
    o.say(o.heading(&format!("Comparative statics at beta = {}", args.beta)));
    o.say(format!(
        "  {:>6} {:>6} {:>6} {:>10} {:>10} {:>10}",
        "eta", "i", "phi", "delta", "tau", "V"
    ));
    for r in &sweep {
        o.say(format!(
            "  {:>6} {:>6} {:>6} {:>10.6} {:>10.6} {:>10.6}",
            r.eta, r.i, r.phi, r.delta, r.tau, r.v
        ));
    }
    if o.out.is_some() {
        o.emit(&csv_bytes(&SWEEP_HEADER, sweep.iter().map(sweep_record)))?;
    }
    Ok(())
}
