use std::path::PathBuf;

use clap::Args;
use giro_core::policy::{
    actual_delta, inhabitant_optimal_delta, political_distortion, preferred_delta_on_grid, DeltaGrid,
};
use giro_core::population::{
    class_counts, classify, condorcet_delta, median_inhabitant, median_subsidy_inhabitant,
    Population, PopulationError,
};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::output::{csv_bytes, num, Format};
use crate::Context;

#[derive(Args)]
pub struct PoliticsArgs {
    /// Population CSV with header `theta_j,b_j`. Without it a population is
    /// drawn from `--seed`.
    #[arg(long, value_name = "PATH")]
    pub population: Option<PathBuf>,
    /// Size of a generated population.
    #[arg(long, default_value_t = 11)]
    pub members: usize,
    /// Half-width of the uniform deviations of a generated population.
    #[arg(long, default_value_t = 0.1)]
    pub spread: f64,
    /// Transfer share.
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
}

#[derive(Serialize)]
struct MemberRow {
    theta_j: f64,
    b_j: f64,
    class: String,
    delta_j: f64,
    delta_j_unclamped: f64,
    distortion: f64,
    /// Numerically preferred grid point; `None` when nothing is feasible.
    preferred_on_grid: Option<f64>,
}

#[derive(Serialize)]
struct Verdict {
    winner: Option<f64>,
    median_preferred: Option<f64>,
    agrees: bool,
    note: String,
}

const MEMBER_HEADER: [&str; 7] = [
    "theta_j",
    "b_j",
    "class",
    "delta_j",
    "delta_j_unclamped",
    "distortion",
    "preferred_on_grid",
];

pub fn run(ctx: &Context, args: &PoliticsArgs) -> Result<(), CliError> {
    let p = &ctx.params;
    let pop = match &args.population {
        Some(path) => Population::load(path)?,
        None => Population::random(args.members, args.spread, ctx.seed)?,
    };
    let grid = DeltaGrid::new(ctx.grid_step)?;
    let median = median_inhabitant(&pop);
    let subsidy_median = median_subsidy_inhabitant(&pop);
    let distortion = political_distortion(&median, args.beta, p)?;
    let delta_a = actual_delta(&median, args.beta, p)?;

    let mut rows = Vec::with_capacity(pop.len());
    for j in pop.members() {
        let d = inhabitant_optimal_delta(j, args.beta, p)?;
        rows.push(MemberRow {
            theta_j: j.theta_j,
            b_j: j.b_j,
            class: classify(j, args.beta, p)?.to_string(),
            delta_j: d.clamped,
            delta_j_unclamped: d.unclamped,
            distortion: political_distortion(j, args.beta, p)?,
            preferred_on_grid: preferred_delta_on_grid(j, args.beta, p, grid).ok(),
        });
    }
    let counts = class_counts(&pop, args.beta, p)?;

    let median_preferred = preferred_delta_on_grid(&median, args.beta, p, grid).ok();
    let verdict = match condorcet_delta(&pop, args.beta, p, ctx.grid_step) {
        Ok(w) => Verdict {
            winner: Some(w),
            median_preferred,
            agrees: Some(w) == median_preferred,
            note: if Some(w) == median_preferred {
                "Condorcet winner is the median inhabitant's preferred grid point".into()
            } else {
                "Condorcet winner differs from the median inhabitant's preferred grid point".into()
            },
        },
        Err(e @ (PopulationError::NoCondorcetWinner | PopulationError::Model(_))) => Verdict {
            winner: None,
            median_preferred,
            agrees: false,
            note: e.to_string(),
        },
        Err(e) => return Err(e.into()),
    };

    match ctx.output.format {
        Some(Format::Json) => {
            return ctx.output.emit_json(
                "politics",
                json!({
                    "params": p,
                    "beta": args.beta,
                    "population": pop.description(),
                    "median_inhabitant": median,
                    "median_subsidy_inhabitant": subsidy_median,
                    "distortion": distortion,
                    "delta_a": delta_a,
                    "members": rows,
                    "class_counts": counts.iter().map(|(c, n)| json!({"class": c.to_string(), "count": n})).collect::<Vec<_>>(),
                    "condorcet": verdict,
                }),
            )
        }
        Some(Format::Csv) => return ctx.output.emit(&members_csv(&rows)),
        None => {}
    }

    let o = &ctx.output;
    o.say(o.heading(&format!("Population: {} ({} members)", pop.description(), pop.len())));
    o.say(format!(
        "  median inhabitant (by b_j): theta_j = {:.6}, b_j = {:.6}",
        median.theta_j, median.b_j
    ));
    o.say(format!(
        "  median theta_j = {:.6} ({})",
        subsidy_median.theta_j,
        if subsidy_median.theta_j > 0.0 {
            "subsidized inhabitants are a majority"
        } else {
            "subsidized inhabitants are not a majority"
        }
    ));
    o.say(format!("  distortion of the median = {distortion:.6}"));
    o.say(format!("  delta_A = chi x |distortion| = {delta_a:.6}"));
    o.say(o.heading("Preferences"));
    o.say(format!(
        "  {:>9} {:>9} {:>9} {:>10} {:>9}  class",
        "theta_j", "b_j", "delta_j", "distortion", "grid"
    ));
    for r in &rows {
        o.say(format!(
            "  {:>9.5} {:>9.5} {:>9.5} {:>10.5} {:>9}  {}",
            r.theta_j,
            r.b_j,
            r.delta_j,
            r.distortion,
            r.preferred_on_grid.map_or("-".into(), |d| format!("{d:.2}")),
            r.class
        ));
    }
    o.say(o.heading("Classes"));
    for (class, n) in &counts {
        o.say(format!("  {class:<30} {n}"));
    }
    o.say(o.heading("Condorcet check"));
    match verdict.winner {
        Some(w) => o.say(format!(
            "  winner delta = {w:.2}, median prefers {}: {}",
            median_preferred.map_or("-".into(), |d| format!("{d:.2}")),
            o.verdict(verdict.agrees)
        )),
        None => o.say(format!("  {}", verdict.note)),
    }
    if o.out.is_some() {
        o.emit(&members_csv(&rows))?;
    }
    Ok(())
}

fn members_csv(rows: &[MemberRow]) -> Vec<u8> {
    csv_bytes(
        &MEMBER_HEADER,
        rows.iter().map(|r| {
            [
                num(r.theta_j),
                num(r.b_j),
                r.class.clone(),
                num(r.delta_j),
                num(r.delta_j_unclamped),
                num(r.distortion),
                r.preferred_on_grid.map(num).unwrap_or_default(),
            ]
        }),
    )
}
