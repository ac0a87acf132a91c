//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use giro_core::ledger::{Authority, LedgerError, Money, Position, PublicSector, Side, Strategy};
use giro_core::market::{fit, AgioObservation};
use giro_core::policy::{
    actual_delta, budget_tau, comparative_statics_sweep, inhabitant_optimal_delta,
    optimal_delta_closed_form, political_distortion, preferred_delta_on_grid, revenue,
    welfare_budgeted, DeltaGrid, ModelError, ModelParams, PolicyChoice,
};
use giro_core::population::{condorcet_delta, median_inhabitant, Inhabitant, Population};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use serde_json::Value;

/// Tolerances and budgets, one place.
const LEDGER_CASES: u32 = 10_000;
const LEDGER_BUDGET: Duration = Duration::from_secs(5);
const SIGNATURE_CASES: u32 = 2_000;
const REPLAY_BUDGET: Duration = Duration::from_secs(1);
const KAPPA_TARGET: f64 = 0.30048;
const KAPPA_TOL: f64 = 1e-3;
const CLOSED_FORM_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-14;
const BUDGET_RESIDUAL_TOL: f64 = 1e-12;
const SWEEP_TOL: f64 = 1e-10;
const SWEEP_BETA: f64 = 0.2;
const VOTER_POPULATIONS: u64 = 500;
const VOTER_BETA: f64 = 0.2;
const VOTER_SPREAD: f64 = 0.1;
const VOTER_BUDGET: Duration = Duration::from_secs(30);
const GRID_STEP: f64 = 0.01;

type Outcome = Result<String, String>;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_giro-sim")
}

fn giro_sim(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(bin())
        .args(args)
        .env("GIRO_SIM_NO_COLOR", "1")
        .output()
        .map_err(|e| format!("cannot start giro-sim: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn books_are_sound(sector: &PublicSector) -> Result<(), TestCaseError> {
    let b = sector.balances();
    for a in Authority::ALL {
        prop_assert_eq!(b.total(a, Side::Asset), b.total(a, Side::Liability));
    }
    prop_assert_eq!(b.get(Position::FISCAL_TD), b.get(Position::MONETARY_TD));
    prop_assert_eq!(b.get(Position::FISCAL_TL), b.get(Position::MONETARY_TL));
    Ok(())
}

fn ledger_conservation() -> Outcome {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config {
        cases: LEDGER_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let ops = prop::collection::vec(
        (prop::sample::select(Strategy::ALL.to_vec()), 0i64..5_000_000),
        1..16,
    );
    runner
        .run(&ops, |ops| {
            let mut sector = PublicSector::new();
            for (s, x) in ops {
                match sector.apply(s, Money(x)) {
                    Ok(()) | Err(LedgerError::NegativeBalance { .. }) => {}
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
                books_are_sound(&sector)?;
            }
            prop_assert!(sector.check_invariants().is_ok());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(took < LEDGER_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{LEDGER_CASES} random sequences in {took:.2?}"))
}

fn strategy_signatures() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: SIGNATURE_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(1i64..1_000_000_000_000), |x| {
            let x = Money(x);
            let z = Money::ZERO;
            for (s, want) in [
                (Strategy::MonetaryBaseHelicopter, (-x, z, x)),
                (Strategy::NetWorthHelicopter, (z, -x, x)),
                (Strategy::ReversalBailout, (-x, x, -x)),
                (Strategy::ClassicalExpansion, (-x, z, z)),
            ] {
                let mut sector = PublicSector::new();
                // money outstanding for the reversal to retire
                sector.net_worth_helicopter(x).unwrap();
                let before = *sector.balances();
                sector.apply(s, x).unwrap();
                let after = sector.balances();
                let delta = |p| after.get(p) - before.get(p);
                let got = (
                    delta(Position::FISCAL_TW),
                    delta(Position::MONETARY_BW),
                    delta(Position::MONETARY_MB),
                );
                prop_assert_eq!(got, want, "{}", s);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{SIGNATURE_CASES} random amounts, 4 strategies"))
}

fn venice_replay() -> Outcome {
    let start = Instant::now();
    let out = giro_sim(&["replay", "--builtin", "venice", "--output", "json"])?;
    let took = start.elapsed();
    ensure(out.status.success(), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let data = &doc["data"];
    let series = data["series"].as_array().ok_or("no series")?;
    let last_mb_in = |prefix: &str| {
        series
            .iter()
            .filter(|s| s["date"].as_str().is_some_and(|d| d.starts_with(prefix)))
            .filter_map(|s| s["MB"].as_i64())
            .next_back()
    };
    for (prefix, mb) in [
        ("1630-04", 2_071_168),
        ("1630-06", 2_666_926),
        ("1630-12", 1_400_000),
        ("1638", 900_000),
    ] {
        let got = last_mb_in(prefix);
        ensure(got == Some(mb), || format!("MB at {prefix}: {got:?}, expected {mb}"))?;
    }
    let reform = data["funded_debt_schedule"]
        .as_array()
        .ok_or("no funded-debt schedule")?
        .iter()
        .any(|f| f["principal"].as_i64() == Some(716_652) && f["rate"].as_f64() == Some(0.07));
    ensure(reform, || "716,652 at 7% missing from the funded-debt schedule".into())?;
    ensure(took < REPLAY_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("4 MB checkpoints exact, 716652 at 7% recorded, {took:.2?}"))
}

fn agio_calibration() -> Outcome {
    let obs = [
        AgioObservation::new("early 1629", 1_000_000.0, 0.195).map_err(|e| e.to_string())?,
        AgioObservation::new("1630", 2_666_926.0, -0.10).map_err(|e| e.to_string())?,
    ];
    let model = fit(&obs).map_err(|e| e.to_string())?;
    let at = |m: f64| model.predict(m).unwrap();
    ensure((model.kappa - KAPPA_TARGET).abs() <= KAPPA_TOL, || {
        format!("kappa {}", model.kappa)
    })?;
    ensure(at(1_000_000.0) > 0.0, || "agio at 1.0M not positive".into())?;
    ensure(at(2_666_926.0) < 0.0, || "agio at 2.67M not negative".into())?;
    ensure(at(1_400_000.0) > 0.0, || "agio at 1.4M not positive".into())?;
    Ok(format!(
        "kappa = {:.6}, agio(1.0M) = {:+.4}, agio(2.67M) = {:+.4}, agio(1.4M) = {:+.4}",
        model.kappa,
        at(1_000_000.0),
        at(2_666_926.0),
        at(1_400_000.0)
    ))
}

fn closed_form_table() -> Outcome {
    let p = ModelParams::default();
    let j = Inhabitant::new(0.0, -0.25);
    let rows = [
        ("delta*", optimal_delta_closed_form(&p).unclamped, 0.5),
        ("delta^j", inhabitant_optimal_delta(&j, 0.5, &p).map_err(|e| e.to_string())?.unclamped, 0.75),
        ("distortion", political_distortion(&j, 0.5, &p).map_err(|e| e.to_string())?, 0.25),
        ("delta_A", actual_delta(&j, 0.5, &p).map_err(|e| e.to_string())?, 0.1),
    ];
    for (name, got, want) in rows {
        ensure((got - want).abs() <= CLOSED_FORM_TOL, || format!("{name} = {got}, expected {want}"))?;
    }
    Ok("delta* 0.5, delta^j 0.75, distortion 0.25, delta_A 0.1".into())
}

fn optimizer_consistency() -> Outcome {
    let base = ModelParams::default();
    let (etas, is, phis) = ([0.3, 0.5, 0.6], [0.03, 0.07, 0.14], [0.07, 0.14, 0.28]);
    let rows = comparative_statics_sweep(&base, &etas, &is, &phis, SWEEP_BETA, SWEEP_TOL)
        .map_err(|e| e.to_string())?;
    let at = |e: usize, i: usize, f: usize| rows[e * 9 + i * 3 + f].delta;
    for e in 0..3 {
        for i in 0..3 {
            for f in 0..3 {
                let here = at(e, i, f);
                ensure(here > 0.0 && here < 1.0, || format!("corner argmax {here}"))?;
                if e < 2 {
                    ensure(at(e + 1, i, f) > here, || format!("not increasing in eta at {e},{i},{f}"))?;
                }
                if i < 2 {
                    ensure(at(e, i + 1, f) > here, || format!("not increasing in i at {e},{i},{f}"))?;
                }
                if f < 2 {
                    ensure(at(e, i, f + 1) < here, || format!("not decreasing in phi at {e},{i},{f}"))?;
                }
            }
        }
    }

    let mut worst_identity = 0.0_f64;
    let mut worst_residual = 0.0_f64;
    let grid = DeltaGrid::new(0.05).map_err(|e| e.to_string())?;
    for &eta in &etas {
        for &i in &is {
            for &phi in &phis {
                let p = ModelParams { eta, i, phi, ..base };
                for beta in grid.points() {
                    for delta in grid.points() {
                        let Ok((policy, w)) = welfare_budgeted(beta, delta, &p) else {
                            continue;
                        };
                        worst_identity = worst_identity.max((w.v - (w.u - w.f - w.m)).abs());
                        let required = beta * p.theta_bar * (1.0 + p.i * (1.0 - delta));
                        worst_residual =
                            worst_residual.max((revenue(policy.tau, &p) - required).abs());
                    }
                }
            }
        }
    }
    for r in &rows {
        worst_identity = worst_identity.max((r.v - (r.u - r.f - r.m)).abs());
    }
    ensure(worst_identity <= IDENTITY_TOL, || format!("v - (u - f - m) = {worst_identity:e}"))?;
    ensure(worst_residual < BUDGET_RESIDUAL_TOL, || format!("budget residual {worst_residual:e}"))?;

    let laffer = budget_tau(0.5, 1.0, &ModelParams { eta: 0.5, ..base });
    ensure(matches!(laffer, Err(ModelError::Infeasible { .. })), || {
        format!("(0.5, 1, 0.5) gave {laffer:?}")
    })?;
    // sanity: the identity also holds off the budget line
    let off = giro_core::policy::welfare(&PolicyChoice::new(0.3, 0.4, 0.6).unwrap(), &base).unwrap();
    ensure((off.v - (off.u - off.f - off.m)).abs() <= IDENTITY_TOL, || "off-budget identity".into())?;
    Ok(format!(
        "27 argmaxes monotone (beta = {SWEEP_BETA}), identity err {worst_identity:.1e}, residual {worst_residual:.1e}, Laffer infeasible"
    ))
}

struct VoterStats {
    agree: u64,
    agree_closed_form: u64,
    took: Duration,
}

fn voter_stats() -> Result<VoterStats, String> {
    let params = ModelParams::default();
    let grid = DeltaGrid::new(GRID_STEP).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (mut agree, mut agree_closed_form) = (0, 0);
    for seed in 0..VOTER_POPULATIONS {
        let n = 2 * (seed as usize % 6) + 1;
        let pop = Population::random(n, VOTER_SPREAD, seed).map_err(|e| e.to_string())?;
        let median = median_inhabitant(&pop);
        let winner = condorcet_delta(&pop, VOTER_BETA, &params, GRID_STEP)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let preferred = preferred_delta_on_grid(&median, VOTER_BETA, &params, grid)
            .map_err(|e| e.to_string())?;
        let closed = inhabitant_optimal_delta(&median, VOTER_BETA, &params)
            .map_err(|e| e.to_string())?;
        agree += u64::from(winner == preferred);
        agree_closed_form += u64::from(winner == grid.round(closed.clamped));
    }
    Ok(VoterStats {
        agree,
        agree_closed_form,
        took: start.elapsed(),
    })
}

fn median_voter(stats: &Result<VoterStats, String>) -> Outcome {
    let s = stats.as_ref().map_err(Clone::clone)?;
    ensure(s.agree == VOTER_POPULATIONS, || {
        format!("{}/{VOTER_POPULATIONS} agree", s.agree)
    })?;
    ensure(s.took < VOTER_BUDGET, || format!("took {:?}", s.took))?;
    Ok(format!(
        "{}/{VOTER_POPULATIONS} Condorcet winners equal the median's preferred grid delta, {:.2?}",
        s.agree, s.took
    ))
}

fn replay_to(path: &Path) -> Result<Vec<u8>, String> {
    let out = giro_sim(&["replay", "--builtin", "venice", "--out", path.to_str().unwrap()])?;
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    std::fs::read(path).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = replay_to(&dir.path().join("a.csv"))?;
    let b = replay_to(&dir.path().join("b.csv"))?;
    ensure(!a.is_empty() && a == b, || "exports differ".into())?;
    Ok(format!("two exports, {} identical bytes", a.len()))
}

fn main() {
    let stats = voter_stats();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "ledger conservation", ledger_conservation()),
        (2, "strategy signatures", strategy_signatures()),
        (3, "Venice replay", venice_replay()),
        (4, "agio calibration", agio_calibration()),
        (5, "closed-form table", closed_form_table()),
        (6, "optimizer consistency", optimizer_consistency()),
        (7, "median-voter oracle", median_voter(&stats)),
        (8, "replay determinism", determinism()),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} {name}: {detail}");
            }
        }
    }
    if let Ok(s) = &stats {
        println!(
            "INFO criterion 7: the grid-rounded closed-form delta^j of the median matches the Condorcet winner in {}/{VOTER_POPULATIONS} populations",
            s.agree_closed_form
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
