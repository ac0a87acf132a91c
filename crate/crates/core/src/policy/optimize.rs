//! Numerical welfare maximization: a coarse grid scan followed by
//! golden-section refinement, one coordinate at a time.
//!
//! Ties are broken toward the smallest `beta`, then the smallest `delta`,
//! and refinement only ever accepts strict improvements, so results are
//! reproducible bit for bit.

use serde::{Deserialize, Serialize};

use super::{welfare_budgeted, ModelError, ModelParams, PolicyChoice, WelfareBreakdown};

/// Resolution of the coarse scan.
pub const GRID_STEP: f64 = 0.01;

const MAX_ROUNDS: usize = 500;

/// Evenly spaced points on `[0, 1]`. The step is rounded so that it divides
/// the interval exactly, which keeps both endpoints on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaGrid {
    intervals: usize,
}

impl DeltaGrid {
    pub fn new(step: f64) -> Result<Self, ModelError> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(ModelError::Domain(format!(
                "grid step must lie in (0, 1], got {step}"
            )));
        }
        let intervals = (1.0 / step).round().max(1.0) as usize;
        Ok(DeltaGrid { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        1.0 / self.intervals as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        k as f64 / self.intervals as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.intervals).map(|k| self.point(k))
    }

    /// Index of the grid point nearest to `x` (clamped into `[0, 1]`).
    pub fn nearest_index(&self, x: f64) -> usize {
        (x.clamp(0.0, 1.0) * self.intervals as f64).round() as usize
    }

    pub fn round(&self, x: f64) -> f64 {
        self.point(self.nearest_index(x))
    }
}

/// Maximizes `f` on `[lo, hi]` by golden-section search until the bracket is
/// narrower than `tol`. Returns the best point seen, endpoints included;
/// ties go to the smaller argument.
pub fn golden_section_max(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best = (lo, f(lo));
    let consider = |x: f64, fx: f64, best: &mut (f64, f64)| {
        if fx > best.1 || (fx == best.1 && x < best.0) {
            *best = (x, fx);
        }
    };
    let f_hi = f(hi);
    consider(hi, f_hi, &mut best);
    if hi - lo <= tol {
        return best;
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    best
}

fn check_tol(tol: f64) -> Result<(), ModelError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Maximizes an arbitrary objective over `(beta, delta)` in the unit square.
/// `objective` returns `None` where the policy is infeasible.
pub fn optimize_policy(
    objective: impl Fn(f64, f64) -> Option<f64>,
    tol: f64,
) -> Result<(f64, f64, f64), ModelError> {
    check_tol(tol)?;
    let grid = DeltaGrid::new(GRID_STEP)?;
    let mut best: Option<(f64, f64, f64)> = None;
    for beta in grid.points() {
        for delta in grid.points() {
            if let Some(value) = objective(beta, delta) {
                if best.is_none_or(|(_, _, v)| value > v) {
                    best = Some((beta, delta, value));
                }
            }
        }
    }
    let (mut beta, mut delta, mut value) = best.ok_or(ModelError::NoFeasiblePolicy)?;
    let score = |b: f64, d: f64| objective(b, d).unwrap_or(f64::NEG_INFINITY);
    let h = grid.step();
    for _ in 0..MAX_ROUNDS {
        let (old_beta, old_delta) = (beta, delta);
        let (d, v) = golden_section_max(
            |d| score(beta, d),
            (delta - h).max(0.0),
            (delta + h).min(1.0),
            tol,
        );
        if v > value {
            delta = d;
            value = v;
        }
        let (b, v) = golden_section_max(
            |b| score(b, delta),
            (beta - h).max(0.0),
            (beta + h).min(1.0),
            tol,
        );
        if v > value {
            beta = b;
            value = v;
        }
        if (beta - old_beta).abs() <= tol && (delta - old_delta).abs() <= tol {
            break;
        }
    }
    Ok((beta, delta, value))
}

/// A maximizing policy with its welfare.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericOptimum {
    pub policy: PolicyChoice,
    pub welfare: WelfareBreakdown,
}

/// Welfare-maximizing `(beta, delta)` with the budget-balancing tax rate.
pub fn optimal_policy_numeric(params: &ModelParams, tol: f64) -> Result<NumericOptimum, ModelError> {
    params.validate()?;
    let (beta, delta, _) = optimize_policy(
        |b, d| welfare_budgeted(b, d, params).ok().map(|(_, w)| w.v),
        tol,
    )?;
    let (policy, welfare) = welfare_budgeted(beta, delta, params)?;
    Ok(NumericOptimum { policy, welfare })
}

/// Welfare-maximizing `delta` for a fixed transfer share.
pub fn optimal_delta_given_beta(
    beta: f64,
    params: &ModelParams,
    tol: f64,
) -> Result<NumericOptimum, ModelError> {
    params.validate()?;
    check_tol(tol)?;
    let grid = DeltaGrid::new(GRID_STEP)?;
    let score = |d: f64| {
        welfare_budgeted(beta, d, params)
            .map(|(_, w)| w.v)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut best: Option<(f64, f64)> = None;
    for delta in grid.points() {
        let v = score(delta);
        if v > f64::NEG_INFINITY && best.is_none_or(|(_, bv)| v > bv) {
            best = Some((delta, v));
        }
    }
    let (mut delta, value) = best.ok_or(ModelError::NoFeasiblePolicy)?;
    let h = grid.step();
    let (d, v) = golden_section_max(score, (delta - h).max(0.0), (delta + h).min(1.0), tol);
    if v > value {
        delta = d;
    }
    let (policy, welfare) = welfare_budgeted(beta, delta, params)?;
    Ok(NumericOptimum { policy, welfare })
}

/// One line of a comparative-statics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eta: f64,
    pub i: f64,
    pub phi: f64,
    pub eps: f64,
    pub chi: f64,
    pub beta: f64,
    pub delta: f64,
    pub tau: f64,
    pub u: f64,
    pub f: f64,
    pub m: f64,
    pub v: f64,
}

/// Optimal `delta` at fixed `beta` for every combination of `etas x is x
/// phis` (in that nesting order), other parameters taken from `base`.
pub fn comparative_statics_sweep(
    base: &ModelParams,
    etas: &[f64],
    is: &[f64],
    phis: &[f64],
    beta: f64,
    tol: f64,
) -> Result<Vec<SweepRow>, ModelError> {
    let mut rows = Vec::with_capacity(etas.len() * is.len() * phis.len());
    for &eta in etas {
        for &i in is {
            for &phi in phis {
                let params = ModelParams {
                    eta,
                    i,
                    phi,
                    ..*base
                };
                let opt = optimal_delta_given_beta(beta, &params, tol)?;
                rows.push(SweepRow {
                    eta,
                    i,
                    phi,
                    eps: params.eps,
                    chi: params.chi,
                    beta: opt.policy.beta,
                    delta: opt.policy.delta,
                    tau: opt.policy.tau,
                    u: opt.welfare.u,
                    f: opt.welfare.f,
                    m: opt.welfare.m,
                    v: opt.welfare.v,
                });
            }
        }
    }
    Ok(rows)
}
