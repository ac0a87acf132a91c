//! One-shot welfare model of a pandemic transfer financed by taxes, bonds
//! and money.
//!
//! The policymaker picks a transfer share `beta` of the inhabitants' risky
//! losses, a monetization share `delta` of that transfer, and the tax rate
//! `tau` that services the bond-financed part. Welfare is inhabitant utility
//! net of two externalities:
//!
//! ```text
//! V = U - F - M
//! U = (1-tau)^(1+eta)/(1+eta) + p*beta*theta*(1 + i(1-delta)) + (1-p)*theta
//! F = eps/2 * ((1-beta)*theta)^2
//! M = phi/2 * delta^2 * beta * theta
//! ```
//!
//! The safe-income term is the indirect utility of an inhabitant with effort
//! disutility `l^(1+1/eta)/(1+1/eta)`, whose labour supply is `(1-tau)^eta`.

mod budget;
mod optimize;
mod params;
mod politics;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use budget::{budget_tau, laffer_peak, revenue};
pub use optimize::{
    comparative_statics_sweep, golden_section_max, optimal_delta_given_beta, optimal_policy_numeric,
    optimize_policy, DeltaGrid, NumericOptimum, SweepRow, GRID_STEP,
};
pub use params::{ModelParams, ParamsError};
pub use politics::{
    actual_delta, inhabitant_optimal_delta, inhabitant_welfare, inhabitant_welfare_budgeted,
    political_distortion, preferred_delta_on_grid,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible budget: required revenue {required:.6} exceeds the Laffer peak {peak:.6}")]
    Infeasible { required: f64, peak: f64 },
    #[error("no feasible policy on the search grid")]
    NoFeasiblePolicy,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

/// The policy triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyChoice {
    pub tau: f64,
    pub beta: f64,
    pub delta: f64,
}

impl PolicyChoice {
    pub fn new(tau: f64, beta: f64, delta: f64) -> Result<Self, ModelError> {
        let p = PolicyChoice { tau, beta, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..1.0).contains(&self.tau) {
            return Err(ModelError::Domain(format!(
                "tax rate must lie in [0, 1), got {}",
                self.tau
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ModelError::Domain(format!(
                "transfer share must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(ModelError::Domain(format!(
                "monetization share must lie in [0, 1], got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareBreakdown {
    pub u: f64,
    pub f: f64,
    pub m: f64,
    pub v: f64,
}

impl WelfareBreakdown {
    fn from_parts(u: f64, f: f64, m: f64) -> Self {
        WelfareBreakdown {
            u,
            f,
            m,
            v: u - f - m,
        }
    }
}

/// A share computed from a closed form, clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Share {
    pub clamped: f64,
    pub unclamped: f64,
}

impl Share {
    pub fn from_unclamped(unclamped: f64) -> Self {
        Share {
            clamped: unclamped.clamp(0.0, 1.0),
            unclamped,
        }
    }
}

fn check_tau(tau: f64) -> Result<(), ModelError> {
    if (0.0..1.0).contains(&tau) {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "tax rate must lie in [0, 1), got {tau}"
        )))
    }
}

/// Optimal effort given the tax rate: `(1 - tau)^eta`.
pub fn labor_supply(tau: f64, params: &ModelParams) -> Result<f64, ModelError> {
    check_tau(tau)?;
    Ok((1.0 - tau).powf(params.eta))
}

/// Expected utility of the average inhabitant at their optimal effort.
pub fn inhabitant_utility(policy: &PolicyChoice, params: &ModelParams) -> Result<f64, ModelError> {
    policy.validate()?;
    let eta = params.eta;
    let safe = (1.0 - policy.tau).powf(1.0 + eta) / (1.0 + eta);
    let pandemic = policy.beta * params.theta_bar * gross_bond_return(policy.delta, params);
    let normal = params.theta_bar;
    Ok(safe + params.p * pandemic + (1.0 - params.p) * normal)
}

/// Pandemic-state consumption: after-tax safe income plus the transfer and
/// the interest on the bonds that financed it.
pub fn consumption(policy: &PolicyChoice, params: &ModelParams) -> Result<f64, ModelError> {
    policy.validate()?;
    let l = labor_supply(policy.tau, params)?;
    Ok(l * (1.0 - policy.tau)
        + policy.beta * params.theta_bar * gross_bond_return(policy.delta, params))
}

/// `1 + i(1 - delta)`: what the state repays per unit of transfer.
pub(crate) fn gross_bond_return(delta: f64, params: &ModelParams) -> f64 {
    1.0 + params.i * (1.0 - delta)
}

/// Cost of monetary instability, quadratic in monetization.
pub fn monetary_externality(beta: f64, delta: f64, params: &ModelParams) -> f64 {
    0.5 * params.phi * delta * delta * beta * params.theta_bar
}

/// Cost of leaving risky losses uncovered.
pub fn pandemic_externality(beta: f64, params: &ModelParams) -> f64 {
    let uncovered = (1.0 - beta) * params.theta_bar;
    0.5 * params.eps * uncovered * uncovered
}

/// Welfare at an arbitrary policy triple (tau need not balance the budget).
pub fn welfare(policy: &PolicyChoice, params: &ModelParams) -> Result<WelfareBreakdown, ModelError> {
    let u = inhabitant_utility(policy, params)?;
    let f = pandemic_externality(policy.beta, params);
    let m = monetary_externality(policy.beta, policy.delta, params);
    Ok(WelfareBreakdown::from_parts(u, f, m))
}

/// Welfare with the tax rate set by the budget constraint.
pub fn welfare_budgeted(
    beta: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<(PolicyChoice, WelfareBreakdown), ModelError> {
    let tau = budget_tau(beta, delta, params)?;
    let policy = PolicyChoice::new(tau, beta, delta)?;
    Ok((policy, welfare(&policy, params)?))
}

/// Socially optimal monetization in closed form: `eta/(1-eta) * i/phi`.
pub fn optimal_delta_closed_form(params: &ModelParams) -> Share {
    Share::from_unclamped(params.eta / (1.0 - params.eta) * params.i / params.phi)
}

/// Resources the central bank must issue to implement `delta_star`: the
/// monetized part of the transfer, `delta* * beta * theta`.
pub fn central_bank_resource(delta_star: f64, beta: f64, params: &ModelParams) -> f64 {
    delta_star * beta * params.theta_bar
}
