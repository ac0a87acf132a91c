//! Preferences of individual inhabitants and the political distortion they
//! induce on monetization.

use super::optimize::DeltaGrid;
use super::{welfare, welfare_budgeted, ModelError, ModelParams, PolicyChoice, Share};
use crate::population::Inhabitant;

fn require_transfer(beta: f64) -> Result<(), ModelError> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "individual monetization preferences need a transfer share in (0, 1], got {beta}"
        )))
    }
}

fn heterogeneity_terms(j: &Inhabitant, beta: f64, delta: f64, params: &ModelParams) -> f64 {
    beta * j.theta_j + j.b_j * params.theta_bar * params.i * (1.0 - delta)
}

/// Welfare of inhabitant `j`: average welfare plus the subsidy gain
/// `beta * theta_j` and the bond-income term `b_j * theta * i(1 - delta)`.
pub fn inhabitant_welfare(
    j: &Inhabitant,
    policy: &PolicyChoice,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    let base = welfare(policy, params)?.v;
    Ok(base + heterogeneity_terms(j, policy.beta, policy.delta, params))
}

/// [`inhabitant_welfare`] with the budget-balancing tax rate.
pub fn inhabitant_welfare_budgeted(
    j: &Inhabitant,
    beta: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    let (_, w) = welfare_budgeted(beta, delta, params)?;
    Ok(w.v + heterogeneity_terms(j, beta, delta, params))
}

/// Closed-form preferred monetization of inhabitant `j`:
/// `(eta/(1-eta) - b_j/beta) * i/phi`.
pub fn inhabitant_optimal_delta(
    j: &Inhabitant,
    beta: f64,
    params: &ModelParams,
) -> Result<Share, ModelError> {
    require_transfer(beta)?;
    let unclamped = (params.eta / (1.0 - params.eta) - j.b_j / beta) * params.i / params.phi;
    Ok(Share::from_unclamped(unclamped))
}

/// Gap between `j`'s preferred and the socially optimal monetization,
/// `-(b_j/beta) * i/phi`. Unclamped.
pub fn political_distortion(
    j: &Inhabitant,
    beta: f64,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    require_transfer(beta)?;
    // `+ 0.0` turns the -0.0 of an average bond holder into 0.0
    Ok(-(j.b_j / beta) * params.i / params.phi + 0.0)
}

/// Monetization actually chosen under political pressure:
/// `chi * |distortion of the median inhabitant|`.
pub fn actual_delta(
    median: &Inhabitant,
    beta: f64,
    params: &ModelParams,
) -> Result<f64, ModelError> {
    Ok(params.chi * political_distortion(median, beta, params)?.abs())
}

/// The grid point that maximizes `j`'s welfare with the budget-balancing
/// tax. Infeasible points are skipped; ties go to the lower `delta`.
pub fn preferred_delta_on_grid(
    j: &Inhabitant,
    beta: f64,
    params: &ModelParams,
    grid: DeltaGrid,
) -> Result<f64, ModelError> {
    require_transfer(beta)?;
    let mut best: Option<(f64, f64)> = None;
    for delta in grid.points() {
        if let Ok(v) = inhabitant_welfare_budgeted(j, beta, delta, params) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((delta, v));
            }
        }
    }
    best.map(|(d, _)| d).ok_or(ModelError::NoFeasiblePolicy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::optimal_delta_closed_form;

    const TOL: f64 = 1e-12;

    fn params() -> ModelParams {
        ModelParams::default()
    }

    fn who(theta_j: f64, b_j: f64) -> Inhabitant {
        Inhabitant { theta_j, b_j }
    }

    #[test]
    fn average_inhabitant_gets_average_welfare() {
        let policy = PolicyChoice::new(0.3, 0.5, 0.5).unwrap();
        let v = welfare(&policy, &params()).unwrap().v;
        assert_eq!(inhabitant_welfare(&who(0.0, 0.0), &policy, &params()).unwrap(), v);
    }

    #[test]
    fn heterogeneity_terms_add_up() {
        let policy = PolicyChoice::new(0.3, 0.5, 0.5).unwrap();
        let v = welfare(&policy, &params()).unwrap().v;
        let sub = inhabitant_welfare(&who(0.2, 0.0), &policy, &params()).unwrap();
        assert!((sub - v - 0.1).abs() < TOL);
        let bond = inhabitant_welfare(&who(0.0, 0.3), &policy, &params()).unwrap();
        assert!((bond - v - 0.0105).abs() < TOL);
        let full = PolicyChoice::new(0.3, 0.5, 1.0).unwrap();
        let vf = welfare(&full, &params()).unwrap().v;
        for b in [-0.5, 0.0, 0.7] {
            assert_eq!(inhabitant_welfare(&who(0.0, b), &full, &params()).unwrap(), vf);
        }
    }

    #[test]
    fn individual_closed_forms() {
        let p = params();
        let star = optimal_delta_closed_form(&p);
        assert_eq!(
            inhabitant_optimal_delta(&who(0.0, 0.0), 0.5, &p).unwrap(),
            star
        );
        let d = inhabitant_optimal_delta(&who(0.0, -0.25), 0.5, &p).unwrap();
        assert!((d.clamped - 0.75).abs() < TOL);
        let d = inhabitant_optimal_delta(&who(0.0, -1.0), 0.25, &p).unwrap();
        assert!((d.unclamped - 2.5).abs() < TOL);
        assert_eq!(d.clamped, 1.0);
        assert!(inhabitant_optimal_delta(&who(0.0, 0.1), 0.0, &p).is_err());
    }

    #[test]
    fn distortion_sign_and_size() {
        let p = params();
        assert_eq!(political_distortion(&who(0.0, 0.0), 0.5, &p).unwrap(), 0.0);
        assert!((political_distortion(&who(0.0, -0.25), 0.5, &p).unwrap() - 0.25).abs() < TOL);
        assert!((political_distortion(&who(0.0, 0.25), 0.5, &p).unwrap() + 0.25).abs() < TOL);
        assert!(political_distortion(&who(0.0, 0.25), 0.0, &p).is_err());
    }

    #[test]
    fn distortion_is_the_gap_between_closed_forms() {
        let p = params();
        for (b, beta) in [(-0.3, 0.2), (0.1, 0.7), (0.45, 0.05)] {
            let j = who(0.0, b);
            let gap = inhabitant_optimal_delta(&j, beta, &p).unwrap().unclamped
                - optimal_delta_closed_form(&p).unclamped;
            assert!((gap - political_distortion(&j, beta, &p).unwrap()).abs() < TOL);
        }
    }

    #[test]
    fn pressure_scales_the_distortion() {
        let p = params();
        let j = who(0.0, -0.25);
        let none = ModelParams { chi: 0.0, ..p };
        assert_eq!(actual_delta(&j, 0.5, &none).unwrap(), 0.0);
        assert!((actual_delta(&j, 0.5, &p).unwrap() - 0.1).abs() < TOL);
        let full = ModelParams { chi: 1.0, ..p };
        assert!((actual_delta(&j, 0.5, &full).unwrap() - 0.25).abs() < TOL);
        // non-directional: a bond holder produces the same pressure
        assert!((actual_delta(&who(0.0, 0.25), 0.5, &p).unwrap() - 0.1).abs() < TOL);
    }

    #[test]
    fn bond_holders_prefer_less_money() {
        let p = params();
        let grid = DeltaGrid::new(0.01).unwrap();
        let prone = preferred_delta_on_grid(&who(0.0, -0.05), 0.2, &p, grid).unwrap();
        let average = preferred_delta_on_grid(&who(0.0, 0.0), 0.2, &p, grid).unwrap();
        let holder = preferred_delta_on_grid(&who(0.0, 0.05), 0.2, &p, grid).unwrap();
        assert!(prone > average && average > holder, "{prone} {average} {holder}");
    }
}
