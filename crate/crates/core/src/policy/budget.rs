use super::{gross_bond_return, ModelError, ModelParams};

/// Tax revenue `tau * (1 - tau)^eta` raised at rate `tau`.
pub fn revenue(tau: f64, params: &ModelParams) -> f64 {
    tau * (1.0 - tau).powf(params.eta)
}

/// Revenue-maximizing tax rate `1/(1+eta)` and the revenue it raises.
pub fn laffer_peak(params: &ModelParams) -> (f64, f64) {
    let tau = 1.0 / (1.0 + params.eta);
    (tau, revenue(tau, params))
}

/// Smallest tax rate that services the bond-financed transfer:
/// `tau * l(tau) = beta * theta * (1 + i(1 - delta))`.
///
/// Revenue is increasing on `[0, 1/(1+eta)]`, so the root is bracketed there
/// and found by bisection.
pub fn budget_tau(beta: f64, delta: f64, params: &ModelParams) -> Result<f64, ModelError> {
    if !(0.0..=1.0).contains(&beta) || !(0.0..=1.0).contains(&delta) {
        return Err(ModelError::Domain(format!(
            "beta and delta must lie in [0, 1], got beta={beta}, delta={delta}"
        )));
    }
    let required = beta * params.theta_bar * gross_bond_return(delta, params);
    if required == 0.0 {
        return Ok(0.0);
    }
    let (peak_tau, peak) = laffer_peak(params);
    if required > peak {
        return Err(ModelError::Infeasible { required, peak });
    }
    let (mut lo, mut hi) = (0.0_f64, peak_tau);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if revenue(mid, params) < required {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = |t: f64| (revenue(t, params) - required).abs();
    Ok(if residual(lo) < residual(hi) { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn zero_transfer_needs_no_tax() {
        assert_eq!(budget_tau(0.0, 0.3, &params()).unwrap(), 0.0);
    }

    #[test]
    fn solves_the_fully_monetized_case() {
        // Independent root of tau*sqrt(1-tau) = 0.2 (scipy brentq, xtol 1e-15).
        let tau = budget_tau(0.2, 1.0, &params()).unwrap();
        assert!((tau - 0.227_561_040_322_780_88).abs() < 1e-12);
    }

    #[test]
    fn laffer_infeasibility() {
        let (tau, peak) = laffer_peak(&params());
        assert!((tau - 2.0 / 3.0).abs() < 1e-15);
        // (2/3)(1/3)^0.5
        assert!((peak - 0.384_900_179_459_750_5).abs() < 1e-15);
        match budget_tau(0.5, 1.0, &params()) {
            Err(ModelError::Infeasible { required, peak }) => {
                assert_eq!(required, 0.5);
                assert!(peak < 0.385);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn returns_the_lower_root() {
        // Revenue 0.3 is hit twice; the lower root is below the peak.
        let p = params();
        let tau = budget_tau(0.3, 1.0, &p).unwrap();
        assert!(tau < laffer_peak(&p).0);
    }

    proptest! {
        #[test]
        fn residual_is_tiny(beta in 0.0..=1.0f64, delta in 0.0..=1.0f64,
                            eta in 0.05..0.95f64, i in 0.0..0.3f64) {
            let p = ModelParams { eta, i, ..params() };
            if let Ok(tau) = budget_tau(beta, delta, &p) {
                let required = beta * (1.0 + i * (1.0 - delta));
                prop_assert!((revenue(tau, &p) - required).abs() < 1e-12);
                prop_assert!((0.0..1.0).contains(&tau));
            }
        }
    }
}
