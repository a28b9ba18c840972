use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Units;

use super::pointer::effective_temperature;
use super::SwitchParams;

/// Γ_tun = Γ₁ exp{−2|E_g|/k_BΘ}.
pub fn tunneling_rate(params: &SwitchParams) -> Result<f64> {
    params.validate()?;
    let k_theta = effective_temperature(params.omega0, params.kt);
    Ok(params.gamma1 * (-2.0 * params.barrier_energy() / k_theta).exp())
}

/// W_min = k_BΘ ln(1/ε). `theta` is an energy in natural units and a
/// temperature in kelvin for [`Units::Si`].
pub fn min_work(epsilon: f64, theta: f64, units: Units) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::invalid("theta", "must be positive"));
    }
    Ok(units.thermal_energy(theta) * (1.0 / epsilon).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComputationCost {
    /// k_BT N (ln N + ln 1/δ + ln 1/κ).
    pub work: f64,
    /// k_BT N ln 2.
    pub landauer: f64,
    pub ratio: f64,
}

/// Minimal work of an N-gate computation with overall failure probability
/// `delta`; `kappa_ratio` is the decoherence-to-dissipation time ratio.
pub fn computation_cost(n_gates: f64, delta: f64, kappa_ratio: f64, temperature: f64, units: Units) -> Result<ComputationCost> {
    if !(n_gates >= 1.0 && n_gates.is_finite()) {
        return Err(Error::Domain(format!("N must be ≥ 1, got {n_gates}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(kappa_ratio > 0.0 && kappa_ratio < 1.0) {
        return Err(Error::Domain(format!("kappa_ratio must lie in (0, 1), got {kappa_ratio}")));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::invalid("temperature", "must be positive"));
    }
    let kt = units.thermal_energy(temperature);
    let logs = n_gates.ln() + (1.0 / delta).ln() + (1.0 / kappa_ratio).ln();
    let work = kt * n_gates * logs;
    let landauer = kt * n_gates * LN_2;
    Ok(ComputationCost {
        work,
        landauer,
        ratio: logs / LN_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::switch::pointer_error_analytic;
    use std::f64::consts::E;

    #[test]
    fn tunneling_examples() {
        let p = SwitchParams::new(1.0, 0.0, 0.5).with_rates(0.1, 0.05, 0.3);
        assert!((tunneling_rate(&p).unwrap() - 0.3).abs() < 1e-15);
        let p = SwitchParams::new(1.0, 2.0, 0.0).with_rates(0.1, 0.05, 0.3);
        let eps = pointer_error_analytic(&p).unwrap().epsilon;
        assert!((tunneling_rate(&p).unwrap() - 0.3 * eps).abs() < 1e-15);
        assert!((eps - (-16.0f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn doubling_g_quadruples_exponent() {
        let base = SwitchParams::new(1.0, 0.6, 1.5).with_rates(0.1, 0.0, 1.0);
        let doubled = SwitchParams { g: 1.2, ..base };
        let l1 = tunneling_rate(&base).unwrap().ln();
        let l2 = tunneling_rate(&doubled).unwrap().ln();
        assert!((l2 / l1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn min_work_examples() {
        assert!((min_work(1.0 / E, 2.5, Units::Natural).unwrap() - 2.5).abs() < 1e-15);
        let si = min_work(0.5, 300.0, Units::Si).unwrap();
        assert!((si - 1.380_649e-23 * 300.0 * LN_2).abs() < 1e-35);
        assert!((si - 2.87e-21).abs() < 0.01e-21);
        assert!(matches!(min_work(1.0, 1.0, Units::Natural), Err(Error::Domain(_))));
        assert!(matches!(min_work(0.0, 1.0, Units::Natural), Err(Error::Domain(_))));
    }

    #[test]
    fn single_gate_cost() {
        let c = computation_cost(1.0, 1.0 / E, 1.0 / E, 1.7, Units::Natural).unwrap();
        assert!((c.work - 2.0 * 1.7).abs() < 1e-14);
    }

    #[test]
    fn cost_rejects_domain_violations() {
        assert!(computation_cost(0.5, 0.1, 0.1, 1.0, Units::Natural).is_err());
        assert!(computation_cost(10.0, 1.0, 0.1, 1.0, Units::Natural).is_err());
        assert!(computation_cost(10.0, 0.1, 0.0, 1.0, Units::Natural).is_err());
    }
}
