//! Biased Gibbs states and the distinguishability of the two pointer states.
//!
//! The literal Uhlmann trace Tr√(√ρ⁺ρ⁻√ρ⁺) of two displaced thermal states
//! separated by 2g is exp(−2g² tanh(ω₀/2k_BT)); the error probability
//! ε = exp(−4g² tanh(ω₀/2k_BT)) is its square, the transition probability.
//! At T = 0 these are |⟨g|−g⟩| = e^{−2g²} and |⟨g|−g⟩|² = e^{−4g²}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, root_fidelity};
use crate::partition::Branch;

use super::fock::displaced_thermal;
use super::state::DensityMatrix;
use super::{resolve_cutoff, CutoffPolicy, SwitchParams};

fn spin_index(branch: Branch) -> usize {
    match branch {
        Branch::Plus => 0,
        Branch::Minus => 1,
    }
}

/// ρ^{(±)} = (1 − e^{−ω₀/k_BT}) |±⟩⟨±| e^{−(ω₀/k_BT)(a†∓g)(a∓g)} on `cutoff`
/// Fock states, renormalised after checking the truncation leak.
pub fn biased_gibbs(params: &SwitchParams, branch: Branch, cutoff: usize, leak_tol: f64) -> Result<DensityMatrix> {
    params.validate()?;
    let s = spin_index(branch);
    let (osc, leak) = displaced_thermal(branch.sign() * params.g, params.boltzmann_factor(), cutoff);
    if leak > leak_tol {
        return Err(Error::Computation(format!(
            "cutoff {cutoff} loses {leak:e} of the trace (tolerance {leak_tol:e})"
        )));
    }
    let osc = &osc / c(1.0 - leak);
    DensityMatrix::new(cutoff, DensityMatrix::spin_block(cutoff, s, &osc))
}

/// k_BΘ = ω₀/(e^{ω₀/k_BT} − 1) + ω₀/2.
pub fn effective_temperature(omega0: f64, kt: f64) -> f64 {
    omega0 * (crate::partition::bose_occupation(omega0, kt) + 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPointerError {
    /// exp{−4D² tanh(ω₀/2k_BT)} with D = g.
    pub epsilon: f64,
    /// exp{−2|E_g|/k_BΘ}.
    pub epsilon_boltzmann: f64,
    pub k_theta: f64,
    /// 2|E_g| = 2ω₀g².
    pub energy_gap: f64,
}

impl AnalyticPointerError {
    /// Relative mismatch between the two closed forms.
    pub fn identity_residual(&self) -> f64 {
        if self.epsilon == 0.0 {
            return (self.epsilon_boltzmann - self.epsilon).abs();
        }
        (self.epsilon_boltzmann - self.epsilon).abs() / self.epsilon
    }
}

/// Both closed forms of the pointer error with separation parameter `d`.
pub fn pointer_error_with_separation(params: &SwitchParams, d: f64) -> Result<AnalyticPointerError> {
    params.validate()?;
    let tanh = if params.kt == 0.0 {
        1.0
    } else {
        (params.omega0 / (2.0 * params.kt)).tanh()
    };
    let k_theta = effective_temperature(params.omega0, params.kt);
    let energy_gap = 2.0 * params.barrier_energy();
    Ok(AnalyticPointerError {
        epsilon: (-4.0 * d * d * tanh).exp(),
        epsilon_boltzmann: (-energy_gap / k_theta).exp(),
        k_theta,
        energy_gap,
    })
}

pub fn pointer_error_analytic(params: &SwitchParams) -> Result<AnalyticPointerError> {
    pointer_error_with_separation(params, params.g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPointerError {
    /// Tr√(√ρ⁺ ρ⁻ √ρ⁺).
    pub root_fidelity: f64,
    /// Square of the root fidelity; the error probability ε.
    pub epsilon: f64,
    pub cutoff: usize,
    pub leak: f64,
    /// Relative change of ε when the cutoff is raised by a quarter.
    pub cutoff_sensitivity: f64,
}

fn fidelity_at(params: &SwitchParams, cutoff: usize) -> (f64, f64) {
    let q = params.boltzmann_factor();
    let (plus, leak) = displaced_thermal(params.g, q, cutoff);
    let (minus, _) = displaced_thermal(-params.g, q, cutoff);
    let norm = c(1.0 - leak);
    (root_fidelity(&(plus / norm), &(minus / norm)), leak)
}

/// Uhlmann fidelity of the oscillator pointer states on the truncated space.
pub fn pointer_error_numeric(params: &SwitchParams, policy: CutoffPolicy) -> Result<NumericPointerError> {
    let cutoff = resolve_cutoff(params, policy)?;
    let (f, leak) = fidelity_at(params, cutoff);
    let (f_up, _) = fidelity_at(params, cutoff + cutoff.div_ceil(4));
    let eps = f * f;
    let sensitivity = if eps == 0.0 { 0.0 } else { (f_up * f_up - eps).abs() / eps };
    if sensitivity > 1e-4 {
        return Err(Error::Computation(format!(
            "fidelity not converged at cutoff {cutoff} (relative change {sensitivity:e})"
        )));
    }
    Ok(NumericPointerError {
        root_fidelity: f,
        epsilon: eps,
        cutoff,
        leak,
        cutoff_sensitivity: sensitivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::switch::fock::annihilation;

    #[test]
    fn zero_displacement_is_ordinary_gibbs() {
        let p = SwitchParams::new(1.0, 0.0, 0.8);
        let rho = biased_gibbs(&p, Branch::Plus, 40, 1e-8).unwrap();
        let q = p.boltzmann_factor();
        let osc = rho.block(0, 0);
        for n in 0..40 {
            assert!((osc[(n, n)].re - (1.0 - q) * q.powi(n as i32)).abs() < 1e-12);
        }
        assert!(rho.block(1, 1).norm() == 0.0);
    }

    #[test]
    fn mean_displacement_and_occupation() {
        let p = SwitchParams::new(1.0, 1.5, 1.2);
        for branch in [Branch::Plus, Branch::Minus] {
            let n = 60;
            let rho = biased_gibbs(&p, branch, n, 1e-8).unwrap();
            let s = spin_index(branch);
            let osc = rho.block(s, s);
            let a = annihilation(n);
            let mean_a = (&osc * &a).trace();
            assert!((mean_a.re - branch.sign() * p.g).abs() < 1e-10 && mean_a.im.abs() < 1e-12);
            let shift = &a - crate::linalg::identity(n) * c(branch.sign() * p.g);
            let occ = (&osc * shift.adjoint() * &shift).trace().re;
            assert!((occ - p.mean_occupation()).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_temperature_gives_coherent_states() {
        let p = SwitchParams::new(1.0, 0.8, 0.0);
        let num = pointer_error_numeric(&p, CutoffPolicy::default()).unwrap();
        let overlap = (-2.0 * p.g * p.g).exp();
        assert!((num.root_fidelity - overlap).abs() / overlap < 1e-8);
        let analytic = pointer_error_analytic(&p).unwrap();
        assert!((analytic.epsilon - (-4.0 * p.g * p.g).exp()).abs() < 1e-15);
        assert!((num.epsilon - analytic.epsilon).abs() / analytic.epsilon < 1e-8);
    }

    #[test]
    fn identical_states_have_unit_fidelity() {
        let p = SwitchParams::new(1.0, 0.0, 1.0);
        let num = pointer_error_numeric(&p, CutoffPolicy::default()).unwrap();
        assert!((num.root_fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn high_temperature_limit() {
        let p = SwitchParams::new(1.0, 0.7, 200.0);
        let a = pointer_error_analytic(&p).unwrap();
        let classical = (-2.0 * p.omega0 * p.g * p.g / p.kt).exp();
        assert!((a.epsilon - classical).abs() / classical < 1e-5);
        assert!((a.k_theta - p.kt).abs() / p.kt < 1e-5);
    }

    #[test]
    fn closed_forms_agree() {
        for g in [0.3, 1.0, 2.5] {
            for kt in [0.0, 0.1, 1.0, 7.0] {
                let a = pointer_error_analytic(&SwitchParams::new(1.3, g, kt)).unwrap();
                assert!(a.identity_residual() < 1e-13, "g={g} kT={kt}: {}", a.identity_residual());
            }
        }
    }

    #[test]
    fn leaky_cutoff_is_rejected() {
        let p = SwitchParams::new(1.0, 2.0, 2.0);
        assert!(matches!(
            biased_gibbs(&p, Branch::Plus, 8, 1e-8),
            Err(Error::Computation(_))
        ));
    }
}
