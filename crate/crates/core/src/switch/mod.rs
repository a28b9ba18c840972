//! Spin–oscillator switch: H = ω₀a†a − ω₀g(a† + a)σ³ coupled to a heat bath
//! through a Markovian master equation, its biased Gibbs fixed points and the
//! error/work relations built on the pointer-state overlap.
//!
//! Hilbert space ordering is spin ⊗ oscillator with spin index 0 ↔ |+⟩ and
//! 1 ↔ |−⟩, so the state is a 2×2 array of N_F × N_F oscillator blocks.

mod cost;
mod fock;
mod integrator;
mod lindblad;
mod pointer;
mod state;

pub use cost::{computation_cost, min_work, tunneling_rate, ComputationCost};
pub use fock::{annihilation, displaced_thermal, displacement, number_operator};
pub use integrator::{evolve, evolve_sampled, EvolveOutcome, IntegratorOptions};
pub use lindblad::{build_hamiltonian, lindblad_generator, LindbladGenerator};
pub use pointer::{
    biased_gibbs, effective_temperature, pointer_error_analytic, pointer_error_numeric, AnalyticPointerError,
    NumericPointerError,
};
pub use state::DensityMatrix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchParams {
    pub omega0: f64,
    pub g: f64,
    /// Bath temperature as an energy, k_B T (≥ 0).
    pub kt: f64,
    pub gamma: f64,
    pub gamma_dephase: f64,
    pub gamma1: f64,
    /// Fixed Fock cutoff; `None` lets the cutoff policy choose.
    pub fock_cutoff: Option<usize>,
}

impl SwitchParams {
    pub fn new(omega0: f64, g: f64, kt: f64) -> Self {
        Self {
            omega0,
            g,
            kt,
            gamma: 0.1,
            gamma_dephase: 0.05,
            gamma1: 0.0,
            fock_cutoff: None,
        }
    }

    pub fn with_rates(mut self, gamma: f64, gamma_dephase: f64, gamma1: f64) -> Self {
        self.gamma = gamma;
        self.gamma_dephase = gamma_dephase;
        self.gamma1 = gamma1;
        self
    }

    pub fn with_cutoff(mut self, n: usize) -> Self {
        self.fock_cutoff = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let non_negative = |v: f64| v >= 0.0 && v.is_finite();
        if !positive(self.omega0) {
            return Err(Error::invalid("omega0", "must be positive"));
        }
        if !non_negative(self.g) {
            return Err(Error::invalid("g", "must be ≥ 0"));
        }
        if !non_negative(self.kt) {
            return Err(Error::invalid("kT", "must be ≥ 0"));
        }
        if !positive(self.gamma) {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        if !non_negative(self.gamma_dephase) {
            return Err(Error::invalid("Gamma", "must be ≥ 0"));
        }
        if !non_negative(self.gamma1) {
            return Err(Error::invalid("Gamma1", "must be ≥ 0"));
        }
        if let Some(n) = self.fock_cutoff {
            let min = self.min_cutoff();
            if n < min {
                return Err(Error::invalid(
                    "fock_cutoff",
                    format!("{n} is below the minimum {min} = ⌈(g+4)²⌉"),
                ));
            }
        }
        Ok(())
    }

    /// e^{−ω₀/k_BT}, zero at T = 0.
    pub fn boltzmann_factor(&self) -> f64 {
        if self.kt == 0.0 {
            0.0
        } else {
            (-self.omega0 / self.kt).exp()
        }
    }

    /// n̄ = 1/(e^{ω₀/k_BT} − 1).
    pub fn mean_occupation(&self) -> f64 {
        crate::partition::bose_occupation(self.omega0, self.kt)
    }

    /// |E_g| = ω₀ g².
    pub fn barrier_energy(&self) -> f64 {
        self.omega0 * self.g * self.g
    }

    pub fn min_cutoff(&self) -> usize {
        ((self.g + 4.0).powi(2)).ceil() as usize
    }

    /// First cutoff tried by the policy: ⌈g²⌉ + 10 plus a thermal margin.
    pub fn initial_cutoff(&self) -> usize {
        let thermal = (10.0 * self.mean_occupation()).ceil() as usize;
        let start = (self.g * self.g).ceil() as usize + 10 + thermal;
        start.max(self.fock_cutoff.unwrap_or(0)).max(self.min_cutoff())
    }
}

/// How hard to push the Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    /// Maximum allowed 1 − Tr of a truncated biased Gibbs state.
    pub leak_tol: f64,
    pub max_cutoff: usize,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            leak_tol: 1e-8,
            max_cutoff: 256,
        }
    }
}

impl CutoffPolicy {
    pub fn strict() -> Self {
        Self {
            leak_tol: 1e-13,
            max_cutoff: 256,
        }
    }
}

/// Smallest cutoff reached by doubling from the initial guess whose biased
/// Gibbs trace leak is below the policy tolerance.
pub fn resolve_cutoff(params: &SwitchParams, policy: CutoffPolicy) -> Result<usize> {
    params.validate()?;
    let mut n = params.initial_cutoff();
    loop {
        let (_, leak) = displaced_thermal(params.g, params.boltzmann_factor(), n);
        if leak < policy.leak_tol {
            return Ok(n);
        }
        if n >= policy.max_cutoff {
            return Err(Error::Computation(format!(
                "Fock cutoff {n} still leaks {leak:e} of the trace"
            )));
        }
        n = (2 * n).min(policy.max_cutoff);
    }
}
