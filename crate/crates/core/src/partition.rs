//! Partition insertion in the spin–boson model.
//!
//! With H(t) = Σ ω_k a_k†a_k + λ(t) σ³ ⊗ Σ (f̄_k a_k + f_k a_k†) and the spin
//! frozen in |±⟩, every bath mode stays coherent. We track
//!
//! ```text
//! χ_k(t) = i ∫₀ᵗ e^{−iω_k(t−s)} λ(s) f_k ds
//!        = λ(t) f_k/ω_k − e^{−iω_k t} (∫₀ᵗ λ̇(s) e^{iω_k s} ds) f_k/ω_k
//! ```
//!
//! and the mode displacement is ⟨a_k⟩ = −sign · χ_k. For a linear ramp of
//! length t₀ the bracket is λ ξ_k with ξ_k = (e^{iω_k t₀} − 1)/(iω_k t₀).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{ground_energy, ModeSet};
use crate::error::{Error, Result};
use crate::numerics::{integrate_complex, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RampShape {
    Linear,
    /// Piecewise-linear samples `(t, λ)`; must start at (0, 0) and end at
    /// (t₀, λ_final).
    Sampled(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampProtocol {
    pub lambda_final: f64,
    pub t0: f64,
    pub shape: RampShape,
}

impl RampProtocol {
    pub fn linear(lambda_final: f64, t0: f64) -> Result<Self> {
        let ramp = Self {
            lambda_final,
            t0,
            shape: RampShape::Linear,
        };
        ramp.validate()?;
        Ok(ramp)
    }

    pub fn sampled(samples: Vec<(f64, f64)>) -> Result<Self> {
        let &(t0, lambda_final) = samples
            .last()
            .ok_or_else(|| Error::invalid("shape", "no samples"))?;
        let ramp = Self {
            lambda_final,
            t0,
            shape: RampShape::Sampled(samples),
        };
        ramp.validate()?;
        Ok(ramp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_final >= 0.0 && self.lambda_final.is_finite()) {
            return Err(Error::invalid("lambda", "must be ≥ 0"));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::invalid("t0", "must be positive"));
        }
        if let RampShape::Sampled(s) = &self.shape {
            if s.len() < 2 || s[0] != (0.0, 0.0) {
                return Err(Error::invalid("shape", "samples must start at (0, 0)"));
            }
            if s.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(Error::invalid("shape", "sample times must increase"));
            }
            if s.iter().any(|p| !p.1.is_finite()) {
                return Err(Error::invalid("shape", "non-finite coupling sample"));
            }
        }
        Ok(())
    }

    /// λ(t), constant at λ_final for t ≥ t₀.
    pub fn lambda_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.t0 {
            return self.lambda_final;
        }
        match &self.shape {
            RampShape::Linear => self.lambda_final * t / self.t0,
            RampShape::Sampled(s) => {
                let i = s.partition_point(|p| p.0 <= t);
                let (t1, l1) = s[i - 1];
                let (t2, l2) = s[i];
                l1 + (l2 - l1) * (t - t1) / (t2 - t1)
            }
        }
    }

    fn knots(&self) -> Vec<f64> {
        match &self.shape {
            RampShape::Linear => vec![self.t0],
            RampShape::Sampled(s) => s.iter().map(|p| p.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitudes {
    pub chis: Vec<Complex64>,
    pub time: f64,
    pub branch: Branch,
}

impl CoherentAmplitudes {
    /// Mode displacements ⟨a_k⟩ = −sign · χ_k.
    pub fn displacements(&self) -> Vec<Complex64> {
        let s = -self.branch.sign();
        self.chis.iter().map(|c| c * s).collect()
    }
}

/// χ_k(t) for an arbitrary ramp, by adaptive quadrature per mode.
pub fn evolve_chi(modes: &ModeSet, ramp: &RampProtocol, t: f64, branch: Branch) -> Result<CoherentAmplitudes> {
    ramp.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "must be ≥ 0"));
    }
    let knots = ramp.knots();
    let opts = QuadratureOptions::default();
    let chis = modes
        .iter()
        .enumerate()
        .map(|(k, (omega, f))| {
            let kernel = |s: f64| Complex64::new(0.0, -omega * (t - s)).exp() * ramp.lambda_at(s);
            integrate_complex(kernel, 0.0, t, &knots, opts)
                .map(|v| Complex64::i() * v * f)
                .map_err(|e| Error::Computation(format!("mode {k}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherentAmplitudes {
        chis,
        time: t,
        branch,
    })
}

const XI_SERIES_THRESHOLD: f64 = 1e-6;

/// ξ = (e^{iθ} − 1)/(iθ) with θ = ω t₀, written as e^{iθ/2} sin(θ/2)/(θ/2).
pub fn xi(theta: f64) -> Complex64 {
    if theta.abs() < XI_SERIES_THRESHOLD {
        return Complex64::new(1.0 - theta * theta / 6.0, theta / 2.0);
    }
    let half = 0.5 * theta;
    Complex64::from_polar(half.sin() / half, half)
}

/// Closed-form χ_k(t) after a linear ramp (t > t₀).
pub fn chi_linear_closed(modes: &ModeSet, lambda: f64, t0: f64, t: f64, branch: Branch) -> Result<CoherentAmplitudes> {
    RampProtocol::linear(lambda, t0)?;
    if !(t > t0) {
        return Err(Error::Domain(format!("closed form needs t > t0 ({t} ≤ {t0})")));
    }
    let chis = modes
        .iter()
        .map(|(omega, f)| {
            let x = xi(omega * t0);
            debug_assert!(x.norm() < 1.0 || omega * t0 < XI_SERIES_THRESHOLD);
            let phase = Complex64::new(0.0, -omega * t).exp();
            (Complex64::new(1.0, 0.0) - phase * x) * (lambda * f / omega)
        })
        .collect();
    Ok(CoherentAmplitudes {
        chis,
        time: t,
        branch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkLedger {
    /// Static deformation energy, E_g.
    pub e_static: f64,
    /// Energy radiated as travelling waves, λ² Σ |ξ_k|² |f_k|²/ω_k.
    pub e_wave: f64,
    /// Work done by the driving, e_static + e_wave.
    pub w_external: f64,
    /// Σ_k ω_k n̄(ω_k, T); zero at T = 0.
    pub thermal_energy: f64,
    pub t0: f64,
    pub lambda: f64,
}

impl WorkLedger {
    pub fn mean_energy(&self) -> f64 {
        self.w_external + self.thermal_energy
    }

    /// e_wave / |E_g|, zero when there is no deformation.
    pub fn dissipation_ratio(&self) -> f64 {
        if self.e_static == 0.0 {
            0.0
        } else {
            self.e_wave / self.e_static.abs()
        }
    }
}

/// Energy bookkeeping after a linear insertion ramp, from the closed form.
pub fn post_insertion_energy(modes: &ModeSet, lambda: f64, t0: f64) -> Result<WorkLedger> {
    RampProtocol::linear(lambda, t0)?;
    let e_static = ground_energy(modes, lambda)?;
    let e_wave = lambda
        * lambda
        * modes
            .iter()
            .map(|(omega, f)| xi(omega * t0).norm_sqr() * f * f / omega)
            .sum::<f64>();
    let ledger = WorkLedger {
        e_static,
        e_wave,
        w_external: e_static + e_wave,
        thermal_energy: 0.0,
        t0,
        lambda,
    };
    debug_assert!(ledger.e_wave <= ledger.e_static.abs() * (1.0 + 1e-12));
    debug_assert!(ledger.w_external <= 0.0);
    Ok(ledger)
}

/// ⟨H(λ)⟩ in the product coherent state with displacements `alphas`.
pub fn energy_expectation_oracle(modes: &ModeSet, alphas: &[Complex64], lambda: f64, branch: Branch) -> Result<f64> {
    if alphas.len() != modes.len() {
        return Err(Error::invalid("chis", "one amplitude per mode required"));
    }
    let s = branch.sign();
    Ok(modes
        .iter()
        .zip(alphas)
        .map(|((omega, f), a)| omega * a.norm_sqr() + s * lambda * 2.0 * (f * a).re)
        .sum())
}

/// |⟨+χ|−χ⟩| = exp(−2 Σ|χ_k|²) for the two branch bath states.
pub fn branch_overlap(amps: &CoherentAmplitudes) -> f64 {
    (-2.0 * amps.chis.iter().map(|c| c.norm_sqr()).sum::<f64>()).exp()
}

/// Minimal work to unlock the partition from a branch ground state, −E_g.
pub fn removal_cost(modes: &ModeSet, lambda: f64) -> Result<f64> {
    Ok(-ground_energy(modes, lambda)?)
}

/// Insert, let the waves dissipate, then remove with the same ramp length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleLedger {
    pub insertion: WorkLedger,
    /// Wave energy released as heat after insertion.
    pub heat_after_insertion: f64,
    /// Work to ramp λ back to 0 from the branch ground state.
    pub removal_work: f64,
    /// Wave energy left in the bath after removal.
    pub heat_after_removal: f64,
    /// Total work done by the driving; extracted work is its negative.
    pub net_work: f64,
}

impl CycleLedger {
    pub fn extracted_work(&self) -> f64 {
        -self.net_work
    }
}

/// Full insertion/removal cycle with linear ramps of length `t0`.
///
/// Ramping down from the displaced ground state leaves each mode at
/// |β_k| = λ|ξ_k| f_k/ω_k, so the removal costs −E_g plus the same wave energy
/// as the insertion.
pub fn insertion_cycle(modes: &ModeSet, lambda: f64, t0: f64) -> Result<CycleLedger> {
    let insertion = post_insertion_energy(modes, lambda, t0)?;
    let removal_work = removal_cost(modes, lambda)? + insertion.e_wave;
    Ok(CycleLedger {
        insertion,
        heat_after_insertion: insertion.e_wave,
        removal_work,
        heat_after_removal: insertion.e_wave,
        net_work: insertion.w_external + removal_work,
    })
}

/// Bose–Einstein occupation 1/(e^{ω/k_BT} − 1); zero at T = 0.
pub fn bose_occupation(omega: f64, kt: f64) -> f64 {
    if kt <= 0.0 {
        0.0
    } else {
        1.0 / (omega / kt).exp_m1()
    }
}

/// Finite-temperature ledger. The driving only displaces the thermal state,
/// so work and dissipation are those of T = 0 and the mean energy picks up
/// Σ_k ω_k n̄_k.
pub fn thermal_branch_energy(modes: &ModeSet, lambda: f64, t0: f64, kt: f64) -> Result<WorkLedger> {
    if !(kt >= 0.0 && kt.is_finite()) {
        return Err(Error::invalid("temperature", "must be ≥ 0"));
    }
    let mut ledger = post_insertion_energy(modes, lambda, t0)?;
    ledger.thermal_energy = modes
        .omegas()
        .iter()
        .map(|&w| w * bose_occupation(w, kt))
        .sum();
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn zero_coupling_gives_zero_amplitudes() {
        let modes = ModeSet::new(vec![0.5, 1.0, 3.0], vec![1.0, 0.2, 0.7]).unwrap();
        let ramp = RampProtocol::linear(0.0, 2.0).unwrap();
        let amps = evolve_chi(&modes, &ramp, 4.0, Branch::Plus).unwrap();
        assert!(amps.chis.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn sudden_switch_single_mode() {
        // λ(s) = λ for s > 0, approximated by a very short sampled ramp
        let (w, f, lam, t) = (1.7, 0.4, 0.9, 3.0);
        let modes = ModeSet::single(w, f).unwrap();
        let ramp = RampProtocol::sampled(vec![(0.0, 0.0), (1e-9, lam)]).unwrap();
        let got = evolve_chi(&modes, &ramp, t, Branch::Plus).unwrap().chis[0];
        let want = (Complex64::new(1.0, 0.0) - Complex64::new(0.0, -w * t).exp()) * (lam * f / w);
        assert!(close(got, want, 1e-9), "{got} vs {want}");
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let modes = ModeSet::single(1.3, 0.5).unwrap();
        let ramp = RampProtocol::linear(0.7, 2.0).unwrap();
        let q = evolve_chi(&modes, &ramp, 5.0, Branch::Minus).unwrap();
        let c = chi_linear_closed(&modes, 0.7, 2.0, 5.0, Branch::Minus).unwrap();
        assert!(close(q.chis[0], c.chis[0], 1e-8));
    }

    #[test]
    fn xi_limits() {
        assert!((xi(1e-9).norm() - 1.0).abs() < 1e-15);
        assert!(xi(2.0 * PI).norm() < 1e-15);
        assert!(xi(0.3).norm() < 1.0);
        let direct = (Complex64::new(0.0, 0.3).exp() - 1.0) / Complex64::new(0.0, 0.3);
        assert!(close(xi(0.3), direct, 1e-15));
    }

    #[test]
    fn full_period_ramp_leaves_static_deformation() {
        let (w, f, lam) = (2.0, 0.3, 1.1);
        let t0 = 2.0 * PI / w;
        let modes = ModeSet::single(w, f).unwrap();
        let c = chi_linear_closed(&modes, lam, t0, 7.0, Branch::Plus).unwrap();
        assert!(close(c.chis[0], Complex64::new(lam * f / w, 0.0), 1e-15));
        let ledger = post_insertion_energy(&modes, lam, t0).unwrap();
        assert!(ledger.e_wave.abs() < 1e-30);
    }

    #[test]
    fn closed_form_rejects_early_time() {
        let modes = ModeSet::single(1.0, 1.0).unwrap();
        assert!(matches!(
            chi_linear_closed(&modes, 1.0, 2.0, 1.0, Branch::Plus),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn oracle_at_rest_and_in_ground_state() {
        let modes = ModeSet::new(vec![0.5, 2.0], vec![0.3, 0.8]).unwrap();
        let zero = vec![Complex64::new(0.0, 0.0); 2];
        assert_eq!(energy_expectation_oracle(&modes, &zero, 0.0, Branch::Plus).unwrap(), 0.0);
        let lam = 1.4;
        for branch in [Branch::Plus, Branch::Minus] {
            let alphas: Vec<Complex64> = modes
                .iter()
                .map(|(w, f)| Complex64::new(-branch.sign() * lam * f / w, 0.0))
                .collect();
            let e = energy_expectation_oracle(&modes, &alphas, lam, branch).unwrap();
            let eg = ground_energy(&modes, lam).unwrap();
            assert!((e - eg).abs() < 1e-14);
        }
    }

    #[test]
    fn adiabatic_ramp_has_no_waves() {
        let modes = ModeSet::new(vec![0.5, 2.0], vec![0.3, 0.8]).unwrap();
        let slow = post_insertion_energy(&modes, 1.0, 1e7).unwrap();
        assert!(slow.e_wave < 1e-12);
        assert!((slow.w_external - slow.e_static).abs() < 1e-12);
    }

    #[test]
    fn removal_costs() {
        let modes = ModeSet::single(1.0, 1.0).unwrap();
        assert_eq!(removal_cost(&modes, 0.0).unwrap(), 0.0);
        assert_eq!(removal_cost(&modes, 2.0).unwrap(), 4.0);
    }

    #[test]
    fn cycle_never_yields_work() {
        let modes = ModeSet::new(vec![0.2, 0.9, 4.0], vec![0.5, 0.3, 0.1]).unwrap();
        for t0 in [0.1, 1.0, 10.0] {
            let c = insertion_cycle(&modes, 0.8, t0).unwrap();
            assert!(c.extracted_work() <= 0.0);
            assert!((c.net_work - 2.0 * c.insertion.e_wave).abs() < 1e-14);
            assert!(c.removal_work >= removal_cost(&modes, 0.8).unwrap());
        }
    }

    #[test]
    fn thermal_ledger_limits() {
        let modes = ModeSet::new(vec![0.5, 2.0], vec![0.3, 0.8]).unwrap();
        let cold = thermal_branch_energy(&modes, 0.6, 1.5, 0.0).unwrap();
        assert_eq!(cold, post_insertion_energy(&modes, 0.6, 1.5).unwrap());
        let free = thermal_branch_energy(&modes, 0.0, 1.5, 1.0).unwrap();
        assert_eq!(free.w_external, 0.0);
        let want: f64 = [0.5f64, 2.0].iter().map(|w| w / (w.exp() - 1.0)).sum();
        assert!((free.mean_energy() - want).abs() < 1e-14);
    }

    #[test]
    fn sampled_ramp_validation() {
        assert!(RampProtocol::sampled(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(RampProtocol::sampled(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        let r = RampProtocol::sampled(vec![(0.0, 0.0), (1.0, 0.5), (3.0, 1.0)]).unwrap();
        assert_eq!(r.t0, 3.0);
        assert!((r.lambda_at(2.0) - 0.75).abs() < 1e-15);
        assert_eq!(r.lambda_at(10.0), 1.0);
    }
}
