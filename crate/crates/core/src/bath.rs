//! Power-law bosonic baths and their discretisation into modes.
//!
//! The spectral weight is |f(ω)|² = A² ω^κ on `[omega_min, omega_max]`, so
//! that Σ_k |f_k|² g(ω_k) approximates ∫ |f(ω)|² g(ω) dω. With this weight the
//! ground-state energy −λ²∫|f|²/ω is infrared divergent for κ ≤ 0 and scales as
//! ω_min^κ for κ < 0, while the branch overlap exponent ∫|f|²/ω² diverges for
//! every κ ≤ 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linear_fit;

pub const KAPPA_RANGE: (f64, f64) = (-2.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub kappa: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    pub n_modes: usize,
}

fn default_amplitude() -> f64 {
    1.0
}

impl BathSpec {
    pub fn new(kappa: f64, omega_min: f64, omega_max: f64, n_modes: usize) -> Self {
        Self {
            kappa,
            omega_min,
            omega_max,
            amplitude: 1.0,
            n_modes,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_omega_min(mut self, omega_min: f64) -> Self {
        self.omega_min = omega_min;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = KAPPA_RANGE;
        if !(lo..=hi).contains(&self.kappa) {
            return Err(Error::invalid(
                "kappa",
                format!("{} outside [{lo}, {hi}]", self.kappa),
            ));
        }
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            return Err(Error::invalid(
                "omega_min",
                format!("must be positive, got {}", self.omega_min),
            ));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(Error::invalid(
                "omega_max",
                format!("must exceed omega_min, got {}", self.omega_max),
            ));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::invalid(
                "amplitude",
                format!("must be positive, got {}", self.amplitude),
            ));
        }
        if self.n_modes == 0 {
            return Err(Error::invalid("n_modes", "must be at least 1"));
        }
        Ok(())
    }

    /// Continuum spectral weight |f(ω)|².
    pub fn spectral_weight(&self, omega: f64) -> f64 {
        self.amplitude * self.amplitude * omega.powf(self.kappa)
    }
}

/// ∫_a^b ω^p dω without cancellation for narrow cells.
fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    let log_ratio = (b / a).ln();
    let x = (p + 1.0) * log_ratio;
    let phi = if x.abs() < 1e-12 { 1.0 } else { x.exp_m1() / x };
    a.powf(p + 1.0) * log_ratio * phi
}

/// Maps a linear system size to an infrared cutoff, ω_min = scale · L^(−d).
pub fn omega_min_from_size(length: f64, dimension: f64, scale: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::invalid("length", "must be positive"));
    }
    if !(dimension > 0.0) {
        return Err(Error::invalid("dimension", "must be positive"));
    }
    if !(scale > 0.0) {
        return Err(Error::invalid("scale", "must be positive"));
    }
    Ok(scale * length.powf(-dimension))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    omegas: Vec<f64>,
    couplings: Vec<f64>,
}

/// One CSV row of a mode set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModeRow {
    pub omega: f64,
    pub f: f64,
}

impl ModeSet {
    pub fn new(omegas: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if omegas.len() != couplings.len() {
            return Err(Error::invalid("couplings", "length differs from omegas"));
        }
        if omegas.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::invalid("omegas", "frequencies must be positive"));
        }
        if couplings.iter().any(|f| !(*f >= 0.0 && f.is_finite())) {
            return Err(Error::invalid("couplings", "couplings must be non-negative"));
        }
        Ok(Self { omegas, couplings })
    }

    pub fn single(omega: f64, f: f64) -> Result<Self> {
        Self::new(vec![omega], vec![f])
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omegas.iter().copied().zip(self.couplings.iter().copied())
    }

    pub fn rows(&self) -> impl Iterator<Item = ModeRow> + '_ {
        self.iter().map(|(omega, f)| ModeRow { omega, f })
    }

    /// Σ_k |f_k|² ω_k^p.
    pub fn moment(&self, p: i32) -> f64 {
        self.iter().map(|(w, f)| f * f * w.powi(p)).sum()
    }
}

/// Discretises a bath on a geometric grid of `n_modes` cells.
///
/// Each cell contributes f_k² = |f(ω_k)|² Δω_k where ω_k is the point at which
/// |f|² takes its cell average, so Σ f_k² reproduces ∫|f|² exactly. For κ = 0
/// every point qualifies and the geometric midpoint is used.
pub fn discretize(spec: &BathSpec) -> Result<ModeSet> {
    spec.validate()?;
    let n = spec.n_modes;
    let ratio = (spec.omega_max / spec.omega_min).powf(1.0 / n as f64);
    let a2 = spec.amplitude * spec.amplitude;
    let mut omegas = Vec::with_capacity(n);
    let mut couplings = Vec::with_capacity(n);
    for i in 0..n {
        let lo = spec.omega_min * ratio.powi(i as i32);
        let hi = if i + 1 == n {
            spec.omega_max
        } else {
            spec.omega_min * ratio.powi(i as i32 + 1)
        };
        let width = hi - lo;
        let weight = a2 * power_integral(lo, hi, spec.kappa);
        let omega = if spec.kappa.abs() < 1e-12 {
            (lo * hi).sqrt()
        } else {
            (weight / (a2 * width)).powf(1.0 / spec.kappa).clamp(lo, hi)
        };
        omegas.push(omega);
        couplings.push(weight.sqrt());
    }
    ModeSet::new(omegas, couplings)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("lambda", format!("must be ≥ 0, got {lambda}")))
    }
}

/// E_g(λ) = −λ² Σ_k |f_k|²/ω_k.
pub fn ground_energy(modes: &ModeSet, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(-lambda * lambda * modes.moment(-1))
}

/// ⟨[λf/ω] | [−λf/ω]⟩ = exp(−2λ² Σ_k |f_k|²/ω_k²).
pub fn coherent_overlap(modes: &ModeSet, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(overlap_from_exponent(lambda * lambda * modes.moment(-2)))
}

fn overlap_from_exponent(norm_sq: f64) -> f64 {
    (-2.0 * norm_sq).exp()
}

/// Result of fitting −E_g ∝ ω_min^s over a family of infrared cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrScalingFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub omega_mins: Vec<f64>,
    pub ground_energies: Vec<f64>,
}

/// Least-squares slope of log(−E_g) against log(ω_min).
pub fn fit_ir_scaling(base: &BathSpec, omega_mins: &[f64], lambda: f64) -> Result<IrScalingFit> {
    if base.kappa >= 0.0 {
        return Err(Error::Domain(format!(
            "infrared power law needs kappa < 0, got {}",
            base.kappa
        )));
    }
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Err(Error::invalid("lambda", "must be positive for a scaling fit"));
    }
    if omega_mins.len() < 5 {
        return Err(Error::invalid(
            "omega_mins",
            format!("need at least 5 cutoffs, got {}", omega_mins.len()),
        ));
    }
    let lo = omega_mins.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = omega_mins.iter().copied().fold(0.0, f64::max);
    if !(lo > 0.0) || (hi / lo).log10() < 3.0 - 1e-9 {
        return Err(Error::invalid(
            "omega_mins",
            "cutoffs must be positive and span at least 3 decades",
        ));
    }
    let mut energies = Vec::with_capacity(omega_mins.len());
    for &w in omega_mins {
        let modes = discretize(&base.with_omega_min(w))?;
        energies.push(ground_energy(&modes, lambda)?);
    }
    let xs: Vec<f64> = omega_mins.iter().map(|w| w.ln()).collect();
    let ys: Vec<f64> = energies.iter().map(|e| (-e).ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(IrScalingFit {
        exponent: fit.slope,
        r_squared: fit.r_squared,
        omega_mins: omega_mins.to_vec(),
        ground_energies: energies,
    })
}

/// `count` cutoffs log-spaced from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let step = (lo / hi).ln() / (count - 1) as f64;
    (0..count).map(|i| hi * (step * i as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // ∫_a^b ω^p dω, written out independently of `power_integral`.
    fn analytic(a: f64, b: f64, p: f64) -> f64 {
        if (p + 1.0).abs() < 1e-15 {
            (b / a).ln()
        } else {
            (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
        }
    }

    #[test]
    fn single_flat_cell() {
        let modes = discretize(&BathSpec::new(0.0, 1.0, 2.0, 1)).unwrap();
        assert_eq!(modes.len(), 1);
        assert!((modes.omegas()[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((modes.couplings()[0].powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ohmic_quadrature_consistency() {
        let modes = discretize(&BathSpec::new(1.0, 0.01, 10.0, 400)).unwrap();
        let exact = analytic(0.01, 10.0, 1.0);
        assert!((modes.moment(0) - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn modes_stay_in_band_and_ascend() {
        for kappa in [-2.0, -1.0, -0.3, 0.0, 0.5, 1.0] {
            let modes = discretize(&BathSpec::new(kappa, 1e-3, 5.0, 37)).unwrap();
            assert!(modes.omegas().windows(2).all(|w| w[0] < w[1]));
            assert!(modes.omegas().iter().all(|&w| (1e-3..=5.0).contains(&w)));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let err = discretize(&BathSpec::new(0.0, 0.0, 1.0, 4)).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "omega_min", .. }));
        let err = discretize(&BathSpec::new(1.5, 0.1, 1.0, 4)).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "kappa", .. }));
        let err = discretize(&BathSpec::new(0.0, 1.0, 0.5, 4)).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "omega_max", .. }));
        let err = discretize(&BathSpec::new(0.0, 0.1, 1.0, 0)).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "n_modes", .. }));
    }

    #[test]
    fn ground_energy_single_mode_and_zero_coupling() {
        let m = ModeSet::single(1.0, 1.0).unwrap();
        assert_eq!(ground_energy(&m, 1.0).unwrap(), -1.0);
        assert_eq!(ground_energy(&m, 0.0).unwrap(), 0.0);
        assert!(ground_energy(&m, -1.0).is_err());
    }

    #[test]
    fn ground_energy_strongly_subohmic_matches_integral() {
        let spec = BathSpec::new(-0.5, 1e-4, 1.0, 800);
        let e = ground_energy(&discretize(&spec).unwrap(), 1.0).unwrap();
        let exact = -analytic(1e-4, 1.0, -1.5);
        assert!((e - exact).abs() / exact.abs() < 1e-3, "{e} vs {exact}");
    }

    #[test]
    fn overlap_examples() {
        let m = ModeSet::single(2.0, 1.0).unwrap();
        assert_eq!(coherent_overlap(&m, 0.0).unwrap(), 1.0);
        assert!((coherent_overlap(&m, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn overlap_vanishes_for_divergent_exponent() {
        // κ ≤ 1 makes ∫ω^(κ-2) diverge at the infrared end.
        for kappa in [0.4, 1.0] {
            let mut prev = 1.0;
            for w in [1e-2, 1e-4, 1e-6, 1e-8] {
                let modes = discretize(&BathSpec::new(kappa, w, 1.0, 600)).unwrap();
                let ov = coherent_overlap(&modes, 1.0).unwrap();
                let norm = analytic(w, 1.0, kappa - 2.0);
                assert!((modes.moment(-2) - norm).abs() / norm < 1e-3);
                assert!(ov <= prev);
                prev = ov;
            }
        }
        let modes = discretize(&BathSpec::new(0.4, 1e-8, 1.0, 600)).unwrap();
        assert!(coherent_overlap(&modes, 1.0).unwrap() < 1e-6);
    }

    #[test]
    fn fit_recovers_kappa() {
        let cutoffs = log_spaced(1e-1, 1e-5, 9);
        for kappa in [-1.0, -0.5] {
            let base = BathSpec::new(kappa, 1e-1, 100.0, 1200);
            let fit = fit_ir_scaling(&base, &cutoffs, 1.0).unwrap();
            assert!((fit.exponent - kappa).abs() < 0.05, "{fit:?}");
        }
    }

    #[test]
    fn fit_rejects_bad_families() {
        let base = BathSpec::new(0.5, 1e-1, 100.0, 100);
        let cutoffs = log_spaced(1e-1, 1e-5, 9);
        assert!(matches!(
            fit_ir_scaling(&base, &cutoffs, 1.0),
            Err(Error::Domain(_))
        ));
        let base = BathSpec::new(-1.0, 1e-1, 100.0, 100);
        assert!(fit_ir_scaling(&base, &cutoffs[..4], 1.0).is_err());
        assert!(fit_ir_scaling(&base, &log_spaced(1e-1, 1e-3, 6), 1.0).is_err());
    }

    #[test]
    fn size_helper() {
        assert!((omega_min_from_size(10.0, 2.0, 3.0).unwrap() - 0.03).abs() < 1e-15);
        assert!(omega_min_from_size(10.0, 0.0, 1.0).is_err());
    }
}
