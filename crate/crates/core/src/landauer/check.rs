use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropy::{free_energy, relative_entropy};
use super::random::{
    haar_unitary_from, random_density_matrix, random_hermitian, random_mixed_by_purification, trial_rng,
};
use super::{validate_density, JointState, QuantumSystem};
use crate::error::{Error, Result};
use crate::linalg::{c, diag_real, kron, trace_out_first, trace_out_second, unitarity_defect, CMatrix};

pub const SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauerReport {
    pub delta_q: f64,
    pub delta_f_s: f64,
    /// ΔQ − ΔF_S.
    pub slack: f64,
    pub holds: bool,
    /// ΔQ + k_BT ΔS_S, equivalently ΔE_RS − ΔF_S. This is what monotonicity
    /// of relative entropy bounds for product inputs; it equals `slack` only
    /// when ΔE_S = 0.
    pub bound_slack: f64,
    pub bound_holds: bool,
}

/// Heat released into the reservoir against the system's free-energy drop,
/// starting from ρ_R^β ⊗ ρ_S.
pub fn landauer_check(
    rho_s: &CMatrix,
    h_s: &CMatrix,
    reservoir: &QuantumSystem,
    u: &CMatrix,
) -> Result<LandauerReport> {
    validate_density(rho_s, "rho_S")?;
    let d_r = reservoir.dim();
    let d_s = rho_s.nrows();
    let joint = JointState {
        dims: (d_r, d_s),
        data: kron(&reservoir.gibbs(), rho_s),
    };
    landauer_check_joint(&joint, h_s, reservoir, u)
}

/// Same bookkeeping for an arbitrary (possibly correlated) initial state.
/// The reservoir's Hamiltonian and temperature come from `reservoir`; its
/// initial marginal is whatever `rho_rs` says.
pub fn landauer_check_joint(
    rho_rs: &JointState,
    h_s: &CMatrix,
    reservoir: &QuantumSystem,
    u: &CMatrix,
) -> Result<LandauerReport> {
    let (d_r, d_s) = rho_rs.dims;
    if d_r != reservoir.dim() {
        return Err(Error::invalid("reservoir", "dimension does not match rho_RS"));
    }
    if h_s.nrows() != d_s || h_s.ncols() != d_s {
        return Err(Error::invalid("H_S", "dimension does not match rho_S"));
    }
    let d = d_r * d_s;
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::invalid("U", format!("expected {d}×{d}")));
    }
    let defect = unitarity_defect(u);
    if defect > 1e-10 {
        return Err(Error::invalid("U", format!("not unitary (defect {defect:e})")));
    }
    let out = u * &rho_rs.data * u.adjoint();
    let out = (&out + out.adjoint()) * c(0.5);

    let h_r = &reservoir.hamiltonian;
    let r_in = trace_out_second(&rho_rs.data, d_r, d_s);
    let r_out = trace_out_second(&out, d_r, d_s);
    let delta_q = (h_r * (r_out - r_in)).trace().re;

    let s_in = trace_out_first(&rho_rs.data, d_r, d_s);
    let s_out = trace_out_first(&out, d_r, d_s);
    let kt = reservoir.kt;
    let delta_f_s = free_energy(&s_out, h_s, kt)? - free_energy(&s_in, h_s, kt)?;
    let delta_e_s = (h_s * (s_out - s_in)).trace().re;
    let slack = delta_q - delta_f_s;
    let bound_slack = slack + delta_e_s;
    Ok(LandauerReport {
        delta_q,
        delta_f_s,
        slack,
        holds: slack >= -SLACK_TOL,
        bound_slack,
        bound_holds: bound_slack >= -SLACK_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuzzMode {
    Product,
    Correlated,
}

/// How the system Hamiltonian is drawn in a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemHamiltonian {
    /// H_S = 0, a memory whose logical states carry no energy, so that
    /// ΔF_S = −k_BT ΔS_S.
    #[default]
    Degenerate,
    /// Random Hermitian H_S. The literal ΔQ ≥ ΔF_S can then fail even for
    /// product inputs; `bound_slack` cannot.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub mode: FuzzMode,
    pub dims: (usize, usize),
    pub kt: f64,
    pub trials: u64,
    pub seed: u64,
    pub system_hamiltonian: SystemHamiltonian,
}

impl FuzzConfig {
    pub fn new(mode: FuzzMode, dims: (usize, usize), kt: f64, trials: u64, seed: u64) -> Self {
        Self {
            mode,
            dims,
            kt,
            trials,
            seed,
            system_hamiltonian: SystemHamiltonian::default(),
        }
    }

    pub fn with_system_hamiltonian(mut self, h: SystemHamiltonian) -> Self {
        self.system_hamiltonian = h;
        self
    }

    fn validate(&self) -> Result<()> {
        check_dims(self.dims, self.kt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub trial: u64,
    pub slack: f64,
    pub holds: bool,
    pub bound_slack: f64,
    pub delta_q: f64,
    pub delta_f_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub min_slack: f64,
    pub argmin_trial: Option<u64>,
    pub violations: u64,
    pub min_bound_slack: f64,
    pub bound_violations: u64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl FuzzSummary {
    pub fn best(&self) -> Option<&TrialRecord> {
        self.argmin_trial.map(|t| &self.records[t as usize])
    }
}

fn check_dims(dims: (usize, usize), kt: f64) -> Result<()> {
    if dims.0 < 2 || dims.1 < 2 {
        return Err(Error::invalid("dims", "both factors must be at least 2"));
    }
    if dims.0 * dims.1 > 64 {
        return Err(Error::invalid("dims", "joint dimension above 64"));
    }
    if !(kt > 0.0 && kt.is_finite()) {
        return Err(Error::invalid("temperature", "must be positive"));
    }
    Ok(())
}

/// Re-runs one trial of a campaign from its seed and index.
pub fn replay_trial(config: &FuzzConfig, trial: u64) -> Result<TrialRecord> {
    config.validate()?;
    let (d_r, d_s) = config.dims;
    let d = d_r * d_s;
    let mut rng = trial_rng(config.seed, trial);
    let reservoir = QuantumSystem::new(random_hermitian(d_r, &mut rng), config.kt)?;
    // always drawn so both Hamiltonian choices see the same remaining stream
    let drawn = random_hermitian(d_s, &mut rng);
    let h_s = match config.system_hamiltonian {
        SystemHamiltonian::Random => drawn,
        SystemHamiltonian::Degenerate => CMatrix::zeros(d_s, d_s),
    };
    let report = match config.mode {
        FuzzMode::Product => {
            let rho_s = random_density_matrix(d_s, &mut rng);
            let u = haar_unitary_from(d, &mut rng);
            landauer_check(&rho_s, &h_s, &reservoir, &u)?
        }
        FuzzMode::Correlated => {
            // low ancilla rank favours strongly correlated states
            let rank = rng.random_range(1..=d);
            let rho = random_mixed_by_purification(d, rank, &mut rng);
            let u = haar_unitary_from(d, &mut rng);
            let joint = JointState::new(config.dims, (&rho + rho.adjoint()) * c(0.5))?;
            landauer_check_joint(&joint, &h_s, &reservoir, &u)?
        }
    };
    Ok(TrialRecord {
        seed: config.seed,
        trial,
        slack: report.slack,
        holds: report.holds,
        bound_slack: report.bound_slack,
        delta_q: report.delta_q,
        delta_f_s: report.delta_f_s,
    })
}

/// Runs every trial of `config` in parallel. Rows come back in trial order
/// whatever the thread count.
pub fn run_campaign(config: &FuzzConfig) -> Result<FuzzSummary> {
    config.validate()?;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| replay_trial(config, t))
        .collect::<Result<Vec<_>>>()?;
    let mut min_slack = f64::INFINITY;
    let mut argmin_trial = None;
    for r in &records {
        if r.slack < min_slack {
            min_slack = r.slack;
            argmin_trial = Some(r.trial);
        }
    }
    Ok(FuzzSummary {
        config: *config,
        min_slack,
        argmin_trial,
        violations: records.iter().filter(|r| !r.holds).count() as u64,
        min_bound_slack: records.iter().map(|r| r.bound_slack).fold(f64::INFINITY, f64::min),
        bound_violations: records.iter().filter(|r| r.bound_slack < -SLACK_TOL).count() as u64,
        records,
    })
}

/// Haar-random unitaries with random H_R and ρ_S, H_S = 0, reservoir starting
/// in its Gibbs state.
pub fn product_fuzz(dims: (usize, usize), kt: f64, trials: u64, seed: u64) -> Result<FuzzSummary> {
    run_campaign(&FuzzConfig::new(FuzzMode::Product, dims, kt, trials, seed))
}

/// Same campaign with correlated initial states drawn by tracing out an
/// ancilla from a random pure state. Reports the most negative slack found.
pub fn correlated_violation_search(dims: (usize, usize), kt: f64, trials: u64, seed: u64) -> Result<FuzzSummary> {
    run_campaign(&FuzzConfig::new(FuzzMode::Correlated, dims, kt, trials, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicitySummary {
    pub trials: u64,
    pub violations: u64,
    /// Smallest S(ρ_RS|σ_RS) − S(ρ_S|σ_S) seen.
    pub min_gap: f64,
}

/// Relative entropy cannot grow under the partial trace over R.
pub fn monotonicity_fuzz(dims: (usize, usize), trials: u64, seed: u64) -> Result<MonotonicitySummary> {
    check_dims(dims, 1.0)?;
    let (d_r, d_s) = dims;
    let gaps = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let rho = random_density_matrix(d_r * d_s, &mut rng);
            let sigma = random_density_matrix(d_r * d_s, &mut rng);
            let full = relative_entropy(&rho, &sigma)?;
            let reduced = relative_entropy(&trace_out_first(&rho, d_r, d_s), &trace_out_first(&sigma, d_r, d_s))?;
            Ok(full - reduced)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MonotonicitySummary {
        trials,
        violations: gaps.iter().filter(|&&g| g < -SLACK_TOL).count() as u64,
        min_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Erasing a bit that is perfectly correlated with the reservoir.
///
/// R holds its Gibbs populations p for H_R = diag(0, 1) but shares them with
/// S as √p₀|00⟩ + √p₁|11⟩; a CNOT controlled by R resets S to |0⟩ without
/// changing R's energy. With a degenerate H_S the slack is −k_BT h(p).
pub fn entangled_erasure_example(kt: f64) -> Result<LandauerReport> {
    let h_r = diag_real(&[0.0, 1.0]);
    let reservoir = QuantumSystem::new(h_r, kt)?;
    let p1 = 1.0 / (1.0 + (1.0 / kt).exp());
    let p0 = 1.0 - p1;
    let mut psi = CMatrix::zeros(4, 1);
    psi[(0, 0)] = c(p0.sqrt());
    psi[(3, 0)] = c(p1.sqrt());
    let rho = &psi * psi.adjoint();
    let mut cnot = CMatrix::zeros(4, 4);
    for (from, to) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[(to, from)] = c(1.0);
    }
    let joint = JointState::new((2, 2), rho)?;
    landauer_check_joint(&joint, &CMatrix::zeros(2, 2), &reservoir, &cnot)
}
