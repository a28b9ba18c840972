//! Landauer's bound ΔQ ≥ ΔF_S for a system S interacting unitarily with a
//! thermal reservoir R, the identities it rests on, and what happens once the
//! initial state is correlated.

mod check;
mod entropy;
mod random;

pub use check::{
    correlated_violation_search, entangled_erasure_example, landauer_check, landauer_check_joint,
    monotonicity_fuzz, product_fuzz, replay_trial, run_campaign, FuzzConfig, FuzzMode, FuzzSummary,
    LandauerReport, MonotonicitySummary, SystemHamiltonian, TrialRecord, SLACK_TOL,
};
pub use entropy::{
    free_energy, free_energy_identity_check, physical_entropy, relative_entropy, von_neumann_entropy,
    ErgodicDecomposition, PhysicalEntropy,
};
pub use random::{haar_unitary, haar_unitary_from, random_density_matrix, random_hermitian, trial_rng};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_hermitian, gibbs_state, CMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumSystem {
    pub hamiltonian: CMatrix,
    /// k_B T as an energy.
    pub kt: f64,
}

impl QuantumSystem {
    pub fn new(hamiltonian: CMatrix, kt: f64) -> Result<Self> {
        check_hermitian(&hamiltonian, 1e-12)?;
        if hamiltonian.nrows() < 2 {
            return Err(Error::invalid("hamiltonian", "dimension must be at least 2"));
        }
        if !(kt > 0.0 && kt.is_finite()) {
            return Err(Error::invalid("temperature", "must be positive"));
        }
        Ok(Self { hamiltonian, kt })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn gibbs(&self) -> CMatrix {
        gibbs_state(&self.hamiltonian, self.kt).expect("temperature validated")
    }
}

/// Density matrix on R ⊗ S.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub dims: (usize, usize),
    pub data: CMatrix,
}

impl JointState {
    pub fn new(dims: (usize, usize), data: CMatrix) -> Result<Self> {
        let d = dims.0 * dims.1;
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::invalid("rho_RS", format!("expected {d}×{d}")));
        }
        validate_density(&data, "rho_RS")?;
        Ok(Self { dims, data })
    }

    pub fn reservoir(&self) -> CMatrix {
        crate::linalg::trace_out_second(&self.data, self.dims.0, self.dims.1)
    }

    pub fn system(&self) -> CMatrix {
        crate::linalg::trace_out_first(&self.data, self.dims.0, self.dims.1)
    }
}

pub(crate) fn validate_density(rho: &CMatrix, field: &'static str) -> Result<()> {
    check_hermitian(rho, 1e-10).map_err(|_| Error::invalid(field, "not Hermitian"))?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::invalid(field, format!("trace {tr} ≠ 1")));
    }
    let min = crate::linalg::hermitian_eigen(rho)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::invalid(field, format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}
