use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, hermiticity_defect, CMatrix};

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// Density matrix on spin ⊗ truncated oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    cutoff: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity before wrapping `data`.
    pub fn new(cutoff: usize, data: CMatrix) -> Result<Self> {
        if data.nrows() != 2 * cutoff || data.ncols() != 2 * cutoff {
            return Err(Error::invalid(
                "rho",
                format!("expected {0}×{0} matrix", 2 * cutoff),
            ));
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::invalid("rho", format!("trace {tr} ≠ 1")));
        }
        let defect = hermiticity_defect(&data);
        if defect > HERMITIAN_TOL {
            return Err(Error::invalid("rho", format!("not Hermitian ({defect:e})")));
        }
        let state = Self { cutoff, data };
        let min = state.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::invalid("rho", format!("negative eigenvalue {min:e}")));
        }
        Ok(state)
    }

    /// Wraps an integrator result, restoring exact Hermiticity.
    pub(crate) fn from_evolved(cutoff: usize, data: CMatrix) -> Self {
        let data = (&data + data.adjoint()) * c(0.5);
        Self { cutoff, data }
    }

    /// |s⟩⟨s| ⊗ `osc` for spin index `s` (0 ↔ +, 1 ↔ −).
    pub fn spin_block(cutoff: usize, s: usize, osc: &CMatrix) -> CMatrix {
        let mut m = CMatrix::zeros(2 * cutoff, 2 * cutoff);
        m.view_mut((s * cutoff, s * cutoff), (cutoff, cutoff)).copy_from(osc);
        m
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dims(&self) -> (usize, usize) {
        (2, self.cutoff)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.data * &self.data).trace().re
    }

    pub fn block(&self, s: usize, t: usize) -> CMatrix {
        let n = self.cutoff;
        self.data.view((s * n, t * n), (n, n)).into_owned()
    }

    /// (p₊, p₋).
    pub fn spin_populations(&self) -> (f64, f64) {
        (self.block(0, 0).trace().re, self.block(1, 1).trace().re)
    }

    /// Frobenius norm of the ⟨+|ρ|−⟩ block.
    pub fn spin_coherence_norm(&self) -> f64 {
        self.block(0, 1).norm()
    }

    /// Oscillator state conditioned on spin `s`, normalised.
    pub fn oscillator_marginal(&self, s: usize) -> CMatrix {
        let b = self.block(s, s);
        let tr = b.trace().re;
        b / c(tr)
    }

    pub fn expectation(&self, op: &CMatrix) -> f64 {
        (&self.data * op).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.data).eigenvalues.iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Trace norm of the difference.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        hermitian_eigen(&(&self.data - &other.data))
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .sum()
    }

    /// Convex combination p·self + (1 − p)·other.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.cutoff != other.cutoff {
            return Err(Error::invalid("rho", "cutoffs differ"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("p", "must lie in [0, 1]"));
        }
        Ok(Self {
            cutoff: self.cutoff,
            data: &self.data * c(p) + &other.data * c(1.0 - p),
        })
    }
}
