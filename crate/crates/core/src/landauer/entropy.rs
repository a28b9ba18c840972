use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_hermitian, gibbs_state, hermitian_eigen, CMatrix, EIGEN_CLAMP};

/// −Σ λ ln λ in nats; eigenvalues below 1e-14 contribute nothing.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    check_hermitian(rho, 1e-10)?;
    Ok(entropy_of(rho))
}

fn entropy_of(rho: &CMatrix) -> f64 {
    hermitian_eigen(rho)
        .eigenvalues
        .iter()
        .filter(|&&l| l > EIGEN_CLAMP)
        .map(|&l| -l * l.ln())
        .sum()
}

/// S(ρ|σ) = Tr(ρ ln ρ − ρ ln σ); `f64::INFINITY` when ρ has weight outside
/// the support of σ.
pub fn relative_entropy(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    check_hermitian(rho, 1e-10)?;
    check_hermitian(sigma, 1e-10)?;
    if rho.shape() != sigma.shape() {
        return Err(Error::invalid("sigma", "shape differs from rho"));
    }
    let eig = hermitian_eigen(sigma);
    let mut cross = 0.0;
    for (j, &s) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(j);
        let weight = (v.adjoint() * rho * v)[(0, 0)].re;
        if s <= EIGEN_CLAMP {
            if weight > 1e-12 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.ln();
    }
    Ok((-entropy_of(rho) - cross).max(0.0))
}

/// F(ρ) = Tr(Hρ) − k_BT S_vn(ρ).
pub fn free_energy(rho: &CMatrix, h: &CMatrix, kt: f64) -> Result<f64> {
    if !(kt > 0.0) {
        return Err(Error::invalid("temperature", "must be positive"));
    }
    let energy = (h * rho).trace().re;
    Ok(energy - kt * von_neumann_entropy(rho)?)
}

/// |F(ρ) − F(ρ_β) − k_BT S(ρ|ρ_β)|.
pub fn free_energy_identity_check(rho: &CMatrix, h: &CMatrix, kt: f64) -> Result<f64> {
    let gibbs = gibbs_state(h, kt)?;
    let lhs = free_energy(rho, h, kt)?;
    let rhs = free_energy(&gibbs, h, kt)? + kt * relative_entropy(rho, &gibbs)?;
    Ok((lhs - rhs).abs())
}

/// Block-diagonal state ⊕_j p_j ρ_j over orthogonal sectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicDecomposition {
    pub blocks: Vec<(f64, CMatrix)>,
}

impl ErgodicDecomposition {
    pub fn new(blocks: Vec<(f64, CMatrix)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("blocks", "need at least one block"));
        }
        let total: f64 = blocks.iter().map(|b| b.0).sum();
        if (total - 1.0).abs() > 1e-10 || blocks.iter().any(|b| b.0 < 0.0) {
            return Err(Error::invalid("blocks", "probabilities must be ≥ 0 and sum to 1"));
        }
        for (_, rho) in &blocks {
            super::validate_density(rho, "blocks")?;
        }
        Ok(Self { blocks })
    }

    /// Splits `rho` into consecutive diagonal blocks of the given sizes; fails
    /// if any coherence connects two sectors.
    pub fn from_block_diagonal(rho: &CMatrix, sizes: &[usize]) -> Result<Self> {
        let d: usize = sizes.iter().sum();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::invalid("sizes", "block sizes do not cover the matrix"));
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in sizes {
            starts.push(acc);
            acc += s;
        }
        let sector = |i: usize| starts.iter().rposition(|&s| s <= i).expect("index in range");
        for i in 0..d {
            for j in 0..d {
                if sector(i) != sector(j) && rho[(i, j)].norm() > 1e-12 {
                    return Err(Error::invalid(
                        "blocks",
                        format!("sectors overlap: coherence at ({i}, {j})"),
                    ));
                }
            }
        }
        let blocks = starts
            .iter()
            .zip(sizes)
            .map(|(&s, &n)| {
                let b = rho.view((s, s), (n, n)).into_owned();
                let p = b.trace().re;
                let normed = if p > 0.0 { b / crate::linalg::c(p) } else { b };
                (p, normed)
            })
            .filter(|(p, _)| *p > 0.0)
            .collect();
        Self::new(blocks)
    }

    pub fn assemble(&self) -> CMatrix {
        let d: usize = self.blocks.iter().map(|b| b.1.nrows()).sum();
        let mut m = CMatrix::zeros(d, d);
        let mut at = 0;
        for (p, rho) in &self.blocks {
            let n = rho.nrows();
            m.view_mut((at, at), (n, n)).copy_from(&(rho * crate::linalg::c(*p)));
            at += n;
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalEntropy {
    /// k_B Σ p_j S_vn(ρ_j).
    pub physical: f64,
    /// −Σ p_j ln p_j.
    pub information: f64,
    /// |S_vn(⊕ p_j ρ_j) − Σ p_j S_vn(ρ_j) − I|.
    pub identity_residual: f64,
}

pub fn physical_entropy(decomp: &ErgodicDecomposition, boltzmann: f64) -> Result<PhysicalEntropy> {
    let mut average = 0.0;
    let mut information = 0.0;
    for (p, rho) in &decomp.blocks {
        average += p * von_neumann_entropy(rho)?;
        if *p > 0.0 {
            information -= p * p.ln();
        }
    }
    let total = von_neumann_entropy(&decomp.assemble())?;
    Ok(PhysicalEntropy {
        physical: boltzmann * average,
        information,
        identity_residual: (total - average - information).abs(),
    })
}
