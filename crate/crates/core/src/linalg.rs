//! Dense complex matrix helpers shared by the switch and Landauer models.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues below this are treated as zero inside logarithms.
pub const EIGEN_CLAMP: f64 = 1e-14;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&v| c(v))))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// ‖m − m†‖_max.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::invalid("matrix", "must be square"));
    }
    let defect = hermiticity_defect(m);
    if defect > tol {
        return Err(Error::invalid(
            "matrix",
            format!("not Hermitian (defect {defect:e})"),
        ));
    }
    Ok(())
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    let h = (m + m.adjoint()) * c(0.5);
    SymmetricEigen::new(h)
}

/// Rebuilds V f(Λ) V† from an eigen-decomposition.
pub fn spectral_map<F: Fn(f64) -> f64>(eig: &SymmetricEigen<Complex64, nalgebra::Dyn>, f: F) -> CMatrix {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        let fj = c(f(lam));
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= fj);
    }
    scaled * v.adjoint()
}

/// Square root of a positive semidefinite matrix, negative eigenvalues clamped.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    spectral_map(&hermitian_eigen(m), |x| x.max(0.0).sqrt())
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Uhlmann root fidelity Tr√(√ρ σ √ρ), evaluated as ‖√ρ √σ‖₁.
pub fn root_fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    trace_norm(&(sqrt_psd(rho) * sqrt_psd(sigma)))
}

/// Gibbs state e^{−H/kT}/Z.
pub fn gibbs_state(h: &CMatrix, kt: f64) -> Result<CMatrix> {
    if !(kt > 0.0) {
        return Err(Error::invalid("temperature", "must be positive"));
    }
    let eig = hermitian_eigen(h);
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let z: f64 = eig.eigenvalues.iter().map(|e| (-(e - e0) / kt).exp()).sum();
    Ok(spectral_map(&eig, |e| (-(e - e0) / kt).exp() / z))
}

/// Partial trace over the second factor of a `d1 ⊗ d2` operator.
pub fn trace_out_second(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum())
}

/// Partial trace over the first factor of a `d1 ⊗ d2` operator.
pub fn trace_out_first(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d2, d2, |i, j| (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum())
}

/// ‖U†U − I‖_max.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - identity(n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_traces_of_product() {
        let a = diag_real(&[0.25, 0.75]);
        let b = diag_real(&[0.1, 0.2, 0.7]);
        let ab = kron(&a, &b);
        assert!((trace_out_second(&ab, 2, 3) - &a).norm() < 1e-15);
        assert!((trace_out_first(&ab, 2, 3) - &b).norm() < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0), Complex64::new(0.5, 0.3), Complex64::new(0.5, -0.3), c(1.0)]);
        let s = sqrt_psd(&m);
        assert!((&s * &s - &m).norm() < 1e-13);
    }

    #[test]
    fn fidelity_of_pure_states() {
        let psi = [c(1.0), c(0.0)];
        let phi = [c(0.6), Complex64::new(0.0, 0.8)];
        let proj = |v: &[Complex64; 2]| CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj());
        let f = root_fidelity(&proj(&psi), &proj(&phi));
        assert!((f - 0.6).abs() < 1e-12);
    }
}
