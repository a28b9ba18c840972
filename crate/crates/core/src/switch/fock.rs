use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::{c, CMatrix};

/// Truncated annihilation operator on `n` Fock states.
pub fn annihilation(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if j == i + 1 { c((j as f64).sqrt()) } else { c(0.0) })
}

pub fn number_operator(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i == j { c(i as f64) } else { c(0.0) })
}

/// Extra Fock states used when exponentiating, so the retained block is
/// unaffected by the truncation edge.
fn padding(n: usize, alpha: f64) -> usize {
    n + 40 + (4.0 * alpha * alpha).ceil() as usize
}

/// D(α) = exp(α a† − α* a) restricted to the lowest `n` Fock states.
pub fn displacement(alpha: Complex64, n: usize) -> CMatrix {
    let m = padding(n, alpha.norm());
    let a = annihilation(m);
    let generator = a.adjoint() * alpha - &a * alpha.conj();
    generator.exp().view((0, 0), (n, n)).into_owned()
}

/// D(g) τ D(g)† truncated to `n` states, with τ the thermal state of
/// Boltzmann factor `q`, together with its trace leak 1 − Tr.
///
/// The returned block is not renormalised.
pub fn displaced_thermal(g: f64, q: f64, n: usize) -> (CMatrix, f64) {
    let m = padding(n, g);
    let a = annihilation(m);
    let generator = (a.adjoint() - &a) * c(g);
    let d = generator.exp();
    let pops = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            c((1.0 - q) * q.powi(i as i32))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let full = &d * pops * d.adjoint();
    let block = full.view((0, 0), (n, n)).into_owned();
    let leak = 1.0 - block.trace().re;
    (block, leak)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_algebra_below_edge() {
        let n = 8;
        let a = annihilation(n);
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        for i in 0..n - 1 {
            assert!((comm[(i, i)].re - 1.0).abs() < 1e-14);
        }
        assert!((a.adjoint() * &a - number_operator(n)).norm() < 1e-14);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let alpha = 1.3;
        let d = displacement(c(alpha), 30);
        // ⟨k|α⟩ = e^{−α²/2} α^k/√k!
        let mut amp = (-alpha * alpha / 2.0).exp();
        for k in 0..30 {
            assert!((d[(k, 0)].re - amp).abs() < 1e-12, "k = {k}");
            amp *= alpha / ((k + 1) as f64).sqrt();
        }
    }

    #[test]
    fn thermal_leak_small_for_large_cutoff() {
        let (rho, leak) = displaced_thermal(1.0, (-1.0f64).exp(), 60);
        assert!(leak.abs() < 1e-12);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }
}
