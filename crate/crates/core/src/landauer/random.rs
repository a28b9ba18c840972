use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMatrix};

/// Independent stream for one trial of a seeded campaign, so a single trial
/// can be replayed without running the others.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal pushed back into Q.
pub fn haar_unitary_from<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_unitary(dim: usize, seed: u64) -> CMatrix {
    haar_unitary_from(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// GUE-like Hermitian matrix with unit-variance entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + g.adjoint()) * c(0.5)
}

/// Full-rank density matrix W W† / Tr(W W†) from a square Ginibre W.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let w = ginibre(dim, dim, rng);
    let m = &w * w.adjoint();
    let tr = m.trace().re;
    m / c(tr)
}

/// Random pure state on `dim ⊗ ancilla`, ancilla traced out.
pub(crate) fn random_mixed_by_purification<R: Rng + ?Sized>(
    dim: usize,
    ancilla: usize,
    rng: &mut R,
) -> CMatrix {
    let w = ginibre(dim, ancilla, rng);
    let m = &w * w.adjoint();
    let tr = m.trace().re;
    m / c(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn haar_is_unitary_and_reproducible() {
        for dim in [2, 3, 8] {
            let u = haar_unitary(dim, 17);
            assert!(unitarity_defect(&u) < 1e-12);
            assert_eq!(u, haar_unitary(dim, 17));
        }
        assert_ne!(haar_unitary(4, 1), haar_unitary(4, 2));
    }

    #[test]
    fn trial_streams_are_independent_of_order() {
        let mut a = trial_rng(5, 3);
        let mut b = trial_rng(5, 3);
        let mut other = trial_rng(5, 4);
        let x: u64 = a.random();
        assert_eq!(x, b.random::<u64>());
        assert_ne!(x, other.random::<u64>());
    }

    fn eigen_2x2(u: &CMatrix) -> (Complex64, Complex64) {
        let half = (u[(0, 0)] + u[(1, 1)]) * 0.5;
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        let root = (half * half - det).sqrt();
        (half + root, half - root)
    }

    fn chi2_p_value(counts: &[usize], expected: &[f64]) -> f64 {
        let chi2: f64 = counts
            .iter()
            .zip(expected)
            .map(|(&n, &e)| (n as f64 - e).powi(2) / e)
            .sum();
        1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(chi2)
    }

    #[test]
    fn eigenphases_uniform_on_circle() {
        let bins = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut counts = vec![0usize; bins];
        for _ in 0..10_000 {
            let u = haar_unitary_from(2, &mut rng);
            let (a, b) = eigen_2x2(&u);
            for z in [a, b] {
                let x = (z.arg() + std::f64::consts::PI) / std::f64::consts::TAU;
                counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
            }
        }
        let expected = vec![20_000.0 / bins as f64; bins];
        assert!(chi2_p_value(&counts, &expected) > 0.01);
    }

    #[test]
    fn eigenphases_of_2x2_haar_follow_circular_law() {
        // For U(2) the joint eigenphase density is ∝ |e^{iφ1} − e^{iφ2}|²,
        // so the gap Δ = φ1 − φ2 has density (1 − cos Δ)/(2π) on (−π, π].
        let bins = 12;
        let draws = 20_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = vec![0usize; bins];
        let tau = std::f64::consts::TAU;
        for _ in 0..draws {
            let u = haar_unitary_from(2, &mut rng);
            let (a, b) = eigen_2x2(&u);
            let mut gap = (a.arg() - b.arg()).rem_euclid(tau);
            if gap > std::f64::consts::PI {
                gap -= tau;
            }
            let k = (((gap + std::f64::consts::PI) / tau) * bins as f64) as usize;
            counts[k.min(bins - 1)] += 1;
        }
        let expected: Vec<f64> = (0..bins)
            .map(|k| {
                let lo = -std::f64::consts::PI + tau * k as f64 / bins as f64;
                let hi = lo + tau / bins as f64;
                ((hi - lo) - (hi.sin() - lo.sin())) / tau * draws as f64
            })
            .collect();
        assert!(chi2_p_value(&counts, &expected) > 1e-3);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = trial_rng(9, 0);
        let rho = random_density_matrix(4, &mut rng);
        assert!(super::super::validate_density(&rho, "rho").is_ok());
        let h = random_hermitian(3, &mut rng);
        assert!((&h - h.adjoint()).norm() < 1e-14);
    }
}
