use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{c, identity, CMatrix};

use super::fock::annihilation;
use super::SwitchParams;

const SPIN: [f64; 2] = [1.0, -1.0];

/// H = ω₀ a†a − ω₀ g (a† + a) σ³ on spin ⊗ `cutoff` Fock states.
pub fn build_hamiltonian(params: &SwitchParams, cutoff: usize) -> Result<CMatrix> {
    check_cutoff(params, cutoff)?;
    let gen = LindbladGenerator::new(params, cutoff);
    let mut h = CMatrix::zeros(2 * cutoff, 2 * cutoff);
    for s in 0..2 {
        h.view_mut((s * cutoff, s * cutoff), (cutoff, cutoff))
            .copy_from(&gen.hamiltonian[s]);
    }
    Ok(h)
}

/// Real symmetric tridiagonal operator: `d` on the diagonal, `e[k]` at
/// (k, k+1) and (k+1, k).
#[derive(Debug, Clone)]
struct Tri {
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tri {
    fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        Self {
            d: (0..n).map(|k| m[(k, k)].re).collect(),
            e: (0..n.saturating_sub(1)).map(|k| m[(k, k + 1)].re).collect(),
        }
    }

    /// T X
    fn left(&self, x: &CMatrix, out: &mut CMatrix, scale: Complex64) {
        let n = self.d.len();
        for j in 0..n {
            for i in 0..n {
                let mut v = x[(i, j)] * self.d[i];
                if i > 0 {
                    v += x[(i - 1, j)] * self.e[i - 1];
                }
                if i + 1 < n {
                    v += x[(i + 1, j)] * self.e[i];
                }
                out[(i, j)] += v * scale;
            }
        }
    }

    /// X T
    fn right(&self, x: &CMatrix, out: &mut CMatrix, scale: Complex64) {
        let n = self.d.len();
        for j in 0..n {
            for i in 0..n {
                let mut v = x[(i, j)] * self.d[j];
                if j > 0 {
                    v += x[(i, j - 1)] * self.e[j - 1];
                }
                if j + 1 < n {
                    v += x[(i, j + 1)] * self.e[j];
                }
                out[(i, j)] += v * scale;
            }
        }
    }
}

/// Real upper bidiagonal b: `d` on the diagonal, `u[k]` at (k, k+1).
#[derive(Debug, Clone)]
struct Bi {
    d: Vec<f64>,
    u: Vec<f64>,
}

impl Bi {
    fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        Self {
            d: (0..n).map(|k| m[(k, k)].re).collect(),
            u: (0..n.saturating_sub(1)).map(|k| m[(k, k + 1)].re).collect(),
        }
    }

    /// b_s X b_t†
    fn sandwich(bs: &Bi, x: &CMatrix, bt: &Bi) -> CMatrix {
        let n = bs.d.len();
        let mut y = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut v = x[(i, j)] * bs.d[i];
                if i + 1 < n {
                    v += x[(i + 1, j)] * bs.u[i];
                }
                y[(i, j)] = v;
            }
        }
        let mut z = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut v = y[(i, j)] * bt.d[j];
                if j + 1 < n {
                    v += y[(i, j + 1)] * bt.u[j];
                }
                z[(i, j)] = v;
            }
        }
        z
    }

    /// b_s† X b_t
    fn sandwich_dag(bs: &Bi, x: &CMatrix, bt: &Bi) -> CMatrix {
        let n = bs.d.len();
        let mut y = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut v = x[(i, j)] * bs.d[i];
                if i > 0 {
                    v += x[(i - 1, j)] * bs.u[i - 1];
                }
                y[(i, j)] = v;
            }
        }
        let mut z = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut v = y[(i, j)] * bt.d[j];
                if j > 0 {
                    v += y[(i, j - 1)] * bt.u[j - 1];
                }
                z[(i, j)] = v;
            }
        }
        z
    }
}

/// Matrix-free generator of the switch master equation,
///
/// ```text
/// L[ρ] = −i[H, ρ] + γ D[b](ρ) + γ e^{−ω₀/k_BT} D[b†](ρ) − (Γ/2)[τ³, [τ³, ρ]]
/// ```
///
/// with b = a − gσ³ and D[x]ρ = xρx† − ½{x†x, ρ}. Every operator is diagonal
/// in spin, so L acts on each oscillator block ρ_{ss'} separately, and every
/// oscillator operator is banded in the Fock basis, so one application costs
/// O(N²).
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    cutoff: usize,
    hamiltonian: [CMatrix; 2],
    h_band: [Tri; 2],
    lower: [Bi; 2],
    // b†b and b b† per spin branch, taken from the truncated matrices
    decay_rate_op: [Tri; 2],
    excite_rate_op: [Tri; 2],
    gamma_down: f64,
    gamma_up: f64,
    gamma_dephase: f64,
}

pub fn lindblad_generator(params: &SwitchParams, cutoff: usize) -> Result<LindbladGenerator> {
    check_cutoff(params, cutoff)?;
    Ok(LindbladGenerator::new(params, cutoff))
}

fn check_cutoff(params: &SwitchParams, cutoff: usize) -> Result<()> {
    params.validate()?;
    if cutoff < params.min_cutoff() {
        return Err(crate::error::Error::invalid(
            "fock_cutoff",
            format!("{cutoff} is below the minimum {}", params.min_cutoff()),
        ));
    }
    Ok(())
}

impl LindbladGenerator {
    fn new(params: &SwitchParams, cutoff: usize) -> Self {
        let a = annihilation(cutoff);
        let id = identity(cutoff);
        let lower = SPIN.map(|s| &a - &id * c(params.g * s));
        let decay = [lower[0].adjoint() * &lower[0], lower[1].adjoint() * &lower[1]];
        let excite = [&lower[0] * lower[0].adjoint(), &lower[1] * lower[1].adjoint()];
        let w = params.omega0;
        let g2 = params.g * params.g;
        let hamiltonian = [
            (&decay[0] - &id * c(g2)) * c(w),
            (&decay[1] - &id * c(g2)) * c(w),
        ];
        Self {
            cutoff,
            h_band: [Tri::from_dense(&hamiltonian[0]), Tri::from_dense(&hamiltonian[1])],
            hamiltonian,
            lower: [Bi::from_dense(&lower[0]), Bi::from_dense(&lower[1])],
            decay_rate_op: [Tri::from_dense(&decay[0]), Tri::from_dense(&decay[1])],
            excite_rate_op: [Tri::from_dense(&excite[0]), Tri::from_dense(&excite[1])],
            gamma_down: params.gamma,
            gamma_up: params.gamma * params.boltzmann_factor(),
            gamma_dephase: params.gamma_dephase,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff
    }

    /// Rough bound on the generator's spectral radius, used for step limits.
    pub fn spectral_bound(&self) -> f64 {
        let h = self.hamiltonian.iter().map(|m| m.norm()).fold(0.0, f64::max);
        let d = self
            .decay_rate_op
            .iter()
            .map(|t| t.d.iter().chain(&t.e).chain(&t.e).map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        2.0 * h + 2.0 * (self.gamma_down + self.gamma_up) * d + 2.0 * self.gamma_dephase
    }

    fn block(&self, x: &CMatrix, s: usize, t: usize) -> CMatrix {
        let n = self.cutoff;
        let mut out = CMatrix::zeros(n, n);
        let mi = -Complex64::i();
        self.h_band[s].left(x, &mut out, mi);
        self.h_band[t].right(x, &mut out, -mi);
        if self.gamma_down != 0.0 {
            out += Bi::sandwich(&self.lower[s], x, &self.lower[t]) * c(self.gamma_down);
            self.decay_rate_op[s].left(x, &mut out, c(-0.5 * self.gamma_down));
            self.decay_rate_op[t].right(x, &mut out, c(-0.5 * self.gamma_down));
        }
        if self.gamma_up != 0.0 {
            out += Bi::sandwich_dag(&self.lower[s], x, &self.lower[t]) * c(self.gamma_up);
            self.excite_rate_op[s].left(x, &mut out, c(-0.5 * self.gamma_up));
            self.excite_rate_op[t].right(x, &mut out, c(-0.5 * self.gamma_up));
        }
        if s != t {
            out -= x * c(2.0 * self.gamma_dephase);
        }
        out
    }

    /// L[ρ] for a full 2N × 2N matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let n = self.cutoff;
        let mut out = CMatrix::zeros(2 * n, 2 * n);
        for s in 0..2 {
            for t in 0..2 {
                let x = rho.view((s * n, t * n), (n, n)).into_owned();
                out.view_mut((s * n, t * n), (n, n))
                    .copy_from(&self.block(&x, s, t));
            }
        }
        out
    }

    /// Dense superoperator on row-major vec(ρ); only for small cutoffs.
    pub fn to_dense(&self) -> Result<CMatrix> {
        let d = self.dim();
        if d > 32 {
            return Err(crate::error::Error::invalid(
                "fock_cutoff",
                "dense superoperator limited to cutoff ≤ 16",
            ));
        }
        let mut sup = CMatrix::zeros(d * d, d * d);
        for col in 0..d * d {
            let mut e = CMatrix::zeros(d, d);
            e[(col / d, col % d)] = c(1.0);
            let image = self.apply(&e);
            for row in 0..d * d {
                sup[(row, col)] = image[(row / d, row % d)];
            }
        }
        Ok(sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The same generator written with dense products.
    fn dense_apply(p: &SwitchParams, n: usize, rho: &CMatrix) -> CMatrix {
        let a = annihilation(n);
        let id = identity(n);
        let gamma_up = p.gamma * p.boltzmann_factor();
        let mut out = CMatrix::zeros(2 * n, 2 * n);
        for s in 0..2 {
            for t in 0..2 {
                let bs = &a - &id * c(p.g * SPIN[s]);
                let bt = &a - &id * c(p.g * SPIN[t]);
                let hs = (bs.adjoint() * &bs - &id * c(p.g * p.g)) * c(p.omega0);
                let ht = (bt.adjoint() * &bt - &id * c(p.g * p.g)) * c(p.omega0);
                let x = rho.view((s * n, t * n), (n, n)).into_owned();
                let mut y = (&hs * &x - &x * &ht) * (-Complex64::i());
                y += (&bs * &x * bt.adjoint() - (bs.adjoint() * &bs * &x + &x * bt.adjoint() * &bt) * c(0.5)) * c(p.gamma);
                y += (bs.adjoint() * &x * &bt - (&bs * bs.adjoint() * &x + &x * &bt * bt.adjoint()) * c(0.5)) * c(gamma_up);
                if s != t {
                    y -= &x * c(2.0 * p.gamma_dephase);
                }
                out.view_mut((s * n, t * n), (n, n)).copy_from(&y);
            }
        }
        out
    }

    #[test]
    fn banded_products_match_dense_algebra() {
        let p = SwitchParams::new(0.9, 0.6, 0.7).with_rates(0.3, 0.2, 0.0);
        let n = p.min_cutoff();
        let gen = lindblad_generator(&p, n).unwrap();
        let rho = CMatrix::from_fn(2 * n, 2 * n, |i, j| {
            Complex64::new(((3 * i + 5 * j) % 7) as f64 - 3.0, ((i * j) % 4) as f64 - 1.5)
        });
        let diff = (gen.apply(&rho) - dense_apply(&p, n, &rho)).norm();
        assert!(diff < 1e-10 * rho.norm(), "{diff}");
    }
}
