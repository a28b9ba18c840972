//! Particle in an infinite square well on `[-a, a]` with a central barrier
//! `g δ(x)`, in units ħ = 2m = 1 (free levels E = k²).
//!
//! Odd eigenfunctions vanish at the barrier and are unaffected by it. Even
//! eigenfunctions have the form sin(k(a − |x|)); the derivative jump at the
//! origin gives the quantisation condition
//!
//! ```text
//! g sin(ka) + 2k cos(ka) = 0        (tan(ka) = −2k/g)
//! ```
//!
//! whose n-th root lies in `(π/2 + nπ, (n+1)π)` in the variable `ka`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::brent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Barrier {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub half_width: f64,
    pub barrier: Barrier,
}

impl WellSpec {
    pub fn new(half_width: f64, barrier: Barrier) -> Self {
        Self {
            half_width,
            barrier,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::invalid("half_width", "must be positive and finite"));
        }
        if let Barrier::Finite(g) = self.barrier {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::invalid(
                    "barrier_g",
                    format!("must be ≥ 0 or infinite, got {g}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Localization {
    Delocalized,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub index: usize,
    pub energy: f64,
    /// `None` for the localised levels of the impenetrable barrier.
    pub parity: Option<Parity>,
    pub localization: Localization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTable {
    pub levels: Vec<Level>,
}

impl LevelTable {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Restricts the table to one ergodic component.
    pub fn component(&self, loc: Localization) -> LevelTable {
        LevelTable {
            levels: self
                .levels
                .iter()
                .filter(|l| l.localization == loc)
                .copied()
                .collect(),
        }
    }

    /// −k_BT ln Σ_n e^{−E_n/k_BT} over the retained levels (multiplicities
    /// counted as listed).
    pub fn free_energy(&self, kt: f64) -> Result<f64> {
        if !(kt > 0.0) {
            return Err(Error::invalid("temperature", "must be positive"));
        }
        let e0 = self
            .levels
            .iter()
            .map(|l| l.energy)
            .fold(f64::INFINITY, f64::min);
        if !e0.is_finite() {
            return Err(Error::invalid("levels", "table is empty"));
        }
        let z: f64 = self
            .levels
            .iter()
            .map(|l| (-(l.energy - e0) / kt).exp())
            .sum();
        Ok(e0 - kt * z.ln())
    }
}

/// k of the odd level 2j+1: E = ((j+1)π/a)².
fn odd_wavenumber(a: f64, j: usize) -> f64 {
    (j as f64 + 1.0) * PI / a
}

/// Wavenumber of the even level 2j for finite barrier strength g.
pub fn even_wavenumber(a: f64, g: f64, j: usize) -> Result<f64> {
    let lo = PI / 2.0 + j as f64 * PI;
    let hi = (j as f64 + 1.0) * PI;
    if g == 0.0 {
        return Ok(lo / a);
    }
    let cond = |q: f64| g * q.sin() + 2.0 * (q / a) * q.cos();
    let q = brent(cond, lo, hi, 1e-15 * hi).map_err(|e| {
        Error::Computation(format!(
            "even level {j}: no root in ka ∈ ({lo}, {hi}) for g = {g}: {e}"
        ))
    })?;
    Ok(q / a)
}

/// Lowest `n_levels` levels (counting degenerate partners separately).
pub fn spectrum(spec: &WellSpec, n_levels: usize) -> Result<LevelTable> {
    spec.validate()?;
    if n_levels == 0 {
        return Err(Error::invalid("n_levels", "must be at least 1"));
    }
    let a = spec.half_width;
    let mut levels = Vec::with_capacity(n_levels);
    match spec.barrier {
        Barrier::Finite(g) => {
            for n in 0..n_levels {
                let j = n / 2;
                let (k, parity) = if n % 2 == 0 {
                    (even_wavenumber(a, g, j)?, Parity::Even)
                } else {
                    (odd_wavenumber(a, j), Parity::Odd)
                };
                levels.push(Level {
                    index: n,
                    energy: k * k,
                    parity: Some(parity),
                    localization: Localization::Delocalized,
                });
            }
        }
        Barrier::Infinite => {
            for n in 0..n_levels {
                let k = odd_wavenumber(a, n / 2);
                levels.push(Level {
                    index: n,
                    energy: k * k,
                    parity: None,
                    localization: if n % 2 == 0 {
                        Localization::Left
                    } else {
                        Localization::Right
                    },
                });
            }
        }
    }
    Ok(LevelTable { levels })
}

/// Which levels count as thermally accessible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    All,
    /// One ergodic component of the impenetrable-barrier spectrum.
    Component(Localization),
}

const LEVEL_CAP: usize = 2_000_000;
const TAIL_TOL: f64 = 1e-12;

/// Gibbs free energy with the level count grown until the neglected tail is
/// below 1e-12 of the retained partition sum.
pub fn gibbs_free_energy(spec: &WellSpec, kt: f64, sector: Sector) -> Result<GibbsSummary> {
    spec.validate()?;
    if !(kt > 0.0 && kt.is_finite()) {
        return Err(Error::invalid("temperature", "must be positive"));
    }
    if let (Sector::Component(loc), barrier) = (sector, spec.barrier) {
        if barrier != Barrier::Infinite || loc == Localization::Delocalized {
            return Err(Error::Domain(
                "ergodic components exist only for an infinite barrier".into(),
            ));
        }
    }
    let mut n = 16usize;
    loop {
        let table = spectrum(spec, n)?;
        let table = match sector {
            Sector::All => table,
            Sector::Component(loc) => table.component(loc),
        };
        let energies = table.energies();
        let e0 = energies[0];
        let z: f64 = energies.iter().map(|e| (-(e - e0) / kt).exp()).sum();
        // Distinct levels grow at least linearly beyond the top one, so the
        // tail is bounded by a geometric series with the last distinct gap,
        // counted once per member of the top multiplet.
        let m = energies.len();
        let top = energies[m - 1];
        let below = energies.iter().rposition(|&e| e < top - 1e-12 * top.abs().max(1.0));
        let tail = match below {
            Some(j) => {
                let degeneracy = (m - 1 - j) as f64;
                let last = (-(top - e0) / kt).exp();
                let ratio = (-(top - energies[j]) / kt).exp();
                if ratio < 1.0 {
                    degeneracy * last * ratio / (1.0 - ratio)
                } else {
                    f64::INFINITY
                }
            }
            None => f64::INFINITY,
        };
        if tail < TAIL_TOL * z && energies[m - 1] > e0 + kt {
            return Ok(GibbsSummary {
                free_energy: e0 - kt * z.ln(),
                levels_used: m,
                partition_sum: z,
                ground_energy: e0,
            });
        }
        if n >= LEVEL_CAP {
            return Err(Error::Computation(format!(
                "partition sum tail still {tail:e} of total after {n} levels"
            )));
        }
        n = (n * 2).min(LEVEL_CAP);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsSummary {
    pub free_energy: f64,
    pub levels_used: usize,
    /// Σ e^{−(E_n − E_0)/k_BT}.
    pub partition_sum: f64,
    pub ground_energy: f64,
}

/// Free energy shift of inserting the barrier, F(∞) − F(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsertionShift {
    /// Both L and R components counted (the Schrödinger-picture answer).
    pub all_states: f64,
    /// Particle confined to one ergodic component.
    pub one_component: f64,
    /// k_BT ln 2 for reference.
    pub reference: f64,
}

pub fn insertion_free_energy_shift(half_width: f64, kt: f64) -> Result<InsertionShift> {
    let open = gibbs_free_energy(&WellSpec::new(half_width, Barrier::Finite(0.0)), kt, Sector::All)?;
    let closed = WellSpec::new(half_width, Barrier::Infinite);
    let all = gibbs_free_energy(&closed, kt, Sector::All)?;
    let one = gibbs_free_energy(&closed, kt, Sector::Component(Localization::Left))?;
    Ok(InsertionShift {
        all_states: all.free_energy - open.free_energy,
        one_component: one.free_energy - open.free_energy,
        reference: kt * LN_2,
    })
}

/// Uniform grid of `points` samples on `[-a, a]` (endpoints included).
pub fn grid(half_width: f64, points: usize) -> Vec<f64> {
    let step = 2.0 * half_width / (points - 1) as f64;
    (0..points).map(|i| -half_width + step * i as f64).collect()
}

/// Normalised odd eigenfunction ψ_{2k+1}.
pub fn odd_state(a: f64, k: usize, x: f64) -> f64 {
    (odd_wavenumber(a, k) * x).sin() / a.sqrt()
}

/// Normalised even eigenfunction of the impenetrable barrier, ψ^∞_{2k},
/// signed so that it equals ψ_{2k+1} on the left half.
pub fn even_limit_state(a: f64, k: usize, x: f64) -> f64 {
    -(odd_wavenumber(a, k) * x.abs()).sin() / a.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizedPair {
    pub x: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// φ^{L,R}_k = (ψ^∞_{2k} ± ψ_{2k+1})/√2 sampled on `points` grid points.
pub fn localized_states(spec: &WellSpec, k: usize, points: usize) -> Result<LocalizedPair> {
    spec.validate()?;
    if spec.barrier != Barrier::Infinite {
        return Err(Error::Domain(
            "localised states are exact only for an infinite barrier".into(),
        ));
    }
    if points < 3 {
        return Err(Error::invalid("points", "need at least 3 grid points"));
    }
    let a = spec.half_width;
    let x = grid(a, points);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (left, right) = x
        .iter()
        .map(|&xi| {
            let even = even_limit_state(a, k, xi);
            let odd = odd_state(a, k, xi);
            (s * (even + odd), s * (even - odd))
        })
        .unzip();
    Ok(LocalizedPair { x, left, right })
}

/// Trapezoidal ∫ u v dx on a uniform grid.
pub fn trapezoid_inner(x: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let h = x[1] - x[0];
    let n = x.len();
    let interior: f64 = (1..n - 1).map(|i| u[i] * v[i]).sum();
    h * (interior + 0.5 * (u[0] * v[0] + u[n - 1] * v[n - 1]))
}

/// Finite-difference reference spectrum.
///
/// `cells` uniform cells with Dirichlet walls; the barrier sits on the centre
/// node as a single-cell potential g/Δx. Eigenvalues of the symmetric
/// tridiagonal matrix are isolated by Sturm-sequence bisection.
pub fn finite_difference_levels(spec: &WellSpec, cells: usize, n_levels: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if cells < 4 || cells % 2 != 0 {
        return Err(Error::invalid("cells", "need an even number of cells ≥ 4"));
    }
    let g = match spec.barrier {
        Barrier::Finite(g) => g,
        Barrier::Infinite => {
            return Err(Error::Domain(
                "finite-difference oracle needs a finite barrier".into(),
            ))
        }
    };
    let h = 2.0 * spec.half_width / cells as f64;
    let m = cells - 1;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = vec![2.0 * inv_h2; m];
    diag[m / 2] += g / h;
    let off = -inv_h2;
    let upper = diag.iter().fold(0.0f64, |acc, d| acc.max(*d)) + 2.0 * off.abs();

    // number of eigenvalues strictly below x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for &d in &diag[1..] {
            let denom = if q == 0.0 { f64::EPSILON * inv_h2 } else { q };
            q = d - x - off * off / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };

    (0..n_levels.min(m))
        .map(|idx| {
            let (mut lo, mut hi) = (0.0, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-14 * hi {
                    break;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect()
}
