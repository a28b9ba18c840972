//! Dormand–Prince 5(4) integration of dρ/dt = L[ρ].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

use super::lindblad::LindbladGenerator;
use super::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    /// Upper limit on the step; `None` means unlimited.
    pub max_step: Option<f64>,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 1e-3,
            max_step: None,
            min_step: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub state: DensityMatrix,
    pub steps: usize,
    pub rejected: usize,
    /// |Tr ρ(t) − Tr ρ(0)|.
    pub trace_drift: f64,
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a> {
    gen: &'a LindbladGenerator,
    opts: IntegratorOptions,
    h: f64,
    steps: usize,
    rejected: usize,
}

impl Stepper<'_> {
    /// Advances `y` (with derivative `dy`) to `t_end` from `t`.
    fn advance(&mut self, y: &mut CMatrix, dy: &mut CMatrix, t: &mut f64, t_end: f64) -> Result<()> {
        while *t < t_end {
            let remaining = t_end - *t;
            let mut h = self.h.min(remaining);
            if let Some(max) = self.opts.max_step {
                h = h.min(max);
            }
            let mut k: Vec<CMatrix> = Vec::with_capacity(7);
            k.push(dy.clone());
            for row in A.iter().take(5) {
                let mut stage = y.clone();
                for (j, &a) in row.iter().enumerate().take(k.len()) {
                    if a != 0.0 {
                        stage += &k[j] * c(h * a);
                    }
                }
                k.push(self.gen.apply(&stage));
            }
            let mut y_new = y.clone();
            for (j, &b) in A[5].iter().enumerate() {
                if b != 0.0 {
                    y_new += &k[j] * c(h * b);
                }
            }
            let k7 = self.gen.apply(&y_new);
            k.push(k7);

            let mut err = CMatrix::zeros(y.nrows(), y.ncols());
            for (j, &e) in E.iter().enumerate() {
                if e != 0.0 {
                    err += &k[j] * c(h * e);
                }
            }
            // RMS of the scaled error over all entries
            let sum: f64 = err
                .iter()
                .zip(y.iter().zip(y_new.iter()))
                .map(|(e, (a, b))| (e.norm() / (self.opts.atol + self.opts.rtol * a.norm().max(b.norm()))).powi(2))
                .sum();
            let ratio = (sum / err.len() as f64).sqrt();

            if ratio <= 1.0 {
                *t = if h == remaining { t_end } else { *t + h };
                *y = y_new;
                *dy = k.pop().expect("seven stages");
                self.steps += 1;
                if self.steps > self.opts.max_steps {
                    return Err(Error::Computation(format!(
                        "integrator exceeded {} steps",
                        self.opts.max_steps
                    )));
                }
            } else {
                self.rejected += 1;
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            let proposal = h * factor;
            // an accepted step shortened to hit a sample time says nothing
            // against the previous step size
            self.h = if ratio <= 1.0 && h < self.h { self.h.max(proposal) } else { proposal };
            if self.h < self.opts.min_step {
                return Err(Error::Computation(format!(
                    "step size underflow ({:e}) at t = {t}",
                    self.h
                )));
            }
        }
        Ok(())
    }
}

/// Propagates `rho` to time `t`.
pub fn evolve(rho: &DensityMatrix, gen: &LindbladGenerator, t: f64, opts: IntegratorOptions) -> Result<EvolveOutcome> {
    evolve_sampled(rho, gen, &[t], opts, |_, _| {})
}

/// Propagates `rho` through the increasing sample times, calling `observe`
/// at each of them.
pub fn evolve_sampled<F>(
    rho: &DensityMatrix,
    gen: &LindbladGenerator,
    times: &[f64],
    opts: IntegratorOptions,
    mut observe: F,
) -> Result<EvolveOutcome>
where
    F: FnMut(f64, &DensityMatrix),
{
    if rho.cutoff() != gen.cutoff() {
        return Err(Error::invalid("rho", "cutoff does not match the generator"));
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("t", "sample times must be finite, ≥ 0 and increasing"));
    }
    let start_trace = rho.trace();
    let mut y = rho.matrix().clone();
    let mut dy = gen.apply(&y);
    let mut t = 0.0;
    let mut stepper = Stepper {
        gen,
        opts,
        h: opts.initial_step,
        steps: 0,
        rejected: 0,
    };
    let mut state = rho.clone();
    for &target in times {
        stepper.advance(&mut y, &mut dy, &mut t, target)?;
        state = DensityMatrix::from_evolved(rho.cutoff(), y.clone());
        observe(target, &state);
    }
    Ok(EvolveOutcome {
        trace_drift: (state.trace() - start_trace).abs(),
        state,
        steps: stepper.steps,
        rejected: stepper.rejected,
    })
}
