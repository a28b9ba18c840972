use serde::Serialize;
use thermolab::linalg::{c, trace_norm, CMatrix};
use thermolab::partition::Branch;
use thermolab::switch::{
    biased_gibbs, build_hamiltonian, computation_cost, displaced_thermal, evolve_sampled, lindblad_generator,
    min_work, pointer_error_analytic, pointer_error_numeric, resolve_cutoff, tunneling_rate, ComputationCost,
    IntegratorOptions,
};
use thermolab::{CutoffPolicy, DensityMatrix, SwitchParams, Units};

use crate::config::SwitchConfig;
use crate::error::CliError;
use crate::output::{num, OutputSet, Table};

#[derive(Debug, Clone, Serialize)]
pub struct SwitchSummary {
    pub omega0: f64,
    pub g: f64,
    pub kt: f64,
    pub eps_analytic: f64,
    pub eps_numeric: f64,
    pub eps_ratio: f64,
    pub root_fidelity: f64,
    pub eps_boltzmann: f64,
    pub k_theta: f64,
    pub gamma_tun: f64,
    /// k_BΘ ln(1/ε); null when ε = 1 (no barrier).
    pub w_min: Option<f64>,
    pub barrier_gap: f64,
    pub cutoff: usize,
    pub leak: f64,
    pub stationarity_plus: f64,
    pub stationarity_minus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computation_cost: Option<ComputationCost>,
}

pub fn params(cfg: &SwitchConfig) -> SwitchParams {
    let p = SwitchParams::new(cfg.omega0, cfg.g, cfg.kt).with_rates(cfg.gamma, cfg.gamma_dephase, cfg.gamma1);
    match cfg.fock_cutoff {
        Some(n) => p.with_cutoff(n),
        None => p,
    }
}

fn policy(cfg: &SwitchConfig) -> CutoffPolicy {
    CutoffPolicy {
        leak_tol: cfg.leak_tol,
        ..CutoffPolicy::default()
    }
}

pub fn summarize(cfg: &SwitchConfig, units: Units) -> Result<SwitchSummary, CliError> {
    let p = params(cfg);
    let policy = policy(cfg);
    let analytic = pointer_error_analytic(&p)?;
    let numeric = pointer_error_numeric(&p, policy)?;
    let cutoff = resolve_cutoff(&p, policy)?;
    let gen = lindblad_generator(&p, cutoff)?;
    let residual = |b| -> Result<f64, CliError> {
        let rho = biased_gibbs(&p, b, cutoff, policy.leak_tol)?;
        Ok(trace_norm(&gen.apply(rho.matrix())))
    };
    let w_min = if analytic.epsilon < 1.0 {
        Some(min_work(analytic.epsilon, analytic.k_theta, Units::Natural)?)
    } else {
        None
    };
    let cost = cfg
        .cost
        .map(|c| computation_cost(c.n_gates, c.delta, c.kappa_ratio, c.temperature, units))
        .transpose()?;
    Ok(SwitchSummary {
        omega0: p.omega0,
        g: p.g,
        kt: p.kt,
        eps_analytic: analytic.epsilon,
        eps_numeric: numeric.epsilon,
        eps_ratio: numeric.epsilon / analytic.epsilon,
        root_fidelity: numeric.root_fidelity,
        eps_boltzmann: analytic.epsilon_boltzmann,
        k_theta: analytic.k_theta,
        gamma_tun: tunneling_rate(&p)?,
        w_min,
        barrier_gap: analytic.energy_gap,
        cutoff,
        leak: numeric.leak,
        stationarity_plus: residual(Branch::Plus)?,
        stationarity_minus: residual(Branch::Minus)?,
        computation_cost: cost,
    })
}

/// Equal spin superposition on top of the unshifted thermal oscillator.
fn initial_state(p: &SwitchParams, cutoff: usize) -> Result<DensityMatrix, CliError> {
    let (osc, leak) = displaced_thermal(0.0, p.boltzmann_factor(), cutoff);
    let osc = osc / c(1.0 - leak);
    let mut data = CMatrix::zeros(2 * cutoff, 2 * cutoff);
    for s in 0..2 {
        for t in 0..2 {
            data.view_mut((s * cutoff, t * cutoff), (cutoff, cutoff))
                .copy_from(&(&osc * c(0.5)));
        }
    }
    Ok(DensityMatrix::new(cutoff, data)?)
}

pub fn run(cfg: &SwitchConfig, units: Units, out: &mut OutputSet) -> Result<(), CliError> {
    let summary = summarize(cfg, units)?;
    let series = if cfg.t_max > 0.0 {
        if cfg.samples == 0 {
            return Err(CliError::Input("samples must be at least 1".into()));
        }
        let p = params(cfg);
        let cutoff = summary.cutoff;
        let gen = lindblad_generator(&p, cutoff)?;
        let h = build_hamiltonian(&p, cutoff)?;
        let rho = initial_state(&p, cutoff)?;
        let times: Vec<f64> = (0..=cfg.samples)
            .map(|i| cfg.t_max * i as f64 / cfg.samples as f64)
            .collect();
        let mut table = Table::new(["t", "p_plus", "p_minus", "coherence", "energy"]);
        evolve_sampled(&rho, &gen, &times, IntegratorOptions::default(), |t, state| {
            let (pp, pm) = state.spin_populations();
            table.push(vec![
                num(t),
                num(pp),
                num(pm),
                num(state.spin_coherence_norm()),
                num(state.expectation(&h)),
            ]);
        })?;
        Some(table)
    } else {
        None
    };
    out.write_json("switch_summary.json", &summary)?;
    if let Some(t) = series {
        out.write_csv("switch_series.csv", &t)?;
    }
    Ok(())
}
