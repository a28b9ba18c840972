use serde::Serialize;
use thermolab::bath::{coherent_overlap, discretize};
use thermolab::partition::{post_insertion_energy, thermal_branch_energy, WorkLedger};
use thermolab::{BathSpec, ModeSet};

use crate::config::PartitionConfig;
use crate::error::CliError;
use crate::output::{num, OutputSet, Table};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PartitionPoint {
    pub ledger: WorkLedger,
    /// Overlap of the two branch bath states after the ramp.
    pub overlap: f64,
}

pub const LEDGER_COLUMNS: [&str; 9] = [
    "kappa",
    "omega_min",
    "t0",
    "lambda",
    "e_static",
    "e_wave",
    "w_external",
    "overlap",
    "dissipation_ratio",
];

pub fn modes(cfg: &PartitionConfig) -> Result<ModeSet, CliError> {
    let spec = BathSpec::new(cfg.kappa, cfg.omega_min, cfg.omega_max, cfg.n_modes).with_amplitude(cfg.amplitude);
    Ok(discretize(&spec)?)
}

pub fn evaluate(cfg: &PartitionConfig) -> Result<PartitionPoint, CliError> {
    let modes = modes(cfg)?;
    let ledger = if cfg.kt > 0.0 {
        thermal_branch_energy(&modes, cfg.lambda, cfg.t0, cfg.kt)?
    } else {
        post_insertion_energy(&modes, cfg.lambda, cfg.t0)?
    };
    Ok(PartitionPoint {
        ledger,
        overlap: coherent_overlap(&modes, cfg.lambda)?,
    })
}

pub fn ledger_cells(cfg: &PartitionConfig, p: &PartitionPoint) -> Vec<String> {
    vec![
        num(cfg.kappa),
        num(cfg.omega_min),
        num(cfg.t0),
        num(cfg.lambda),
        num(p.ledger.e_static),
        num(p.ledger.e_wave),
        num(p.ledger.w_external),
        num(p.overlap),
        num(p.ledger.dissipation_ratio()),
    ]
}

pub fn run(cfg: &PartitionConfig, out: &mut OutputSet) -> Result<(), CliError> {
    let modes = modes(cfg)?;
    let mut table = Table::new(["k", "omega", "f"]);
    for (k, row) in modes.rows().enumerate() {
        table.push(vec![k.to_string(), num(row.omega), num(row.f)]);
    }
    let point = evaluate(cfg)?;
    out.write_csv("partition_modes.csv", &table)?;
    let mut ledger = Table::new(LEDGER_COLUMNS);
    ledger.push(ledger_cells(cfg, &point));
    out.write_csv("partition_ledger.csv", &ledger)?;
    Ok(())
}
