use rayon::prelude::*;
use serde::Serialize;
use thermolab::bath::{fit_ir_scaling, IrScalingFit};
use thermolab::BathSpec;

use super::partition::{self, PartitionPoint};
use super::switch::{self, SwitchSummary};
use crate::config::{PartitionConfig, RunConfig, SwitchConfig, SweepTarget};
use crate::error::CliError;
use crate::output::{num, OutputSet, Table};

pub const MAX_POINTS: usize = 1_000_000;

const PARTITION_AXES: [&str; 8] = ["kappa", "omega_min", "omega_max", "n_modes", "amplitude", "lambda", "t0", "kt"];
const SWITCH_AXES: [&str; 6] = ["omega0", "g", "kt", "gamma", "gamma_dephase", "gamma1"];

const PARTITION_RESULTS: [&str; 5] = ["e_static", "e_wave", "w_external", "overlap", "dissipation_ratio"];
const SWITCH_RESULTS: [&str; 8] = [
    "eps_analytic",
    "eps_numeric",
    "eps_ratio",
    "k_theta",
    "gamma_tun",
    "w_min",
    "cutoff",
    "stationarity",
];

fn set_partition(p: &mut PartitionConfig, axis: &str, v: f64) -> Result<(), CliError> {
    match axis {
        "kappa" => p.kappa = v,
        "omega_min" => p.omega_min = v,
        "omega_max" => p.omega_max = v,
        "n_modes" => p.n_modes = as_count(axis, v)?,
        "amplitude" => p.amplitude = v,
        "lambda" => p.lambda = v,
        "t0" => p.t0 = v,
        "kt" => p.kt = v,
        _ => unreachable!("axes are checked before the sweep starts"),
    }
    Ok(())
}

fn set_switch(s: &mut SwitchConfig, axis: &str, v: f64) {
    match axis {
        "omega0" => s.omega0 = v,
        "g" => s.g = v,
        "kt" => s.kt = v,
        "gamma" => s.gamma = v,
        "gamma_dephase" => s.gamma_dephase = v,
        "gamma1" => s.gamma1 = v,
        _ => unreachable!("axes are checked before the sweep starts"),
    }
}

fn as_count(axis: &str, v: f64) -> Result<usize, CliError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::Input(format!("{axis} must be a positive integer, got {v}")))
    }
}

enum PointResult {
    Partition(PartitionPoint),
    Switch(Box<SwitchSummary>),
}

/// Grid point `index` in row-major order over the sorted axis names.
fn coordinates(axes: &[(&String, &Vec<f64>)], mut index: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for (slot, (_, values)) in coords.iter_mut().zip(axes).rev() {
        *slot = values[index % values.len()];
        index /= values.len();
    }
    coords
}

#[derive(Debug, Serialize)]
struct FitReport {
    kappa: f64,
    #[serde(flatten)]
    fit: IrScalingFit,
}

pub fn run(cfg: &RunConfig, out: &mut OutputSet) -> Result<(), CliError> {
    let sweep = &cfg.sweep;
    let allowed: &[&str] = match sweep.target {
        SweepTarget::Partition => &PARTITION_AXES,
        SweepTarget::Switch => &SWITCH_AXES,
    };
    for name in sweep.grid.keys() {
        if !allowed.contains(&name.as_str()) {
            return Err(CliError::Input(format!(
                "unknown sweep axis `{name}` for this target (expected one of {})",
                allowed.join(", ")
            )));
        }
    }
    let axes: Vec<(&String, &Vec<f64>)> = sweep.grid.iter().collect();
    let points = if axes.is_empty() {
        0
    } else {
        axes.iter()
            .try_fold(1usize, |acc, (_, v)| acc.checked_mul(v.len()))
            .filter(|&n| n <= MAX_POINTS)
            .ok_or_else(|| CliError::Input(format!("grid exceeds {MAX_POINTS} points")))?
    };
    if sweep.fit {
        if sweep.target != SweepTarget::Partition || axes.len() != 1 || axes[0].0 != "omega_min" {
            return Err(CliError::Input("fit needs a partition sweep over omega_min alone".into()));
        }
    }

    let evaluate = |index: usize| -> Result<PointResult, CliError> {
        let coords = coordinates(&axes, index);
        match sweep.target {
            SweepTarget::Partition => {
                let mut p = cfg.partition.clone();
                for ((name, _), &v) in axes.iter().zip(&coords) {
                    set_partition(&mut p, name, v)?;
                }
                partition::evaluate(&p).map(PointResult::Partition)
            }
            SweepTarget::Switch => {
                let mut s = cfg.switch.clone();
                for ((name, _), &v) in axes.iter().zip(&coords) {
                    set_switch(&mut s, name, v);
                }
                switch::summarize(&s, cfg.units).map(|r| PointResult::Switch(Box::new(r)))
            }
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = sweep.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Computation(e.to_string()))?;
    // collect() keeps index order whatever order the workers finish in
    let results: Vec<Result<PointResult, CliError>> = pool.install(|| (0..points).into_par_iter().map(evaluate).collect());

    let results_header: &[&str] = match sweep.target {
        SweepTarget::Partition => &PARTITION_RESULTS,
        SweepTarget::Switch => &SWITCH_RESULTS,
    };
    let mut header: Vec<String> = vec!["index".into()];
    header.extend(axes.iter().map(|(n, _)| n.to_string()));
    header.extend(results_header.iter().map(|s| s.to_string()));
    header.push("error".into());
    let mut table = Table::new(header);
    for (index, result) in results.iter().enumerate() {
        let mut row = vec![index.to_string()];
        row.extend(coordinates(&axes, index).into_iter().map(num));
        match result {
            Ok(PointResult::Partition(p)) => {
                row.extend([
                    num(p.ledger.e_static),
                    num(p.ledger.e_wave),
                    num(p.ledger.w_external),
                    num(p.overlap),
                    num(p.ledger.dissipation_ratio()),
                ]);
                row.push(String::new());
            }
            Ok(PointResult::Switch(s)) => {
                row.extend([
                    num(s.eps_analytic),
                    num(s.eps_numeric),
                    num(s.eps_ratio),
                    num(s.k_theta),
                    num(s.gamma_tun),
                    s.w_min.map(num).unwrap_or_default(),
                    s.cutoff.to_string(),
                    num(s.stationarity_plus.max(s.stationarity_minus)),
                ]);
                row.push(String::new());
            }
            Err(e) => {
                row.extend(results_header.iter().map(|_| String::new()));
                row.push(e.to_string());
            }
        }
        table.push(row);
    }
    out.write_csv("sweep.csv", &table)?;

    if sweep.fit {
        let p = &cfg.partition;
        let base = BathSpec::new(p.kappa, p.omega_min, p.omega_max, p.n_modes).with_amplitude(p.amplitude);
        let fit = fit_ir_scaling(&base, axes[0].1, p.lambda)?;
        out.write_json("sweep_fit.json", &FitReport { kappa: p.kappa, fit })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_row_major() {
        let a = vec![1.0, 2.0];
        let b = vec![10.0, 20.0, 30.0];
        let (na, nb) = ("a".to_string(), "b".to_string());
        let axes = vec![(&na, &a), (&nb, &b)];
        assert_eq!(coordinates(&axes, 0), vec![1.0, 10.0]);
        assert_eq!(coordinates(&axes, 2), vec![1.0, 30.0]);
        assert_eq!(coordinates(&axes, 4), vec![2.0, 20.0]);
    }
}
