use serde::Serialize;
use thermolab::boxmodel::{
    finite_difference_levels, gibbs_free_energy, insertion_free_energy_shift, spectrum, InsertionShift, Sector,
};
use thermolab::{Localization, Parity, WellSpec};

use crate::config::BoxConfig;
use crate::error::CliError;
use crate::output::{num, OutputSet, Table};

#[derive(Debug, Serialize)]
struct FreeEnergyReport {
    kt: f64,
    free_energy: f64,
    levels_used: usize,
    insertion_shift: InsertionShift,
}

pub fn run(cfg: &BoxConfig, out: &mut OutputSet) -> Result<(), CliError> {
    if cfg.levels == 0 {
        return Err(CliError::Input("levels must be at least 1".into()));
    }
    let spec = WellSpec::new(cfg.half_width, cfg.g.0);
    let table = spectrum(&spec, cfg.levels)?;
    let fd = cfg
        .fd_cells
        .map(|cells| finite_difference_levels(&spec, cells, cfg.levels))
        .transpose()?;

    let mut header = vec!["index", "energy", "parity", "localization"];
    if fd.is_some() {
        header.push("fd_energy");
    }
    let mut csv = Table::new(header);
    for (i, level) in table.levels.iter().enumerate() {
        let parity = match level.parity {
            Some(Parity::Even) => "even",
            Some(Parity::Odd) => "odd",
            None => "",
        };
        let loc = match level.localization {
            Localization::Delocalized => "delocalized",
            Localization::Left => "left",
            Localization::Right => "right",
        };
        let mut row = vec![level.index.to_string(), num(level.energy), parity.into(), loc.into()];
        if let Some(fd) = &fd {
            row.push(num(fd[i]));
        }
        csv.push(row);
    }
    out.write_csv("box_levels.csv", &csv)?;

    if let Some(kt) = cfg.kt {
        let all = gibbs_free_energy(&spec, kt, Sector::All)?;
        let report = FreeEnergyReport {
            kt,
            free_energy: all.free_energy,
            levels_used: all.levels_used,
            insertion_shift: insertion_free_energy_shift(cfg.half_width, kt)?,
        };
        out.write_json("box_free_energy.json", &report)?;
    }
    Ok(())
}
