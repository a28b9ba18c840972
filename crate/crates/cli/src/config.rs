//! Run configuration. A TOML file supplies any subset of the sections below;
//! command-line flags then override individual keys. Unknown keys anywhere
//! are rejected before anything is computed.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thermolab::boxmodel::Barrier;
use thermolab::landauer::{FuzzMode, SystemHamiltonian};
use thermolab::Units;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub units: Units,
    pub output_dir: PathBuf,
    #[serde(rename = "box")]
    pub box_model: BoxConfig,
    pub partition: PartitionConfig,
    pub switch: SwitchConfig,
    pub landauer: LandauerConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            units: Units::Natural,
            output_dir: PathBuf::from("out"),
            box_model: BoxConfig::default(),
            partition: PartitionConfig::default(),
            switch: SwitchConfig::default(),
            landauer: LandauerConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }
}

/// Barrier strength: a number, or `inf` for an impenetrable wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSetting(pub Barrier);

impl FromStr for BarrierSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinite" | "infinity" => Ok(Self(Barrier::Infinite)),
            other => other
                .parse::<f64>()
                .map(|g| Self(Barrier::Finite(g)))
                .map_err(|_| format!("expected a number or `inf`, got `{s}`")),
        }
    }
}

impl fmt::Display for BarrierSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Barrier::Finite(g) => write!(f, "{g}"),
            Barrier::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for BarrierSetting {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Barrier::Finite(g) => s.serialize_f64(g),
            Barrier::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BarrierSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(Self(Barrier::Finite(g))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoxConfig {
    pub half_width: f64,
    pub g: BarrierSetting,
    pub levels: usize,
    /// When set, also report free energies and the insertion shift.
    pub kt: Option<f64>,
    /// When set, add a finite-difference reference column.
    pub fd_cells: Option<usize>,
}

impl Default for BoxConfig {
    fn default() -> Self {
        Self {
            half_width: std::f64::consts::FRAC_PI_2,
            g: BarrierSetting(Barrier::Finite(0.0)),
            levels: 8,
            kt: None,
            fd_cells: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartitionConfig {
    pub kappa: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_modes: usize,
    pub amplitude: f64,
    pub lambda: f64,
    pub t0: f64,
    pub kt: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            kappa: -1.0,
            omega_min: 1e-3,
            omega_max: 100.0,
            n_modes: 400,
            amplitude: 1.0,
            lambda: 1.0,
            t0: 1.0,
            kt: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostConfig {
    pub n_gates: f64,
    pub delta: f64,
    pub kappa_ratio: f64,
    /// Kelvin in SI mode, an energy otherwise.
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwitchConfig {
    pub omega0: f64,
    pub g: f64,
    pub kt: f64,
    pub gamma: f64,
    pub gamma_dephase: f64,
    pub gamma1: f64,
    pub fock_cutoff: Option<usize>,
    pub leak_tol: f64,
    /// Length of the relaxation time series; 0 skips it.
    pub t_max: f64,
    pub samples: usize,
    pub cost: Option<CostConfig>,
}

impl Default for SwitchConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            g: 1.0,
            kt: 1.0,
            gamma: 0.1,
            gamma_dephase: 0.05,
            gamma1: 0.0,
            fock_cutoff: None,
            leak_tol: 1e-8,
            t_max: 0.0,
            samples: 50,
            cost: None,
        }
    }
}

/// `R×S` dimensions such as `2x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims(pub usize, pub usize);

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (r, q) = s
            .split_once(['x', 'X', '*'])
            .ok_or_else(|| format!("expected dims like 2x2, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad dimension `{v}` in `{s}`"));
        Ok(Dims(parse(r)?, parse(q)?))
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

impl Serialize for Dims {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dims {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandauerConfig {
    pub dims: Dims,
    pub trials: u64,
    pub kt: f64,
    pub mode: FuzzMode,
    pub system_hamiltonian: SystemHamiltonian,
    /// Also run the relative-entropy monotonicity fuzz with the same seed.
    pub monotonicity: bool,
}

impl Default for LandauerConfig {
    fn default() -> Self {
        Self {
            dims: Dims(2, 2),
            trials: 1000,
            kt: 1.0,
            mode: FuzzMode::Product,
            system_hamiltonian: SystemHamiltonian::Degenerate,
            monotonicity: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    #[default]
    Partition,
    Switch,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub target: SweepTarget,
    /// Axis name → values. Axes are combined as a Cartesian product in name
    /// order; the last name varies fastest.
    pub grid: BTreeMap<String, Vec<f64>>,
    /// Fit −E_g against ω_min (partition sweeps over `omega_min` only).
    pub fit: bool,
    pub threads: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("seed = 1\nsede = 2\n").is_err());
        assert!(RunConfig::from_toml("[switch]\nomega = 1.0\n").is_err());
        assert!(RunConfig::from_toml("[landauer]\ndims = \"3x2\"\ntrials = 5\n").is_ok());
    }

    #[test]
    fn barrier_accepts_numbers_and_inf() {
        let c = RunConfig::from_toml("[box]\ng = \"inf\"\n").unwrap();
        assert_eq!(c.box_model.g.0, Barrier::Infinite);
        let c = RunConfig::from_toml("[box]\ng = 1e4\n").unwrap();
        assert_eq!(c.box_model.g.0, Barrier::Finite(1e4));
        assert!("wall".parse::<BarrierSetting>().is_err());
    }

    #[test]
    fn dims_and_units_parse() {
        assert_eq!("4x4".parse::<Dims>().unwrap(), Dims(4, 4));
        assert!("4".parse::<Dims>().is_err());
        let c = RunConfig::from_toml("units = \"SI\"\n").unwrap();
        assert_eq!(c.units, Units::Si);
    }
}
