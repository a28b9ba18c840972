use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thermolab::landauer::{FuzzMode, SystemHamiltonian};
use thermolab::Units;

use crate::config::{BarrierSetting, Dims, RunConfig, SweepTarget};

#[derive(Debug, Parser)]
#[command(name = "thermolab", version, about = "Szilard box, partition insertion, pointer switch and Landauer checks")]
pub struct Cli {
    /// TOML config; flags given on the command line override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, ignore_case = true)]
    pub units: Option<UnitsArg>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Resolve the config and write only the manifest.
    #[arg(long, global = true)]
    pub manifest_only: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UnitsArg {
    Natural,
    Si,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Natural => Units::Natural,
            UnitsArg::Si => Units::Si,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// δ-barrier box spectrum and free energies.
    Box(BoxArgs),
    /// Bath discretization and the energy ledger of a linear insertion ramp.
    Partition(PartitionArgs),
    /// Spin–oscillator switch: pointer error, stationarity and relaxation.
    Switch(SwitchArgs),
    /// Randomized checks of the Landauer inequality.
    Landauer(LandauerArgs),
    /// Parameter grid over partition or switch runs.
    Sweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Box(_) => "box",
            Command::Partition(_) => "partition",
            Command::Switch(_) => "switch",
            Command::Landauer(_) => "landauer",
            Command::Sweep(_) => "sweep",
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoxArgs {
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Barrier strength, or `inf`.
    #[arg(long)]
    pub g: Option<BarrierSetting>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long = "kT", alias = "kt")]
    pub kt: Option<f64>,
    #[arg(long)]
    pub fd_cells: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PartitionArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub n_modes: Option<usize>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long = "kT", alias = "kt")]
    pub kt: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SwitchArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long = "kT", alias = "kt")]
    pub kt: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub gamma_dephase: Option<f64>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub fock_cutoff: Option<usize>,
    #[arg(long)]
    pub leak_tol: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Product,
    Correlated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SystemHamiltonianArg {
    Degenerate,
    Random,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LandauerArgs {
    /// Reservoir × system dimensions, e.g. 2x2.
    #[arg(long)]
    pub dims: Option<Dims>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long = "kT", alias = "kt", alias = "temperature")]
    pub kt: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub system_hamiltonian: Option<SystemHamiltonianArg>,
    #[arg(long)]
    pub monotonicity: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// Grid axis as name=v1,v2,... (repeatable). Replaces the config grid.
    #[arg(long = "axis", value_parser = parse_axis)]
    pub axes: Vec<(String, Vec<f64>)>,
    #[arg(long)]
    pub fit: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetArg {
    Partition,
    Switch,
}

fn parse_axis(s: &str) -> Result<(String, Vec<f64>), String> {
    let (name, values) = s.split_once('=').ok_or("expected name=v1,v2,...")?;
    let values = if values.trim().is_empty() {
        Vec::new()
    } else {
        values
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad value `{v}`")))
            .collect::<Result<_, _>>()?
    };
    Ok((name.trim().to_string(), values))
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Cli {
    /// Config file (or defaults) with every given flag applied on top.
    pub fn resolve(&self) -> Result<RunConfig, crate::error::CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.units, self.units.map(Units::from));
        set(&mut cfg.output_dir, self.output_dir.clone());
        match &self.command {
            Command::Box(a) => {
                let b = &mut cfg.box_model;
                set(&mut b.half_width, a.half_width);
                set(&mut b.g, a.g);
                set(&mut b.levels, a.levels);
                if a.kt.is_some() {
                    b.kt = a.kt;
                }
                if a.fd_cells.is_some() {
                    b.fd_cells = a.fd_cells;
                }
            }
            Command::Partition(a) => {
                let p = &mut cfg.partition;
                set(&mut p.kappa, a.kappa);
                set(&mut p.omega_min, a.omega_min);
                set(&mut p.omega_max, a.omega_max);
                set(&mut p.n_modes, a.n_modes);
                set(&mut p.amplitude, a.amplitude);
                set(&mut p.lambda, a.lambda);
                set(&mut p.t0, a.t0);
                set(&mut p.kt, a.kt);
            }
            Command::Switch(a) => {
                let s = &mut cfg.switch;
                set(&mut s.omega0, a.omega0);
                set(&mut s.g, a.g);
                set(&mut s.kt, a.kt);
                set(&mut s.gamma, a.gamma);
                set(&mut s.gamma_dephase, a.gamma_dephase);
                set(&mut s.gamma1, a.gamma1);
                if a.fock_cutoff.is_some() {
                    s.fock_cutoff = a.fock_cutoff;
                }
                set(&mut s.leak_tol, a.leak_tol);
                set(&mut s.t_max, a.t_max);
                set(&mut s.samples, a.samples);
            }
            Command::Landauer(a) => {
                let l = &mut cfg.landauer;
                set(&mut l.dims, a.dims);
                set(&mut l.trials, a.trials);
                set(&mut l.kt, a.kt);
                set(
                    &mut l.mode,
                    a.mode.map(|m| match m {
                        ModeArg::Product => FuzzMode::Product,
                        ModeArg::Correlated => FuzzMode::Correlated,
                    }),
                );
                set(
                    &mut l.system_hamiltonian,
                    a.system_hamiltonian.map(|h| match h {
                        SystemHamiltonianArg::Degenerate => SystemHamiltonian::Degenerate,
                        SystemHamiltonianArg::Random => SystemHamiltonian::Random,
                    }),
                );
                l.monotonicity |= a.monotonicity;
            }
            Command::Sweep(a) => {
                let s = &mut cfg.sweep;
                set(
                    &mut s.target,
                    a.target.map(|t| match t {
                        TargetArg::Partition => SweepTarget::Partition,
                        TargetArg::Switch => SweepTarget::Switch,
                    }),
                );
                if !a.axes.is_empty() {
                    s.grid = a.axes.iter().cloned().collect();
                }
                s.fit |= a.fit;
                if a.threads.is_some() {
                    s.threads = a.threads;
                }
            }
        }
        Ok(cfg)
    }
}
