//! Config-driven runner behind the `thermolab` binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use serde_json::json;

use args::{Cli, Command};
use config::{RunConfig, SweepTarget};
use error::CliError;
use output::{OutputSet, RunManifest};

/// The part of the resolved config a subcommand actually reads.
fn config_echo(cfg: &RunConfig, command: &Command) -> serde_json::Value {
    let params = match command {
        Command::Box(_) => json!({ "box": cfg.box_model }),
        Command::Partition(_) => json!({ "partition": cfg.partition }),
        Command::Switch(_) => json!({ "switch": cfg.switch }),
        Command::Landauer(_) => json!({ "landauer": cfg.landauer }),
        Command::Sweep(_) => match cfg.sweep.target {
            SweepTarget::Partition => json!({ "sweep": cfg.sweep, "partition": cfg.partition }),
            SweepTarget::Switch => json!({ "sweep": cfg.sweep, "switch": cfg.switch }),
        },
    };
    json!({
        "seed": cfg.seed,
        "units": cfg.units,
        "output_dir": cfg.output_dir,
        "params": params,
    })
}

pub fn run(cli: &Cli) -> Result<RunManifest, CliError> {
    let cfg = cli.resolve()?;
    let mut out = OutputSet::create(&cfg.output_dir)?;
    let name = cli.command.name();
    let echo = config_echo(&cfg, &cli.command);
    if cli.manifest_only {
        return out.finish(name, echo);
    }
    match &cli.command {
        Command::Box(_) => commands::box_model::run(&cfg.box_model, &mut out)?,
        Command::Partition(_) => commands::partition::run(&cfg.partition, &mut out)?,
        Command::Switch(_) => commands::switch::run(&cfg.switch, cfg.units, &mut out)?,
        Command::Landauer(_) => commands::landauer::run(&cfg.landauer, cfg.seed, &mut out)?,
        Command::Sweep(_) => commands::sweep::run(&cfg, &mut out)?,
    }
    out.finish(name, echo)
}
