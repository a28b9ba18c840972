use serde::Serialize;
use thermolab::landauer::{monotonicity_fuzz, run_campaign, FuzzConfig, FuzzSummary, MonotonicitySummary};

use crate::config::LandauerConfig;
use crate::error::CliError;
use crate::output::OutputSet;

#[derive(Debug, Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    campaign: &'a FuzzSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    monotonicity: Option<MonotonicitySummary>,
}

pub fn fuzz_config(cfg: &LandauerConfig, seed: u64) -> FuzzConfig {
    FuzzConfig::new(cfg.mode, (cfg.dims.0, cfg.dims.1), cfg.kt, cfg.trials, seed)
        .with_system_hamiltonian(cfg.system_hamiltonian)
}

pub fn run(cfg: &LandauerConfig, seed: u64, out: &mut OutputSet) -> Result<(), CliError> {
    let campaign = run_campaign(&fuzz_config(cfg, seed))?;
    let monotonicity = if cfg.monotonicity {
        Some(monotonicity_fuzz((cfg.dims.0, cfg.dims.1), cfg.trials, seed)?)
    } else {
        None
    };
    out.write_jsonl("landauer_trials.jsonl", &campaign.records)?;
    out.write_json(
        "landauer_summary.json",
        &Summary {
            campaign: &campaign,
            monotonicity,
        },
    )?;
    Ok(())
}
