//! Seeded batches of independent trials.

use rayon::prelude::*;

use crate::config::{derive_seed, ExperimentConfig, Strategy};
use crate::distributed::{
    distribute, probe_seeded, repeat_seeded, sequential_seeded, verify_seeded, RunReport,
    SubsystemDescriptor,
};
use crate::error::Result;
use crate::metrics::{summarize, TrialSummary};

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    derive_seed(master, index as u64)
}

fn run_with(
    config: &ExperimentConfig,
    subs: &[SubsystemDescriptor],
    seed: u64,
) -> Result<RunReport> {
    match config.strategy {
        Strategy::Probe => probe_seeded(config, subs, seed),
        Strategy::SemiclassicalVerify => verify_seeded(config, subs, seed),
        Strategy::SemiclassicalRepeat => repeat_seeded(config, subs, seed),
        Strategy::Sequential => sequential_seeded(config, seed),
    }
}

fn prepare(config: &ExperimentConfig) -> Result<Vec<SubsystemDescriptor>> {
    config.validate()?;
    if config.strategy == Strategy::Sequential {
        Ok(vec![])
    } else {
        distribute(config)
    }
}

/// Runs trial `index` of the batch described by `config`.
pub fn run_trial(config: &ExperimentConfig, index: usize) -> Result<RunReport> {
    let subs = prepare(config)?;
    run_with(config, &subs, trial_seed(config.seed, index))
}

/// Runs all `config.trials` trials; the returned reports are ordered by
/// trial index and independent of thread scheduling.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<RunReport>> {
    let subs = prepare(config)?;
    (0..config.trials)
        .into_par_iter()
        .map(|i| run_with(config, &subs, trial_seed(config.seed, i)))
        .collect()
}

/// [`run_trials`] followed by [`summarize`].
pub fn run_batch(config: &ExperimentConfig) -> Result<TrialSummary> {
    summarize(&run_trials(config)?)
}
