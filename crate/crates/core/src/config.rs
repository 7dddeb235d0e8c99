//! Experiment configuration and seed derivation.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::MAX_QUBITS;

/// Merging-and-decision strategy, plus the undistributed baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Single-qubit probe per sub-system, O(log M) winner search, then
    /// register readout on the winner only.
    Probe,
    /// Full register readout everywhere, classical predicate check on each
    /// candidate.
    SemiclassicalVerify,
    /// Full register readout repeated for several rounds; a candidate is
    /// accepted when every round agrees.
    SemiclassicalRepeat,
    /// One undistributed Grover search over the whole database.
    Sequential,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Probe,
        Strategy::SemiclassicalVerify,
        Strategy::SemiclassicalRepeat,
        Strategy::Sequential,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Probe => "probe",
            Strategy::SemiclassicalVerify => "semiclassical-verify",
            Strategy::SemiclassicalRepeat => "semiclassical-repeat",
            Strategy::Sequential => "sequential",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_REPEAT_ROUNDS: usize = 3;

/// Everything needed to reproduce a batch of trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Database size `N`.
    pub db_size: usize,
    /// Number of sub-systems `M`; ignored by [`Strategy::Sequential`].
    pub num_subsystems: usize,
    /// Solution indices in global coordinates.
    pub global_marked: BTreeSet<usize>,
    pub strategy: Strategy,
    /// Rounds per sub-system for [`Strategy::SemiclassicalRepeat`].
    pub repeat_rounds: usize,
    pub seed: u64,
    pub trials: usize,
}

impl ExperimentConfig {
    /// Config with a single marked item, default rounds and one trial.
    pub fn new(
        db_size: usize,
        num_subsystems: usize,
        marked: impl IntoIterator<Item = usize>,
        strategy: Strategy,
        seed: u64,
    ) -> Self {
        Self {
            db_size,
            num_subsystems,
            global_marked: marked.into_iter().collect(),
            strategy,
            repeat_rounds: DEFAULT_REPEAT_ROUNDS,
            seed,
            trials: 1,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_repeat_rounds(mut self, rounds: usize) -> Self {
        self.repeat_rounds = rounds;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Sub-system size `ν = N / M`.
    pub fn subsystem_size(&self) -> usize {
        self.db_size / self.num_subsystems.max(1)
    }

    /// Checks every invariant, reporting the first violation with a message
    /// naming the offending parameter.
    pub fn validate(&self) -> Result<()> {
        let n = self.db_size;
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "db-size must be a power of two >= 2, got {n}"
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if let Some(&max) = self.global_marked.iter().next_back() {
            if max >= n {
                return Err(Error::Config(format!(
                    "marked index {max} must be less than db-size {n}"
                )));
            }
        }
        if self.strategy == Strategy::Sequential {
            if n.trailing_zeros() as usize > MAX_QUBITS {
                return Err(Error::Config(format!(
                    "db-size {n} exceeds the 2^{MAX_QUBITS} simulation limit"
                )));
            }
            return Ok(());
        }
        check_partition(n, self.num_subsystems)?;
        if self.strategy == Strategy::SemiclassicalRepeat {
            let r = self.repeat_rounds;
            // rounds < √N, checked in integers
            if r < 2 || r.saturating_mul(r) >= n {
                return Err(Error::Config(format!(
                    "repeat-rounds must satisfy 2 <= rounds < sqrt(db-size) = {:.3}, got {r}",
                    (n as f64).sqrt()
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_partition(db_size: usize, num_subsystems: usize) -> Result<()> {
    let (n, m) = (db_size, num_subsystems);
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Config(format!(
            "db-size must be a power of two >= 2, got {n}"
        )));
    }
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::Config(format!(
            "subsystems must be a power of two, got {m}"
        )));
    }
    if n % m != 0 || n / m < 2 {
        return Err(Error::Config(format!(
            "subsystems {m} must divide db-size {n} into slices of at least 2 items"
        )));
    }
    let k = (n / m).trailing_zeros() as usize;
    if k > MAX_QUBITS {
        return Err(Error::Config(format!(
            "sub-system size {} exceeds the 2^{MAX_QUBITS} simulation limit",
            n / m
        )));
    }
    Ok(())
}

/// Deterministic child seed for stream `index` of `parent`, via two rounds
/// of the SplitMix64 finalizer. Used for per-trial and per-sub-system
/// streams so that results do not depend on execution order.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(cfg: &ExperimentConfig) -> String {
        cfg.validate().unwrap_err().to_string()
    }

    #[test]
    fn accepts_valid_configs() {
        ExperimentConfig::new(16, 4, [10], Strategy::Probe, 1)
            .validate()
            .unwrap();
        ExperimentConfig::new(8, 1, [], Strategy::SemiclassicalVerify, 1)
            .validate()
            .unwrap();
        ExperimentConfig::new(1024, 4, [777], Strategy::SemiclassicalRepeat, 1)
            .validate()
            .unwrap();
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(msg(&ExperimentConfig::new(12, 4, [1], Strategy::Probe, 0))
            .contains("db-size must be a power of two"));
        assert!(msg(&ExperimentConfig::new(8, 3, [1], Strategy::Probe, 0)).contains("subsystems"));
        assert!(msg(&ExperimentConfig::new(8, 8, [1], Strategy::Probe, 0)).contains("at least 2"));
        assert!(
            msg(&ExperimentConfig::new(8, 2, [8], Strategy::Probe, 0)).contains("marked index 8")
        );
        assert!(
            msg(&ExperimentConfig::new(8, 2, [1], Strategy::Probe, 0).with_trials(0))
                .contains("trials")
        );
    }

    #[test]
    fn repeat_round_bounds() {
        let base = ExperimentConfig::new(16, 4, [10], Strategy::SemiclassicalRepeat, 0);
        base.clone().with_repeat_rounds(2).validate().unwrap();
        base.clone().with_repeat_rounds(3).validate().unwrap();
        assert!(base.clone().with_repeat_rounds(4).validate().is_err());
        assert!(base.clone().with_repeat_rounds(1).validate().is_err());
    }

    #[test]
    fn sequential_ignores_subsystems() {
        ExperimentConfig::new(16, 3, [10], Strategy::Sequential, 0)
            .validate()
            .unwrap();
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..64).map(|i| derive_seed(7, i)).collect();
        let unique: BTreeSet<_> = a.iter().collect();
        assert_eq!(unique.len(), a.len());
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
        assert_ne!(derive_seed(7, 3), derive_seed(8, 3));
    }
}
