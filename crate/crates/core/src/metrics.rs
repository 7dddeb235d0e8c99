//! Cost accounting and aggregation of trial batches into comparison tables.
//!
//! Offset arithmetic (global ↔ local index) is treated as free and never
//! appears in a ledger.

use std::collections::BTreeSet;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::config::Strategy;
use crate::distributed::RunReport;
use crate::error::{Error, Result};

/// Resource counts for one sub-system, one merge stage, or a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostLedger {
    pub qubits_measured: u64,
    /// Phase-oracle plus boolean-oracle applications.
    pub quantum_oracle_calls: u64,
    pub classical_oracle_calls: u64,
    pub grover_iterations: u64,
    /// Tree-level decisions spent locating set probe bits.
    pub decision_steps: u64,
}

impl CostLedger {
    pub const ZERO: CostLedger = CostLedger {
        qubits_measured: 0,
        quantum_oracle_calls: 0,
        classical_oracle_calls: 0,
        grover_iterations: 0,
        decision_steps: 0,
    };
}

impl Add for CostLedger {
    type Output = CostLedger;

    fn add(self, rhs: CostLedger) -> CostLedger {
        CostLedger {
            qubits_measured: self.qubits_measured + rhs.qubits_measured,
            quantum_oracle_calls: self.quantum_oracle_calls + rhs.quantum_oracle_calls,
            classical_oracle_calls: self.classical_oracle_calls + rhs.classical_oracle_calls,
            grover_iterations: self.grover_iterations + rhs.grover_iterations,
            decision_steps: self.decision_steps + rhs.decision_steps,
        }
    }
}

impl AddAssign for CostLedger {
    fn add_assign(&mut self, rhs: CostLedger) {
        *self = *self + rhs;
    }
}

impl Sum for CostLedger {
    fn sum<I: Iterator<Item = CostLedger>>(iter: I) -> CostLedger {
        iter.fold(CostLedger::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a CostLedger> for CostLedger {
    fn sum<I: Iterator<Item = &'a CostLedger>>(iter: I) -> CostLedger {
        iter.copied().sum()
    }
}

pub fn ledger_add(a: CostLedger, b: CostLedger) -> CostLedger {
    a + b
}

/// Fieldwise means of a set of ledgers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanLedger {
    pub qubits_measured: f64,
    pub quantum_oracle_calls: f64,
    pub classical_oracle_calls: f64,
    pub grover_iterations: f64,
    pub decision_steps: f64,
}

impl MeanLedger {
    fn from_total(total: CostLedger, count: usize) -> Self {
        let n = count as f64;
        MeanLedger {
            qubits_measured: total.qubits_measured as f64 / n,
            quantum_oracle_calls: total.quantum_oracle_calls as f64 / n,
            classical_oracle_calls: total.classical_oracle_calls as f64 / n,
            grover_iterations: total.grover_iterations as f64 / n,
            decision_steps: total.decision_steps as f64 / n,
        }
    }
}

/// Aggregate of a batch of runs sharing one strategy and configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub strategy: Strategy,
    pub db_size: usize,
    pub num_subsystems: usize,
    pub global_marked: BTreeSet<usize>,
    pub trials: usize,
    pub successes: usize,
    /// Runs that reported nothing although a solution existed.
    pub misses: usize,
    pub empirical_success_rate: f64,
    pub mean_ledger: MeanLedger,
    /// Mean critical-path Grover iterations (the parallel run-time).
    pub mean_iteration_depth: f64,
}

pub fn summarize(reports: &[RunReport]) -> Result<TrialSummary> {
    let first = reports
        .first()
        .ok_or_else(|| Error::Usage("cannot summarize an empty list of reports".into()))?;
    for r in reports {
        if r.strategy != first.strategy {
            return Err(Error::Usage(format!(
                "mixed strategies in one summary: {} and {}",
                first.strategy, r.strategy
            )));
        }
        if (r.db_size, r.num_subsystems) != (first.db_size, first.num_subsystems)
            || r.global_marked != first.global_marked
        {
            return Err(Error::Usage(
                "reports come from different configurations".into(),
            ));
        }
    }
    let trials = reports.len();
    let successes = reports.iter().filter(|r| r.correct).count();
    let misses = reports.iter().filter(|r| r.missed).count();
    let total: CostLedger = reports.iter().map(|r| &r.total_ledger).sum();
    let depth: usize = reports.iter().map(|r| r.iteration_depth).sum();
    Ok(TrialSummary {
        strategy: first.strategy,
        db_size: first.db_size,
        num_subsystems: first.num_subsystems,
        global_marked: first.global_marked.clone(),
        trials,
        successes,
        misses,
        empirical_success_rate: successes as f64 / trials as f64,
        mean_ledger: MeanLedger::from_total(total, trials),
        mean_iteration_depth: depth as f64 / trials as f64,
    })
}

/// One strategy's line in a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub strategy: Strategy,
    pub num_subsystems: usize,
    pub success_rate: f64,
    pub mean_qubits_measured: f64,
    pub mean_quantum_oracle_calls: f64,
    pub mean_classical_oracle_calls: f64,
    /// Critical-path Grover iterations.
    pub grover_iterations: f64,
    pub decision_steps: f64,
}

impl From<&TrialSummary> for ComparisonRow {
    fn from(s: &TrialSummary) -> Self {
        ComparisonRow {
            strategy: s.strategy,
            num_subsystems: s.num_subsystems,
            success_rate: s.empirical_success_rate,
            mean_qubits_measured: s.mean_ledger.qubits_measured,
            mean_quantum_oracle_calls: s.mean_ledger.quantum_oracle_calls,
            mean_classical_oracle_calls: s.mean_ledger.classical_oracle_calls,
            grover_iterations: s.mean_iteration_depth,
            decision_steps: s.mean_ledger.decision_steps,
        }
    }
}

pub type ComparisonTable = Vec<ComparisonRow>;

/// Lines up summaries of the same search problem side by side.
///
/// All summaries must share the database size and marked set; distributed
/// strategies must also share the sub-system count. At most one sequential
/// baseline may be included.
pub fn compare_strategies(summaries: &[TrialSummary]) -> Result<ComparisonTable> {
    if summaries.len() < 2 {
        return Err(Error::Usage(
            "comparison needs at least two summaries".into(),
        ));
    }
    let first = &summaries[0];
    let mut partition: Option<usize> = None;
    let mut sequential = 0;
    for s in summaries {
        if s.db_size != first.db_size || s.global_marked != first.global_marked {
            return Err(Error::Usage(format!(
                "incompatible summaries: db-size {} vs {} or differing marked sets",
                first.db_size, s.db_size
            )));
        }
        if s.strategy == Strategy::Sequential {
            sequential += 1;
            continue;
        }
        match partition {
            Some(m) if m != s.num_subsystems => {
                return Err(Error::Usage(format!(
                    "incompatible summaries: {m} vs {} sub-systems",
                    s.num_subsystems
                )))
            }
            _ => partition = Some(s.num_subsystems),
        }
    }
    if sequential > 1 {
        return Err(Error::Usage(
            "at most one sequential baseline per comparison".into(),
        ));
    }
    Ok(summaries.iter().map(ComparisonRow::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger(q: u64, o: u64, c: u64, g: u64, d: u64) -> CostLedger {
        CostLedger {
            qubits_measured: q,
            quantum_oracle_calls: o,
            classical_oracle_calls: c,
            grover_iterations: g,
            decision_steps: d,
        }
    }

    fn report(strategy: Strategy, correct: bool, qubits: u64) -> RunReport {
        RunReport {
            strategy,
            db_size: 16,
            num_subsystems: 4,
            global_marked: BTreeSet::from([10]),
            winner_subsystem: Some(2),
            winners: vec![2],
            recovered_global_index: Some(10),
            recovered_global_indices: vec![10],
            multiple: false,
            missed: false,
            correct,
            iteration_depth: 1,
            total_ledger: ledger(qubits, 0, 0, 0, 0),
            merge_ledger: CostLedger::ZERO,
            per_subsystem: vec![],
        }
    }

    #[test]
    fn add_identity_and_sum() {
        let a = ledger(1, 2, 3, 4, 5);
        assert_eq!(ledger_add(a, CostLedger::ZERO), a);
        assert_eq!(
            ledger(4, 0, 0, 0, 0) + ledger(2, 0, 0, 0, 0),
            ledger(6, 0, 0, 0, 0)
        );
        let b = ledger(9, 8, 7, 6, 5);
        assert_eq!(a + b, b + a);
        assert_eq!([a, b].iter().sum::<CostLedger>(), a + b);
    }

    #[test]
    fn summarize_all_correct() {
        let reports: Vec<_> = (0..10).map(|_| report(Strategy::Probe, true, 6)).collect();
        let s = summarize(&reports).unwrap();
        assert_eq!(s.trials, 10);
        assert_eq!(s.successes, 10);
        assert_eq!(s.empirical_success_rate, 1.0);
        assert_eq!(s.mean_ledger.qubits_measured, 6.0);
    }

    #[test]
    fn summarize_rejects_bad_input() {
        assert!(matches!(summarize(&[]), Err(Error::Usage(_))));
        let mixed = [
            report(Strategy::Probe, true, 6),
            report(Strategy::SemiclassicalVerify, true, 8),
        ];
        assert!(matches!(summarize(&mixed), Err(Error::Usage(_))));
        let mut other = report(Strategy::Probe, true, 6);
        other.db_size = 32;
        assert!(matches!(
            summarize(&[report(Strategy::Probe, true, 6), other]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn compare_rejects_mismatched_sizes() {
        let a = summarize(&[report(Strategy::Probe, true, 6)]).unwrap();
        let mut r = report(Strategy::SemiclassicalVerify, true, 8);
        r.db_size = 32;
        let b = summarize(&[r]).unwrap();
        assert!(matches!(
            compare_strategies(&[a.clone(), b]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(compare_strategies(&[a]), Err(Error::Usage(_))));
    }
}
