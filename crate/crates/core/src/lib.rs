//! Dense state-vector simulation of distributed Grover search.
//!
//! A database of `N` items is split across `M` independent quantum
//! sub-systems of `ν = N/M` items each. Every sub-system runs Grover search
//! on its slice; the interesting part is how the results are merged. The
//! crate implements three merging strategies and an undistributed baseline,
//! with exact accounting of measured qubits, oracle calls, Grover iterations
//! and decision steps:
//!
//! * [`Strategy::Probe`]: each sub-system is composed with one ancilla qubit
//!   in `|0⟩`, the boolean oracle `|x, q⟩ → |x, f(x) ⊕ q⟩` is applied once,
//!   and only the ancilla is measured. One qubit per sub-system, plus the
//!   winner's register at the end.
//! * [`Strategy::SemiclassicalVerify`]: full register readout everywhere,
//!   then a classical predicate check per candidate.
//! * [`Strategy::SemiclassicalRepeat`]: full readout repeated for several
//!   rounds, accepting candidates that repeat.
//! * [`Strategy::Sequential`]: one Grover search over all `N` items.
//!
//! ```
//! use probe_grover::{run_distributed_probe, ExperimentConfig, Strategy};
//!
//! let config = ExperimentConfig::new(16, 4, [10], Strategy::Probe, 7);
//! let report = run_distributed_probe(&config)?;
//! assert_eq!(report.recovered_global_index, Some(10));
//! // one probe qubit in each of 4 sub-systems, then 2 register qubits
//! assert_eq!(report.total_ledger.qubits_measured, 6);
//! # Ok::<(), probe_grover::Error>(())
//! ```
//!
//! The guide under `book/` walks through the mechanics chapter by chapter;
//! its code listings are compiled and run as doc-tests of this crate.

pub mod config;
pub mod distributed;
pub mod error;
pub mod experiment;
pub mod grover;
pub mod metrics;
pub mod probe;
pub mod reference;
pub mod state;

pub use config::{derive_seed, ExperimentConfig, Strategy, DEFAULT_REPEAT_ROUNDS};
pub use distributed::{
    distribute, find_winner, localize_marked, partition, recover_global, run_distributed_probe,
    run_semiclassical_repeat, run_semiclassical_verify, run_sequential, run_subsystem_probe,
    ProbedSubsystem, RunReport, SubsystemDescriptor, SubsystemOutcome, Winner, WinnerSearch,
};
pub use error::{Error, Result};
pub use experiment::{run_batch, run_trial, run_trials, trial_seed};
pub use grover::{iteration_count, run_grover, success_probability, GroverRunStats};
pub use metrics::{
    compare_strategies, ledger_add, summarize, ComparisonRow, ComparisonTable, CostLedger,
    MeanLedger, TrialSummary,
};
pub use probe::{compose_with_probe, ComposedState, ProbeOutcome};
pub use reference::{dense_reference_step, DenseMatrix};
pub use state::{
    measure_register, MarkedSet, MeasurementRecord, StateVector, ACCUMULATED_TOL, ALGEBRAIC_TOL,
    MAX_QUBITS,
};

// mdbook cannot run listings against a crate, so each chapter is pulled in
// here and its fenced blocks become doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/state-vectors.md")]
    mod state_vectors {}
    #[doc = include_str!("../../../book/src/grover.md")]
    mod grover {}
    #[doc = include_str!("../../../book/src/probes.md")]
    mod probes {}
    #[doc = include_str!("../../../book/src/distributed.md")]
    mod distributed {}
    #[doc = include_str!("../../../book/src/costs.md")]
    mod costs {}
}
