//! Distributed Grover search: partitioning, per-sub-system execution and
//! the merging-and-decision strategies.
//!
//! Every strategy follows the same three stages. The database of `N` items
//! is split into `M` equal slices of `ν = N/M` items (distribution), each
//! slice runs Grover search independently (operation), and the sub-system
//! results are combined into a final answer (merging and decision). The
//! strategies differ only in what is measured at the end of stage two and
//! how stage three decides.
//!
//! Sub-system `i` of a run seeded with `s` draws all of its randomness from
//! a ChaCha stream seeded with [`derive_seed`]`(s, i)`, so a report is
//! identical whether sub-systems execute serially or in parallel.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{check_partition, derive_seed, ExperimentConfig, Strategy};
use crate::error::{Error, Result};
use crate::grover::run_grover;
use crate::metrics::CostLedger;
use crate::probe::ComposedState;
use crate::state::{MarkedSet, MeasurementRecord, StateVector};

/// One slice of the global search space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemDescriptor {
    pub id: usize,
    /// Global index of local item 0.
    pub offset: usize,
    /// Slice size `ν`, a power of two.
    pub size: usize,
    pub local_marked: MarkedSet,
}

impl SubsystemDescriptor {
    pub fn num_qubits(&self) -> usize {
        self.size.trailing_zeros() as usize
    }

    pub fn to_global(&self, local: usize) -> usize {
        self.offset + local
    }

    pub fn contains_global(&self, global: usize) -> bool {
        (self.offset..self.offset + self.size).contains(&global)
    }
}

/// Splits `db_size` items into `num_subsystems` equal slices with empty
/// marked sets.
pub fn partition(db_size: usize, num_subsystems: usize) -> Result<Vec<SubsystemDescriptor>> {
    check_partition(db_size, num_subsystems)?;
    let size = db_size / num_subsystems;
    Ok((0..num_subsystems)
        .map(|id| SubsystemDescriptor {
            id,
            offset: id * size,
            size,
            local_marked: MarkedSet::empty(),
        })
        .collect())
}

/// Global solutions that fall inside `sub`, shifted to local coordinates.
pub fn localize_marked(global_marked: &BTreeSet<usize>, sub: &SubsystemDescriptor) -> MarkedSet {
    global_marked
        .range(sub.offset..sub.offset + sub.size)
        .map(|g| g - sub.offset)
        .collect()
}

/// Partitions the database and hands each slice its local solutions.
pub fn distribute(config: &ExperimentConfig) -> Result<Vec<SubsystemDescriptor>> {
    let mut subs = partition(config.db_size, config.num_subsystems)?;
    for sub in &mut subs {
        sub.local_marked = localize_marked(&config.global_marked, sub);
    }
    Ok(subs)
}

/// What one sub-system reported to the merging stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsystemOutcome {
    pub id: usize,
    /// Probe readout (probe strategy only).
    pub probe_bit: Option<u8>,
    /// Analytic probability that the probe reads 1 (probe strategy only).
    pub probe_one_probability: Option<f64>,
    /// Measured local index (semi-classical strategies; for the repeat
    /// strategy only when every round agreed).
    pub reported_local_index: Option<usize>,
    pub ledger: CostLedger,
}

/// A probed sub-system together with its post-measurement register.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbedSubsystem {
    pub outcome: SubsystemOutcome,
    /// Register conditioned on the probe readout.
    pub register: StateVector,
}

/// Stage two of the probe strategy on one slice: Grover search, compose a
/// `|0⟩` probe, apply the boolean oracle, measure the probe alone.
pub fn run_subsystem_probe<R: Rng + ?Sized>(
    sub: &SubsystemDescriptor,
    rng: &mut R,
) -> Result<ProbedSubsystem> {
    let (state, stats) = run_grover(sub.num_qubits(), &sub.local_marked)?;
    let mut composed = ComposedState::compose(&state);
    composed.apply_boolean_oracle(&sub.local_marked)?;
    let p1 = composed.probe_one_probability();
    let probe = composed.measure_probe(rng)?;
    let ledger = CostLedger {
        qubits_measured: probe.record().qubits_measured as u64,
        quantum_oracle_calls: stats.oracle_calls as u64 + 1,
        grover_iterations: stats.iterations as u64,
        ..CostLedger::ZERO
    };
    Ok(ProbedSubsystem {
        outcome: SubsystemOutcome {
            id: sub.id,
            probe_bit: Some(probe.bit),
            probe_one_probability: Some(p1),
            reported_local_index: None,
            ledger,
        },
        register: probe.register,
    })
}

/// Set bits located by [`find_winner`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    None,
    Single(usize),
    /// More than one sub-system reported a solution.
    Multiple(Vec<usize>),
}

impl Winner {
    pub fn ids(&self) -> Vec<usize> {
        match self {
            Winner::None => vec![],
            Winner::Single(id) => vec![*id],
            Winner::Multiple(ids) => ids.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerSearch {
    pub winner: Winner,
    /// Internal OR-tree nodes inspected while descending.
    pub decision_steps: usize,
}

/// Locates the set bits among `M` probe readouts with a balanced OR tree.
///
/// The bits are padded to the next power of two and reduced pairwise into
/// `⌈log₂ M⌉` levels. The search then descends from the root into every
/// child whose OR is set; each internal node visited costs one decision.
/// With exactly one bit set this is `⌈log₂ M⌉` decisions; an all-zero root
/// costs none.
pub fn find_winner(bits: &[bool]) -> WinnerSearch {
    if bits.is_empty() {
        return WinnerSearch {
            winner: Winner::None,
            decision_steps: 0,
        };
    }
    let width = bits.len().next_power_of_two();
    let mut levels: Vec<Vec<bool>> = vec![(0..width)
        .map(|i| bits.get(i).copied().unwrap_or(false))
        .collect()];
    while levels.last().map_or(0, Vec::len) > 1 {
        let below = levels.last().unwrap();
        let above = below.chunks(2).map(|pair| pair[0] | pair[1]).collect();
        levels.push(above);
    }

    let top = levels.len() - 1;
    let mut found = Vec::new();
    let mut decisions = 0;
    if levels[top][0] {
        descend(&levels, top, 0, &mut found, &mut decisions);
    }
    let winner = match found.len() {
        0 => Winner::None,
        1 => Winner::Single(found[0]),
        _ => Winner::Multiple(found),
    };
    WinnerSearch {
        winner,
        decision_steps: decisions,
    }
}

fn descend(
    levels: &[Vec<bool>],
    level: usize,
    node: usize,
    found: &mut Vec<usize>,
    decisions: &mut usize,
) {
    if level == 0 {
        found.push(node);
        return;
    }
    *decisions += 1;
    for child in [2 * node, 2 * node + 1] {
        if levels[level - 1][child] {
            descend(levels, level - 1, child, found, decisions);
        }
    }
}

/// Reads out the winner's register and maps the local index back to the
/// global database. Only valid on a sub-system whose probe read 1.
pub fn recover_global<R: Rng + ?Sized>(
    winner: &SubsystemDescriptor,
    probed: &ProbedSubsystem,
    rng: &mut R,
) -> Result<(usize, MeasurementRecord)> {
    if probed.outcome.probe_bit != Some(1) {
        return Err(Error::Protocol(format!(
            "sub-system {} did not read probe 1; nothing to recover",
            winner.id
        )));
    }
    if probed.outcome.id != winner.id {
        return Err(Error::Protocol(format!(
            "probe result of sub-system {} paired with descriptor {}",
            probed.outcome.id, winner.id
        )));
    }
    let record = probed.register.measure(rng);
    Ok((winner.to_global(record.outcome), record))
}

/// Result of one distributed (or sequential) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub strategy: Strategy,
    pub db_size: usize,
    /// 1 for the sequential baseline.
    pub num_subsystems: usize,
    pub global_marked: BTreeSet<usize>,
    /// The winning sub-system when exactly one was selected.
    pub winner_subsystem: Option<usize>,
    pub winners: Vec<usize>,
    /// The recovered index when exactly one was reported.
    pub recovered_global_index: Option<usize>,
    pub recovered_global_indices: Vec<usize>,
    /// More than one candidate survived the decision stage.
    pub multiple: bool,
    /// Nothing was reported although a solution exists.
    pub missed: bool,
    /// Every reported index is a solution, or nothing was reported and
    /// none exists.
    pub correct: bool,
    /// Grover iterations on the critical path, assuming sub-systems run in
    /// parallel.
    pub iteration_depth: usize,
    /// Sum of all sub-system ledgers plus `merge_ledger`.
    pub total_ledger: CostLedger,
    /// Costs incurred by the merging-and-decision stage.
    pub merge_ledger: CostLedger,
    pub per_subsystem: Vec<SubsystemOutcome>,
}

struct Merge {
    winners: Vec<usize>,
    recovered: Vec<usize>,
    ledger: CostLedger,
}

fn assemble(
    config: &ExperimentConfig,
    strategy: Strategy,
    num_subsystems: usize,
    per_subsystem: Vec<SubsystemOutcome>,
    merge: Merge,
) -> RunReport {
    let total_ledger = per_subsystem.iter().map(|o| &o.ledger).sum::<CostLedger>() + merge.ledger;
    let iteration_depth = per_subsystem
        .iter()
        .map(|o| o.ledger.grover_iterations as usize)
        .max()
        .unwrap_or(0);
    let recovered = merge.recovered;
    let correct = if recovered.is_empty() {
        config.global_marked.is_empty()
    } else {
        recovered.iter().all(|g| config.global_marked.contains(g))
    };
    RunReport {
        strategy,
        db_size: config.db_size,
        num_subsystems,
        global_marked: config.global_marked.clone(),
        winner_subsystem: single(&merge.winners),
        winners: merge.winners,
        recovered_global_index: single(&recovered),
        multiple: recovered.len() > 1,
        missed: recovered.is_empty() && !config.global_marked.is_empty(),
        correct,
        recovered_global_indices: recovered,
        iteration_depth,
        total_ledger,
        merge_ledger: merge.ledger,
        per_subsystem,
    }
}

fn single(v: &[usize]) -> Option<usize> {
    match v {
        [x] => Some(*x),
        _ => None,
    }
}

fn subsystem_rng(seed: u64, id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, id as u64))
}

/// Probe strategy: one probe qubit per sub-system, tree search for the set
/// bit, register readout on the winner.
pub fn run_distributed_probe(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let subs = distribute(config)?;
    probe_seeded(config, &subs, config.seed)
}

pub(crate) fn probe_seeded(
    config: &ExperimentConfig,
    subs: &[SubsystemDescriptor],
    seed: u64,
) -> Result<RunReport> {
    let mut runs: Vec<(ProbedSubsystem, ChaCha8Rng)> = subs
        .par_iter()
        .map(|sub| {
            let mut rng = subsystem_rng(seed, sub.id);
            run_subsystem_probe(sub, &mut rng).map(|p| (p, rng))
        })
        .collect::<Result<_>>()?;

    let bits: Vec<bool> = runs
        .iter()
        .map(|(p, _)| p.outcome.probe_bit == Some(1))
        .collect();
    let search = find_winner(&bits);
    let winners = search.winner.ids();
    let mut ledger = CostLedger {
        decision_steps: search.decision_steps as u64,
        ..CostLedger::ZERO
    };
    let mut recovered = Vec::with_capacity(winners.len());
    for &id in &winners {
        let (probed, rng) = &mut runs[id];
        let (global, record) = recover_global(&subs[id], probed, rng)?;
        ledger.qubits_measured += record.qubits_measured as u64;
        recovered.push(global);
    }
    let per_subsystem = runs.into_iter().map(|(p, _)| p.outcome).collect();
    Ok(assemble(
        config,
        Strategy::Probe,
        subs.len(),
        per_subsystem,
        Merge {
            winners,
            recovered,
            ledger,
        },
    ))
}

/// Semi-classical verification: every sub-system measures its full
/// register; the merging stage evaluates the classical predicate on each
/// candidate.
pub fn run_semiclassical_verify(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let subs = distribute(config)?;
    verify_seeded(config, &subs, config.seed)
}

fn measure_after_grover(
    sub: &SubsystemDescriptor,
    seed: u64,
    rounds: usize,
) -> Result<(Vec<usize>, CostLedger)> {
    let mut rng = subsystem_rng(seed, sub.id);
    // Each round is a fresh run from the uniform state; the pre-measurement
    // state is deterministic, so it is computed once and sampled per round.
    let (state, stats) = run_grover(sub.num_qubits(), &sub.local_marked)?;
    let readouts: Vec<usize> = (0..rounds)
        .map(|_| state.measure(&mut rng).outcome)
        .collect();
    let r = rounds as u64;
    let ledger = CostLedger {
        qubits_measured: r * sub.num_qubits() as u64,
        quantum_oracle_calls: r * stats.oracle_calls as u64,
        grover_iterations: r * stats.iterations as u64,
        ..CostLedger::ZERO
    };
    Ok((readouts, ledger))
}

pub(crate) fn verify_seeded(
    config: &ExperimentConfig,
    subs: &[SubsystemDescriptor],
    seed: u64,
) -> Result<RunReport> {
    let per_subsystem: Vec<SubsystemOutcome> = subs
        .par_iter()
        .map(|sub| {
            let (readouts, ledger) = measure_after_grover(sub, seed, 1)?;
            Ok(SubsystemOutcome {
                id: sub.id,
                probe_bit: None,
                probe_one_probability: None,
                reported_local_index: Some(readouts[0]),
                ledger,
            })
        })
        .collect::<Result<_>>()?;

    let mut merge = Merge {
        winners: vec![],
        recovered: vec![],
        ledger: CostLedger::ZERO,
    };
    for (sub, outcome) in subs.iter().zip(&per_subsystem) {
        let Some(local) = outcome.reported_local_index else {
            continue;
        };
        let candidate = sub.to_global(local);
        merge.ledger.classical_oracle_calls += 1;
        if config.global_marked.contains(&candidate) {
            merge.winners.push(sub.id);
            merge.recovered.push(candidate);
        }
    }
    Ok(assemble(
        config,
        Strategy::SemiclassicalVerify,
        subs.len(),
        per_subsystem,
        merge,
    ))
}

/// Semi-classical repetition: every sub-system runs and measures
/// `repeat_rounds` times and reports only when all rounds agree. No
/// classical predicate is evaluated.
pub fn run_semiclassical_repeat(config: &ExperimentConfig) -> Result<RunReport> {
    config
        .clone()
        .with_strategy(Strategy::SemiclassicalRepeat)
        .validate()?;
    let subs = distribute(config)?;
    repeat_seeded(config, &subs, config.seed)
}

pub(crate) fn repeat_seeded(
    config: &ExperimentConfig,
    subs: &[SubsystemDescriptor],
    seed: u64,
) -> Result<RunReport> {
    let rounds = config.repeat_rounds;
    let per_subsystem: Vec<SubsystemOutcome> = subs
        .par_iter()
        .map(|sub| {
            let (readouts, ledger) = measure_after_grover(sub, seed, rounds)?;
            let agreed = readouts.windows(2).all(|w| w[0] == w[1]);
            Ok(SubsystemOutcome {
                id: sub.id,
                probe_bit: None,
                probe_one_probability: None,
                reported_local_index: agreed.then(|| readouts[0]),
                ledger,
            })
        })
        .collect::<Result<_>>()?;

    let mut merge = Merge {
        winners: vec![],
        recovered: vec![],
        ledger: CostLedger::ZERO,
    };
    for (sub, outcome) in subs.iter().zip(&per_subsystem) {
        if let Some(local) = outcome.reported_local_index {
            merge.winners.push(sub.id);
            merge.recovered.push(sub.to_global(local));
        }
    }
    Ok(assemble(
        config,
        Strategy::SemiclassicalRepeat,
        subs.len(),
        per_subsystem,
        merge,
    ))
}

/// Undistributed baseline: one Grover search over all `N` items followed
/// by a full register readout.
pub fn run_sequential(config: &ExperimentConfig) -> Result<RunReport> {
    config
        .clone()
        .with_strategy(Strategy::Sequential)
        .validate()?;
    sequential_seeded(config, config.seed)
}

pub(crate) fn sequential_seeded(config: &ExperimentConfig, seed: u64) -> Result<RunReport> {
    let whole = SubsystemDescriptor {
        id: 0,
        offset: 0,
        size: config.db_size,
        local_marked: config.global_marked.iter().copied().collect(),
    };
    let (readouts, ledger) = measure_after_grover(&whole, seed, 1)?;
    let outcome = SubsystemOutcome {
        id: 0,
        probe_bit: None,
        probe_one_probability: None,
        reported_local_index: Some(readouts[0]),
        ledger,
    };
    let merge = Merge {
        winners: vec![0],
        recovered: vec![readouts[0]],
        ledger: CostLedger::ZERO,
    };
    Ok(assemble(
        config,
        Strategy::Sequential,
        1,
        vec![outcome],
        merge,
    ))
}
