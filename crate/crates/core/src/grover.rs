//! Non-distributed Grover search and its closed-form success probability.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{MarkedSet, StateVector};

/// Iteration and oracle-call counts for one Grover run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroverRunStats {
    pub iterations: usize,
    /// Phase-oracle applications; always equal to `iterations`.
    pub oracle_calls: usize,
    /// Total probability on the marked subspace after the last iteration.
    pub final_success_probability: f64,
}

fn check_size(size: usize, solutions: usize) -> Result<()> {
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::Domain(format!(
            "search-space size {size} is not a power of two >= 2"
        )));
    }
    if solutions > size {
        return Err(Error::Domain(format!(
            "{solutions} solutions exceed search-space size {size}"
        )));
    }
    Ok(())
}

/// Optimal iteration count `⌊(π/4)·√(size/solutions)⌋`, or 0 when there is
/// nothing to amplify.
pub fn iteration_count(size: usize, solutions: usize) -> Result<usize> {
    check_size(size, solutions)?;
    if solutions == 0 {
        return Ok(0);
    }
    Ok((FRAC_PI_4 * (size as f64 / solutions as f64).sqrt()).floor() as usize)
}

/// `sin²((2r+1)θ)` with `θ = arcsin(√(t/ν))`: the marked-subspace mass after
/// `iterations` Grover steps from the uniform state. Zero when `solutions = 0`.
pub fn success_probability(size: usize, solutions: usize, iterations: usize) -> Result<f64> {
    check_size(size, solutions)?;
    if solutions == 0 {
        return Ok(0.0);
    }
    let theta = (solutions as f64 / size as f64).sqrt().asin();
    Ok(((2 * iterations + 1) as f64 * theta).sin().powi(2))
}

/// Runs `iteration_count(2^k, |marked|)` Grover iterations starting from
/// the uniform superposition.
pub fn run_grover(num_qubits: usize, marked: &MarkedSet) -> Result<(StateVector, GroverRunStats)> {
    let mut state = StateVector::new_uniform(num_qubits)?;
    marked.check_range(state.dimension())?;
    let iterations = iteration_count(state.dimension(), marked.len())?;
    for _ in 0..iterations {
        state.grover_step(marked)?;
    }
    let stats = GroverRunStats {
        iterations,
        oracle_calls: iterations,
        final_success_probability: state.marked_mass(marked),
    };
    Ok((state, stats))
}
