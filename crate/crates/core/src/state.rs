//! Dense state vectors and the register-level primitives of Grover search.
//!
//! Basis state `|i⟩` of a `k`-qubit register is stored at index `i` of a
//! `2^k`-long amplitude array.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for identities that hold exactly up to rounding.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for quantities accumulated over many Grover iterations.
pub const ACCUMULATED_TOL: f64 = 1e-9;

/// Set of solution indices in the local coordinates of one register.
///
/// Plays the role of the predicate `f(x)`: `f(x) = 1` iff `x` is in the set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkedSet(BTreeSet<usize>);

impl MarkedSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(index: usize) -> Self {
        Self(BTreeSet::from([index]))
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Fails if any index is outside `[0, dimension)`.
    pub fn check_range(&self, dimension: usize) -> Result<()> {
        match self.0.iter().next_back() {
            Some(&max) if max >= dimension => Err(Error::Domain(format!(
                "marked index {max} out of range for dimension {dimension}"
            ))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for MarkedSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for MarkedSet {
    fn from(indices: [usize; N]) -> Self {
        indices.into_iter().collect()
    }
}

/// Result of a projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// Observed bit (single-qubit measurement) or basis index.
    pub outcome: usize,
    /// Born probability of the observed outcome.
    pub probability: f64,
    pub qubits_measured: usize,
}

/// Dense amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl TryFrom<RawState> for StateVector {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        let state = Self::from_amplitudes(raw.amplitudes)?;
        if state.num_qubits != raw.num_qubits {
            return Err(Error::Size(format!(
                "num_qubits {} does not match {} amplitudes",
                raw.num_qubits,
                state.dimension()
            )));
        }
        Ok(state)
    }
}

pub(crate) fn check_qubits(k: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&k) {
        Ok(())
    } else {
        Err(Error::Size(format!(
            "qubit count {k} outside supported range 1..={MAX_QUBITS}"
        )))
    }
}

impl StateVector {
    /// Equal superposition `2^{-k/2} Σ_i |i⟩`, the state left by a Hadamard on
    /// every qubit of `|0…0⟩`.
    pub fn new_uniform(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an explicit amplitude array. The length must be a power of two
    /// and the squared norm must be 1 within [`ACCUMULATED_TOL`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Size(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > ACCUMULATED_TOL {
            return Err(Error::Domain(format!(
                "state is not normalized: |ψ|² = {norm}"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// Total probability on the marked subspace.
    pub fn marked_mass(&self, marked: &MarkedSet) -> f64 {
        marked
            .iter()
            .filter(|&i| i < self.dimension())
            .map(|i| self.probability(i))
            .sum()
    }

    /// Index of the largest-probability basis state (lowest index on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() > self.amplitudes[best].norm_sqr() {
                best = i;
            }
        }
        best
    }

    /// Phase oracle: `|x⟩ → (-1)^{f(x)} |x⟩`.
    pub fn apply_phase_oracle(&mut self, marked: &MarkedSet) -> Result<()> {
        marked.check_range(self.dimension())?;
        for i in marked.iter() {
            self.amplitudes[i] = -self.amplitudes[i];
        }
        Ok(())
    }

    /// Inversion about the average, `2|s⟩⟨s| − I`: every amplitude `a_i`
    /// becomes `2m − a_i` with `m` the mean amplitude.
    pub fn apply_diffusion(&mut self) {
        let sum: Complex64 = self.amplitudes.iter().sum();
        let twice_mean = sum * (2.0 / self.dimension() as f64);
        for a in &mut self.amplitudes {
            *a = twice_mean - *a;
        }
    }

    /// One Grover iteration: phase oracle followed by diffusion.
    pub fn grover_step(&mut self, marked: &MarkedSet) -> Result<()> {
        self.apply_phase_oracle(marked)?;
        self.apply_diffusion();
        Ok(())
    }

    /// Measures every qubit of the register. The state itself is left
    /// untouched; after the measurement the register is `|outcome⟩`.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> MeasurementRecord {
        let u: f64 = rng.gen();
        let outcome = sample_inverse_cdf(self.amplitudes.iter().map(|a| a.norm_sqr()), u);
        MeasurementRecord {
            outcome,
            probability: self.probability(outcome) / self.norm_sqr(),
            qubits_measured: self.num_qubits,
        }
    }

    pub(crate) fn from_raw_parts(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }
}

/// Free-function form of [`StateVector::measure`].
pub fn measure_register<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> MeasurementRecord {
    state.measure(rng)
}

pub(crate) fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Picks the first index whose cumulative weight exceeds `u · total`.
/// Zero-weight entries are never selected.
pub(crate) fn sample_inverse_cdf<I>(weights: I, u: f64) -> usize
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let weights = weights.into_iter();
    let total: f64 = weights.clone().sum();
    let target = u * total;
    let mut cumulative = 0.0;
    let mut last_nonzero = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            cumulative += w;
            last_nonzero = i;
            if target < cumulative {
                return i;
            }
        }
    }
    // Rounding can leave target == total; fall back to the last reachable index.
    last_nonzero
}
