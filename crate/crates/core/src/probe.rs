//! Single-qubit probe composed with a register.
//!
//! The joint `(k+1)`-qubit state is stored densely with the probe as the
//! least significant bit: register index `i` with probe bit `p` lives at
//! joint index `2i + p`. Measuring the probe is then a stride-2 split of
//! the array.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{norm_sqr, MarkedSet, MeasurementRecord, StateVector, ACCUMULATED_TOL};

/// Register `⊗` probe qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedState {
    register_qubits: usize,
    joint: Vec<Complex64>,
}

impl ComposedState {
    /// `|Ψ⟩ ⊗ |0⟩`.
    pub fn compose(register: &StateVector) -> Self {
        let mut joint = vec![Complex64::new(0.0, 0.0); register.dimension() * 2];
        for (i, a) in register.amplitudes().iter().enumerate() {
            joint[i << 1] = *a;
        }
        Self {
            register_qubits: register.num_qubits(),
            joint,
        }
    }

    /// Wraps an explicit joint amplitude array laid out as `2i + probe`.
    pub fn from_joint_amplitudes(joint: Vec<Complex64>) -> Result<Self> {
        let dim = joint.len();
        if dim < 4 || !dim.is_power_of_two() {
            return Err(Error::Size(format!(
                "joint amplitude count {dim} is not a power of two >= 4"
            )));
        }
        let norm = norm_sqr(&joint);
        if (norm - 1.0).abs() > ACCUMULATED_TOL {
            return Err(Error::Domain(format!(
                "joint state is not normalized: {norm}"
            )));
        }
        Ok(Self {
            register_qubits: dim.trailing_zeros() as usize - 1,
            joint,
        })
    }

    pub fn register_qubits(&self) -> usize {
        self.register_qubits
    }

    pub fn register_dimension(&self) -> usize {
        self.joint.len() / 2
    }

    pub fn joint_amplitudes(&self) -> &[Complex64] {
        &self.joint
    }

    pub fn amplitude(&self, register_index: usize, probe_bit: u8) -> Complex64 {
        self.joint[(register_index << 1) | usize::from(probe_bit & 1)]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.joint)
    }

    /// Probability that the probe reads 1.
    pub fn probe_one_probability(&self) -> f64 {
        self.joint
            .iter()
            .skip(1)
            .step_by(2)
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Boolean oracle `|x, q⟩ → |x, f(x) ⊕ q⟩`: swaps the two probe
    /// components of every marked register index.
    pub fn apply_boolean_oracle(&mut self, marked: &MarkedSet) -> Result<()> {
        marked.check_range(self.register_dimension())?;
        for i in marked.iter() {
            self.joint.swap(i << 1, (i << 1) | 1);
        }
        Ok(())
    }

    /// Measures the probe qubit only. The register is returned in the
    /// renormalized state conditioned on the observed bit.
    pub fn measure_probe<R: Rng + ?Sized>(self, rng: &mut R) -> Result<ProbeOutcome> {
        let p0: f64 = self.joint.iter().step_by(2).map(|a| a.norm_sqr()).sum();
        let p1 = self.probe_one_probability();
        let total = p0 + p1;
        if total <= 0.0 {
            return Err(Error::Invariant(
                "both probe branches have zero norm".into(),
            ));
        }
        let u: f64 = rng.gen();
        let bit: u8 = if u < p1 / total { 1 } else { 0 };
        let branch = if bit == 1 { p1 } else { p0 };
        if branch <= 0.0 {
            return Err(Error::Invariant(format!(
                "selected probe branch {bit} has zero norm"
            )));
        }
        let scale = 1.0 / branch.sqrt();
        let register: Vec<Complex64> = self
            .joint
            .iter()
            .skip(usize::from(bit))
            .step_by(2)
            .map(|a| a * scale)
            .collect();
        Ok(ProbeOutcome {
            bit,
            probability: branch / total,
            register: StateVector::from_raw_parts(self.register_qubits, register),
        })
    }
}

/// Free-function form of [`ComposedState::compose`].
pub fn compose_with_probe(state: &StateVector) -> ComposedState {
    ComposedState::compose(state)
}

/// Outcome of reading the probe qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub bit: u8,
    /// Probability of the observed bit.
    pub probability: f64,
    /// Register state conditioned on `bit`.
    pub register: StateVector,
}

impl ProbeOutcome {
    pub fn record(&self) -> MeasurementRecord {
        MeasurementRecord {
            outcome: usize::from(self.bit),
            probability: self.probability,
            qubits_measured: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ALGEBRAIC_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// `a|i0⟩ + b Σ_{i≠i0} |i⟩` over `k` qubits with real `a`.
    fn solution_state(k: usize, i0: usize, a: f64) -> StateVector {
        let dim = 1usize << k;
        let b = ((1.0 - a * a) / (dim - 1) as f64).sqrt();
        let amps = (0..dim).map(|i| c(if i == i0 { a } else { b })).collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn compose_layout() {
        let (alpha, beta) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let s = StateVector::from_amplitudes(vec![alpha, beta]).unwrap();
        let cs = compose_with_probe(&s);
        assert_eq!(cs.amplitude(0, 0), alpha);
        assert_eq!(cs.amplitude(1, 0), beta);
        assert_eq!(cs.amplitude(0, 1), c(0.0));
        assert_eq!(cs.amplitude(1, 1), c(0.0));
        assert!((cs.norm_sqr() - s.norm_sqr()).abs() < ALGEBRAIC_TOL);
    }

    #[test]
    fn compose_uniform_has_zero_probe_block() {
        let cs = compose_with_probe(&StateVector::new_uniform(2).unwrap());
        let nonzero = cs
            .joint_amplitudes()
            .iter()
            .filter(|a| **a == c(0.5))
            .count();
        let zero = cs
            .joint_amplitudes()
            .iter()
            .filter(|a| **a == c(0.0))
            .count();
        assert_eq!((nonzero, zero), (4, 4));
        assert_eq!(cs.probe_one_probability(), 0.0);
    }

    #[test]
    fn boolean_oracle_moves_solution_to_probe_one() {
        let (a, i0) = (0.9, 5);
        let psi = solution_state(3, i0, a);
        let b = psi.amplitudes()[0];
        let mut cs = compose_with_probe(&psi);
        cs.apply_boolean_oracle(&MarkedSet::singleton(i0)).unwrap();
        for i in 0..8 {
            if i == i0 {
                assert_eq!(cs.amplitude(i, 1), c(a));
                assert_eq!(cs.amplitude(i, 0), c(0.0));
            } else {
                assert_eq!(cs.amplitude(i, 0), b);
                assert_eq!(cs.amplitude(i, 1), c(0.0));
            }
        }
    }

    #[test]
    fn boolean_oracle_empty_and_involution() {
        let psi = solution_state(3, 2, 0.7);
        let orig = compose_with_probe(&psi);
        let mut cs = orig.clone();
        cs.apply_boolean_oracle(&MarkedSet::empty()).unwrap();
        assert_eq!(cs, orig);
        let marked = MarkedSet::from([1, 2, 6]);
        cs.apply_boolean_oracle(&marked).unwrap();
        cs.apply_boolean_oracle(&marked).unwrap();
        assert_eq!(cs, orig);
    }

    #[test]
    fn boolean_oracle_out_of_range() {
        let mut cs = compose_with_probe(&StateVector::new_uniform(2).unwrap());
        assert!(matches!(
            cs.apply_boolean_oracle(&MarkedSet::singleton(4)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn probe_certain_one_collapses_to_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = solution_state(2, 1, 1.0);
        let mut cs = compose_with_probe(&psi);
        cs.apply_boolean_oracle(&MarkedSet::singleton(1)).unwrap();
        let out = cs.measure_probe(&mut rng).unwrap();
        assert_eq!(out.bit, 1);
        assert_eq!(out.probability, 1.0);
        assert_eq!(out.register, StateVector::basis(2, 1).unwrap());
        assert_eq!(out.record().qubits_measured, 1);
    }

    #[test]
    fn probe_without_solution_reads_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let mut cs = compose_with_probe(&StateVector::new_uniform(3).unwrap());
            cs.apply_boolean_oracle(&MarkedSet::empty()).unwrap();
            let out = cs.measure_probe(&mut rng).unwrap();
            assert_eq!(out.bit, 0);
            assert_eq!(out.probability, 1.0);
            let uniform = StateVector::new_uniform(3).unwrap();
            for (a, b) in out.register.amplitudes().iter().zip(uniform.amplitudes()) {
                assert!((a - b).norm() <= ALGEBRAIC_TOL);
            }
        }
    }

    #[test]
    fn probe_statistics_match_born_rule() {
        let a = 0.96f64.sqrt();
        let psi = solution_state(3, 4, a);
        let mut cs = compose_with_probe(&psi);
        cs.apply_boolean_oracle(&MarkedSet::singleton(4)).unwrap();
        assert!((cs.probe_one_probability() - 0.96).abs() < ALGEBRAIC_TOL);

        let mut rng = ChaCha8Rng::seed_from_u64(96);
        let trials = 10_000;
        let ones = (0..trials)
            .filter(|_| cs.clone().measure_probe(&mut rng).unwrap().bit == 1)
            .count();
        let rate = ones as f64 / trials as f64;
        assert!((rate - 0.96).abs() <= 0.02, "rate {rate}");
    }

    #[test]
    fn zero_norm_joint_state_is_an_invariant_error() {
        let cs = ComposedState {
            register_qubits: 1,
            joint: vec![c(0.0); 4],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            cs.measure_probe(&mut rng),
            Err(Error::Invariant(_))
        ));
    }
}
