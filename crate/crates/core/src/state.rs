//! Dense pure states over the computational basis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 24;

/// A pure state of `L` qubits stored as its `2^L` amplitudes.
///
/// Bit `j` of a basis index is the state of qubit `j`; a set bit is `|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector without normalizing it.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidInput(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        if amps.len() != 1usize << n_qubits {
            return Err(Error::InvalidInput(format!(
                "expected {} amplitudes for {} qubits, got {}",
                1usize << n_qubits,
                n_qubits,
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|x⟩`.
    pub fn basis(n_qubits: usize, x: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits.min(MAX_QUBITS)];
        if x >= amps.len() {
            return Err(Error::InvalidInput(format!("basis index {x} out of range")));
        }
        amps[x] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(n_qubits, amps)
    }

    /// Equal superposition of all `2^L` basis states.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits.min(MAX_QUBITS);
        let a = 1.0 / (dim as f64).sqrt();
        Self::from_amplitudes(n_qubits, vec![Complex64::new(a, 0.0); dim])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Numerical(format!("cannot normalize vector of norm {n}")));
        }
        let inv = 1.0 / n;
        for c in &mut self.amps {
            *c *= inv;
        }
        Ok(())
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Number of amplitudes with modulus above `tol`.
    pub fn support_size(&self, tol: f64) -> usize {
        self.amps.iter().filter(|c| c.norm() > tol).count()
    }
}
