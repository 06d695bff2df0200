//! Dense model Hamiltonians, charge-sector blocks and eigenstates.

mod csyk;
mod eig;
mod filter;
mod spin;

pub use csyk::{build_csyk, build_csyk_sector, CouplingTensor, CSYK_MAX_MODES};
pub use eig::{diagonalize, EigenSystem, EIG_TOL};
pub use filter::{mean_gap_ratio, midspectrum_filter, SpectralWindow};
pub use spin::{build_mfim, build_xxz_nnn, MfimParams, XxzParams};

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sectors::{enumerate_sector, SectorBasisMap};
use crate::state::PureState;

/// Largest register for which a full `2^L × 2^L` matrix is built.
pub const FULL_SPACE_MAX_QUBITS: usize = 12;

/// How an integer charge label maps to a popcount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeConvention {
    /// Magnetization `Σ σ^z`: `q = L - 2·popcount`.
    Spin,
    /// Fermion number `2N - L`: `q = 2·popcount - L`.
    Fermion,
}

impl ChargeConvention {
    /// Popcount of sector `q`, or `None` when the sector is empty.
    pub fn popcount(&self, n_qubits: usize, charge: i64) -> Option<usize> {
        let q = match self {
            ChargeConvention::Spin => charge,
            ChargeConvention::Fermion => -charge,
        };
        crate::sectors::sector_popcount(n_qubits, q)
    }

    /// Charge label of a popcount.
    pub fn charge_of(&self, n_qubits: usize, popcount: usize) -> i64 {
        let spin = n_qubits as i64 - 2 * popcount as i64;
        match self {
            ChargeConvention::Spin => spin,
            ChargeConvention::Fermion => -spin,
        }
    }
}

/// A dense Hermitian matrix, either on the full space or on one charge sector.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub n_qubits: usize,
    pub convention: ChargeConvention,
    pub matrix: Mat<Complex64>,
    /// `Some((q, map))` for a sector block.
    pub sector: Option<(i64, SectorBasisMap)>,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max(self.matrix[(i, j)].norm());
            }
        }
        worst
    }

    /// `H·v` for a vector in this matrix's basis.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, vj) in v.iter().enumerate() {
            if *vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.matrix[(i, j)] * vj;
            }
        }
        out
    }

    /// `max |H - H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest modulus of an element joining bitstrings of different popcount
    /// (full-space matrices only); zero iff `[H, 𝒬] = 0`.
    pub fn max_charge_violation(&self) -> f64 {
        if self.sector.is_some() {
            return 0.0;
        }
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                if i.count_ones() != j.count_ones() {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// `(H + H†)/2`, asserting the correction stays below `1e-12·max|H|`.
    pub(crate) fn symmetrize(mut self) -> Result<Self> {
        let scale = self.max_abs();
        let defect = self.hermiticity_defect();
        if defect > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "Hermitian symmetrization would change H by {defect:e} (scale {scale:e})"
            )));
        }
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let avg = (self.matrix[(i, j)] + self.matrix[(j, i)].conj()) * 0.5;
                self.matrix[(i, j)] = avg;
                self.matrix[(j, i)] = avg.conj();
            }
        }
        Ok(self)
    }
}

/// `d_q × d_q` block of a charge-conserving full-space matrix.
pub fn extract_sector_block(h: &HamiltonianMatrix, charge: i64) -> Result<HamiltonianMatrix> {
    if h.sector.is_some() {
        return Err(Error::InvalidInput("matrix is already a sector block".into()));
    }
    let violation = h.max_charge_violation();
    if violation != 0.0 {
        return Err(Error::InvalidInput(format!(
            "Hamiltonian does not conserve the charge: largest off-block element {violation:e}"
        )));
    }
    let l = h.n_qubits;
    let pop = h
        .convention
        .popcount(l, charge)
        .ok_or(Error::EmptySector { n_qubits: l, charge })?;
    let map = enumerate_sector(l, l as i64 - 2 * pop as i64);
    let m = map.members();
    let block = Mat::from_fn(m.len(), m.len(), |i, j| h.matrix[(m[i], m[j])]);
    Ok(HamiltonianMatrix {
        n_qubits: l,
        convention: h.convention,
        matrix: block,
        sector: Some((charge, map)),
    })
}

/// Places sector coordinates back into the `2^L` space with zeros elsewhere.
pub fn embed_eigenvector(v: &[Complex64], map: &SectorBasisMap) -> Result<PureState> {
    if v.len() != map.len() {
        return Err(Error::InvalidInput(format!(
            "vector of length {} does not match sector dimension {}",
            v.len(),
            map.len()
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << map.n_qubits()];
    for (&x, c) in map.members().iter().zip(v) {
        amps[x] = *c;
    }
    PureState::from_amplitudes(map.n_qubits(), amps)
}

pub(crate) fn check_full_space(n_qubits: usize, what: &str) -> Result<()> {
    if n_qubits > FULL_SPACE_MAX_QUBITS {
        return Err(Error::CostGuard {
            what: format!("full-space {what} matrix at L = {n_qubits} (limit {FULL_SPACE_MAX_QUBITS})"),
            estimate: format!("{:.1e} bytes", 16.0 * 4f64.powi(n_qubits as i32)),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        assert_eq!(ChargeConvention::Spin.popcount(4, 2), Some(1));
        assert_eq!(ChargeConvention::Fermion.popcount(4, 2), Some(3));
        assert_eq!(ChargeConvention::Fermion.charge_of(8, 1), -6);
        assert_eq!(ChargeConvention::Spin.popcount(5, 0), None);
    }

    #[test]
    fn block_dimensions_sum_to_full_space() {
        let h = build_xxz_nnn(6, &XxzParams::reference_conserving()).unwrap();
        let total: usize = crate::sectors::charges(6)
            .map(|q| extract_sector_block(&h, q).unwrap().dim())
            .sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn non_conserving_matrix_is_refused() {
        let mut p = XxzParams::reference_conserving();
        p.h_x = 0.75;
        p.j2 = 0.0;
        let h = build_xxz_nnn(5, &p).unwrap();
        assert!(h.max_charge_violation() > 0.0);
        assert!(extract_sector_block(&h, 1).is_err());
    }

    #[test]
    fn embedded_eigenvectors_solve_the_full_problem() {
        let h = build_xxz_nnn(6, &XxzParams::reference_conserving()).unwrap();
        for q in [-2i64, 0, 2] {
            let block = extract_sector_block(&h, q).unwrap();
            let es = diagonalize(&block).unwrap();
            let map = &block.sector.as_ref().unwrap().1;
            for (k, e) in es.values.iter().enumerate() {
                let psi = embed_eigenvector(&es.vector(k), map).unwrap();
                let hx = h.apply(psi.amplitudes());
                let r: f64 = hx
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum();
                assert!(r.sqrt() < 1e-9);
            }
        }
    }
}
