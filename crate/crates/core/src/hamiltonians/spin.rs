//! Open spin chains: XXZ with next-nearest-neighbour ZZZ, and the mixed-field Ising chain.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_full_space, ChargeConvention, HamiltonianMatrix};
use crate::error::{Error, Result};

/// Parameters of
/// `Σ_{j<L} [J1(XX+YY) + Δ ZZ]_{j,j+1} + J2 Σ_{j<L-1} Z_j Z_{j+1} Z_{j+2} + h_b(Z_1 - Z_L) + h_x Σ X_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XxzParams {
    pub j1: f64,
    pub delta: f64,
    pub j2: f64,
    pub h_b: f64,
    pub h_x: f64,
}

impl XxzParams {
    /// `J1 = 1, Δ = 0.5, J2 = 0.6, h_b = 0.25, h_x = 0`: chaotic and magnetization conserving.
    pub fn reference_conserving() -> Self {
        Self {
            j1: 1.0,
            delta: 0.5,
            j2: 0.6,
            h_b: 0.25,
            h_x: 0.0,
        }
    }

    /// `J2 = 0, h_x = 0.75`: the variant without magnetization conservation.
    pub fn reference_broken() -> Self {
        Self {
            j2: 0.0,
            h_x: 0.75,
            ..Self::reference_conserving()
        }
    }
}

/// Parameters of `Σ_{j<L} Z_j Z_{j+1} + g Σ X_j + h Σ Z_j + h_1 Z_1 + h_L Z_L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfimParams {
    pub g: f64,
    pub h: f64,
    pub h1: f64,
    pub h_l: f64,
}

impl MfimParams {
    /// `(g, h, h_1, h_L) = (1.1, 0.35, 1/4, -1/4)`.
    pub fn reference() -> Self {
        Self {
            g: 1.1,
            h: 0.35,
            h1: 0.25,
            h_l: -0.25,
        }
    }
}

#[inline]
fn z(x: usize, j: usize) -> f64 {
    if x >> j & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_chain(n_qubits: usize, what: &str) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::InvalidInput(format!("{what} needs at least two sites")));
    }
    check_full_space(n_qubits, what)
}

/// Full-space XXZ-NNN matrix (real, qubit `j` = bit `j`).
pub fn build_xxz_nnn(n_qubits: usize, p: &XxzParams) -> Result<HamiltonianMatrix> {
    check_chain(n_qubits, "XXZ-NNN")?;
    let l = n_qubits;
    let dim = 1usize << l;
    let mut h = Mat::zeros(dim, dim);
    for x in 0..dim {
        let mut diag = 0.0;
        for j in 0..l - 1 {
            diag += p.delta * z(x, j) * z(x, j + 1);
            // XX + YY = 2(σ⁺σ⁻ + σ⁻σ⁺): flips an antiparallel pair with amplitude 2
            if z(x, j) != z(x, j + 1) && p.j1 != 0.0 {
                let y = x ^ (0b11 << j);
                h[(y, x)] += Complex64::new(2.0 * p.j1, 0.0);
            }
        }
        for j in 0..l.saturating_sub(2) {
            diag += p.j2 * z(x, j) * z(x, j + 1) * z(x, j + 2);
        }
        diag += p.h_b * (z(x, 0) - z(x, l - 1));
        h[(x, x)] += Complex64::new(diag, 0.0);
        if p.h_x != 0.0 {
            for j in 0..l {
                h[(x ^ (1 << j), x)] += Complex64::new(p.h_x, 0.0);
            }
        }
    }
    HamiltonianMatrix {
        n_qubits: l,
        convention: ChargeConvention::Spin,
        matrix: h,
        sector: None,
    }
    .symmetrize()
}

/// Full-space mixed-field Ising matrix.
pub fn build_mfim(n_qubits: usize, p: &MfimParams) -> Result<HamiltonianMatrix> {
    check_chain(n_qubits, "MFIM")?;
    let l = n_qubits;
    let dim = 1usize << l;
    let mut h = Mat::zeros(dim, dim);
    for x in 0..dim {
        let mut diag = 0.0;
        for j in 0..l - 1 {
            diag += z(x, j) * z(x, j + 1);
        }
        for j in 0..l {
            diag += p.h * z(x, j);
        }
        diag += p.h1 * z(x, 0) + p.h_l * z(x, l - 1);
        h[(x, x)] += Complex64::new(diag, 0.0);
        if p.g != 0.0 {
            for j in 0..l {
                h[(x ^ (1 << j), x)] += Complex64::new(p.g, 0.0);
            }
        }
    }
    HamiltonianMatrix {
        n_qubits: l,
        convention: ChargeConvention::Spin,
        matrix: h,
        sector: None,
    }
    .symmetrize()
}
