//! Complex SYK model `H = (2L)^{-3/2} Σ_{ijkl} J_{ij;kl} c†_i c†_j c_k c_l`.

use faer::Mat;
use num_complex::Complex64;

use super::{check_full_space, ChargeConvention, HamiltonianMatrix};
use crate::error::{Error, Result};
use crate::sampler::GaussianSource;
use crate::sectors::{enumerate_sector, SectorBasisMap};

pub const CSYK_MAX_MODES: usize = 14;

/// Couplings `J_{ij;kl}`, stored once per ordered pair of ordered pairs.
///
/// Entries with `i<j`, `k<l` and `(i,j) < (k,l)` are independent complex normals
/// with `𝔼|J|² = 1`; diagonal pair entries are real normals with unit variance;
/// the rest follow from `J_{kl;ij} = conj(J_{ij;kl})` and antisymmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTensor {
    n_modes: usize,
    seed: u64,
    pairs: Vec<(usize, usize)>,
    values: Vec<Complex64>,
}

impl CouplingTensor {
    pub fn sample(n_modes: usize, seed: u64) -> Result<Self> {
        if !(2..=CSYK_MAX_MODES).contains(&n_modes) {
            return Err(Error::CostGuard {
                what: format!("cSYK with {n_modes} modes (supported 2..={CSYK_MAX_MODES})"),
                estimate: format!("{} Fock states", 1u64 << n_modes.min(63)),
            });
        }
        let pairs: Vec<(usize, usize)> = (0..n_modes)
            .flat_map(|i| (i + 1..n_modes).map(move |j| (i, j)))
            .collect();
        let np = pairs.len();
        let mut values = vec![Complex64::new(0.0, 0.0); np * np];
        let mut src = GaussianSource::new(seed);
        for p in 0..np {
            values[p * np + p] = Complex64::new(src.next_normal(), 0.0);
            for r in p + 1..np {
                let v = src.next_complex();
                values[p * np + r] = v;
                values[r * np + p] = v.conj();
            }
        }
        Ok(Self {
            n_modes,
            seed,
            pairs,
            values,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        // position of (i, j), i < j, in the row-major list of ordered pairs
        let l = self.n_modes;
        i * (2 * l - i - 1) / 2 + (j - i - 1)
    }

    /// `J_{ij;kl}` for arbitrary mode indices (0-based).
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        if i == j || k == l {
            return Complex64::new(0.0, 0.0);
        }
        let (a, s1) = if i < j { (self.pair_index(i, j), 1.0) } else { (self.pair_index(j, i), -1.0) };
        let (b, s2) = if k < l { (self.pair_index(k, l), 1.0) } else { (self.pair_index(l, k), -1.0) };
        self.values[a * self.pairs.len() + b] * (s1 * s2)
    }
}

/// `c_m` on a Fock state: `None` if mode `m` is empty, else the new state and
/// the Jordan–Wigner sign from the occupied lower modes.
#[inline]
fn annihilate(x: usize, m: usize) -> Option<(usize, f64)> {
    if x >> m & 1 == 0 {
        return None;
    }
    let sign = if (x & ((1 << m) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((x & !(1 << m), sign))
}

#[inline]
fn create(x: usize, m: usize) -> Option<(usize, f64)> {
    if x >> m & 1 == 1 {
        return None;
    }
    let sign = if (x & ((1 << m) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((x | (1 << m), sign))
}

/// Applies `H` to every basis state in `basis`, writing `H[pos(y), col]`.
fn fill(j: &CouplingTensor, basis: &[usize], pos: impl Fn(usize) -> usize) -> Mat<Complex64> {
    let l = j.n_modes;
    let n = basis.len();
    let scale = 4.0 / (2.0 * l as f64).powf(1.5);
    let np = j.pairs.len();
    let mut h = Mat::zeros(n, n);
    for (col, &x) in basis.iter().enumerate() {
        for (pk, &(k, lm)) in j.pairs.iter().enumerate() {
            // c_k c_l |x⟩: c_l acts first
            let Some((x1, s1)) = annihilate(x, lm) else { continue };
            let Some((x2, s2)) = annihilate(x1, k) else { continue };
            for (pi, &(a, b)) in j.pairs.iter().enumerate() {
                let Some((x3, s3)) = create(x2, b) else { continue };
                let Some((y, s4)) = create(x3, a) else { continue };
                let v = j.values[pi * np + pk] * (scale * s1 * s2 * s3 * s4);
                h[(pos(y), col)] += v;
            }
        }
    }
    h
}

/// Full Fock-space cSYK matrix (`L ≤ 12`) with its couplings.
pub fn build_csyk(n_modes: usize, seed: u64) -> Result<(HamiltonianMatrix, CouplingTensor)> {
    let j = CouplingTensor::sample(n_modes, seed)?;
    check_full_space(n_modes, "cSYK")?;
    let basis: Vec<usize> = (0..1usize << n_modes).collect();
    let h = HamiltonianMatrix {
        n_qubits: n_modes,
        convention: ChargeConvention::Fermion,
        matrix: fill(&j, &basis, |y| y),
        sector: None,
    }
    .symmetrize()?;
    Ok((h, j))
}

/// cSYK block on fermion-number sector `q = 2N - L`, built without the full matrix.
pub fn build_csyk_sector(j: &CouplingTensor, charge: i64) -> Result<HamiltonianMatrix> {
    let l = j.n_modes;
    let pop = ChargeConvention::Fermion
        .popcount(l, charge)
        .ok_or(Error::EmptySector { n_qubits: l, charge })?;
    let map: SectorBasisMap = enumerate_sector(l, l as i64 - 2 * pop as i64);
    let matrix = fill(j, map.members(), |y| map.position(y).expect("number conserving"));
    HamiltonianMatrix {
        n_qubits: l,
        convention: ChargeConvention::Fermion,
        matrix,
        sector: Some((charge, map)),
    }
    .symmetrize()
}
