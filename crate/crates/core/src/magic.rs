//! Stabilizer purities `Ξ_α`, stabilizer entropies `M_α` and participation entropies.
//!
//! The fast kernel writes `⟨ψ|X^a Z^b|ψ⟩` (up to a unit phase) as
//! `g_a(b) = Σ_x (-1)^{b·x} conj(c_{x⊕a}) c_x`, a Walsh–Hadamard transform of
//! `f_a(x) = conj(c_{x⊕a}) c_x`. Because `f_a(x⊕a) = conj(f_a(x))`, the transform
//! of `Re f_a` lives on `a·b` even and that of `Im f_a` on `a·b` odd, so one real
//! transform of `Re f_a + Im f_a` yields every `|g_a(b)|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;

/// Largest register the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 6;
/// Norm deviation tolerated by the purity kernels.
pub const NORM_TOL: f64 = 1e-9;
/// X-masks handled by one task; fixed so that the reduction tree never depends
/// on the thread count.
const MASK_BLOCK: usize = 64;

/// Pauli string `X^a Z^b` up to phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliMask {
    pub x: usize,
    pub z: usize,
}

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h <<= 1;
    }
}

/// Fixed-shape pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `|g|^{2α}` from `g²`, with the common integer orders special-cased.
#[inline]
fn moment(g2: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        g2 * g2
    } else if alpha == 3.0 {
        g2 * g2 * g2
    } else if alpha == 1.0 {
        g2
    } else {
        g2.powf(alpha)
    }
}

fn check_state(state: &PureState) -> Result<()> {
    let dev = (state.norm() - 1.0).abs();
    if !(dev <= NORM_TOL) {
        return Err(Error::InvalidInput(format!(
            "state norm deviates from 1 by {dev:e}"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("Rényi order {alpha} must be ≥ 1")));
    }
    Ok(())
}

/// Fills `buf` with `Re f_a + Im f_a` and reports whether it is identically zero.
#[inline]
fn load_mask(amps: &[Complex64], a: usize, buf: &mut [f64]) -> bool {
    let mut any = false;
    for (x, slot) in buf.iter_mut().enumerate() {
        let f = amps[x ^ a].conj() * amps[x];
        let v = f.re + f.im;
        any |= v != 0.0;
        *slot = v;
    }
    any
}

/// Per-block sums of `Σ_b |g_a(b)|^{2α}` over consecutive X-mask blocks.
fn mask_block_moments(state: &PureState, alpha: f64) -> Vec<f64> {
    let amps = state.amplitudes();
    let dim = amps.len();
    let block = MASK_BLOCK.min(dim);
    let n_blocks = dim / block;
    (0..n_blocks)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; dim],
            |buf, blk| {
                let mut acc = 0.0;
                for a in blk * block..(blk + 1) * block {
                    if !load_mask(amps, a, buf) {
                        continue;
                    }
                    fwht(buf);
                    acc += buf.iter().map(|&g| moment(g * g, alpha)).sum::<f64>();
                }
                acc
            },
        )
        .collect()
}

/// `Ξ_α = 2^{-L} Σ_{a,b} |⟨ψ|X^a Z^b|ψ⟩|^{2α}` in `O(L·4^L)` time and `O(2^L)`
/// scratch per worker. Bit-identical for any thread count.
pub fn stabilizer_purity_fast(state: &PureState, alpha: f64) -> Result<f64> {
    check_state(state)?;
    check_alpha(alpha)?;
    let sums = mask_block_moments(state, alpha);
    Ok(pairwise_sum(&sums) / state.dim() as f64)
}

/// Stabilizer purity together with a histogram of the `|⟨P⟩|²` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliSpectrumSummary {
    pub n_qubits: usize,
    pub alpha: f64,
    pub purity: f64,
    /// Counts of `|⟨P⟩|²` in equal bins over `[0, 1]`; the last bin is closed.
    pub histogram: Vec<u64>,
}

/// [`stabilizer_purity_fast`] plus a `bins`-bin histogram of the Pauli spectrum.
/// Memory stays `O(bins + 2^L)`: the `4^L` values are never stored.
pub fn pauli_spectrum_summary(state: &PureState, alpha: f64, bins: usize) -> Result<PauliSpectrumSummary> {
    check_state(state)?;
    check_alpha(alpha)?;
    if bins == 0 {
        return Err(Error::InvalidInput("histogram needs at least one bin".into()));
    }
    let amps = state.amplitudes();
    let dim = amps.len();
    let block = MASK_BLOCK.min(dim);
    let parts: Vec<(f64, Vec<u64>)> = (0..dim / block)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; dim],
            |buf, blk| {
                let mut acc = 0.0;
                let mut hist = vec![0u64; bins];
                for a in blk * block..(blk + 1) * block {
                    if !load_mask(amps, a, buf) {
                        hist[0] += dim as u64;
                        continue;
                    }
                    fwht(buf);
                    // same summation order as the purity-only kernel
                    acc += buf.iter().map(|&g| moment(g * g, alpha)).sum::<f64>();
                    for &g in buf.iter() {
                        let idx = ((g * g * bins as f64) as usize).min(bins - 1);
                        hist[idx] += 1;
                    }
                }
                (acc, hist)
            },
        )
        .collect();
    let sums: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let mut histogram = vec![0u64; bins];
    for (_, h) in &parts {
        for (t, v) in histogram.iter_mut().zip(h) {
            *t += v;
        }
    }
    Ok(PauliSpectrumSummary {
        n_qubits: state.n_qubits(),
        alpha,
        purity: pairwise_sum(&sums) / dim as f64,
        histogram,
    })
}

const PAULIS: [[[Complex64; 2]; 2]; 4] = {
    const O: Complex64 = Complex64::new(0.0, 0.0);
    const I: Complex64 = Complex64::new(1.0, 0.0);
    const M: Complex64 = Complex64::new(-1.0, 0.0);
    const J: Complex64 = Complex64::new(0.0, 1.0);
    const N: Complex64 = Complex64::new(0.0, -1.0);
    [[[I, O], [O, I]], [[O, I], [I, O]], [[O, N], [J, O]], [[I, O], [O, M]]]
};

/// `⟨ψ|P|ψ⟩` for the Pauli string whose qubit `j` carries `PAULIS[code_j]`.
fn pauli_expectation(amps: &[Complex64], codes: &[usize], scratch: &mut Vec<Complex64>) -> Complex64 {
    scratch.clear();
    scratch.extend_from_slice(amps);
    let dim = amps.len();
    for (j, &code) in codes.iter().enumerate() {
        if code == 0 {
            continue;
        }
        let m = &PAULIS[code];
        let bit = 1usize << j;
        for x0 in (0..dim).filter(|x| x & bit == 0) {
            let (a, b) = (scratch[x0], scratch[x0 | bit]);
            scratch[x0] = m[0][0] * a + m[0][1] * b;
            scratch[x0 | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
    amps.iter().zip(scratch.iter()).map(|(u, v)| u.conj() * v).sum()
}

/// Reference `Ξ_α` from all `4^L` explicit Pauli-matrix expectations; `L ≤ 6`.
pub fn stabilizer_purity_bruteforce(state: &PureState, alpha: f64) -> Result<f64> {
    let l = state.n_qubits();
    if l > BRUTE_FORCE_MAX_QUBITS {
        return Err(Error::CostGuard {
            what: format!("brute-force Pauli sum at L = {l} (limit {BRUTE_FORCE_MAX_QUBITS})"),
            estimate: format!("{:.1e} operations", (4f64).powi(l as i32) * (l as f64) * (1u64 << l) as f64),
        });
    }
    check_state(state)?;
    check_alpha(alpha)?;
    let amps = state.amplitudes();
    let mut codes = vec![0usize; l];
    let mut scratch = Vec::with_capacity(amps.len());
    let mut acc = 0.0;
    for idx in 0..1usize << (2 * l) {
        for (j, c) in codes.iter_mut().enumerate() {
            *c = (idx >> (2 * j)) & 3;
        }
        let e = pauli_expectation(amps, &codes, &mut scratch);
        acc += moment(e.norm_sqr(), alpha);
    }
    Ok(acc / amps.len() as f64)
}

/// `M_α = log₂(Ξ_α)/(1-α)` from the fast kernel.
pub fn stabilizer_entropy(state: &PureState, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(Error::Domain("stabilizer entropy needs α ≠ 1".into()));
    }
    let xi = stabilizer_purity_fast(state, alpha)?;
    Ok(xi.log2() / (1.0 - alpha))
}

/// `Σ_x |c_x|^{2k}`.
pub fn participation_moment(state: &PureState, k: f64) -> f64 {
    let p = state.amplitudes().iter().map(|c| c.norm_sqr());
    if k == 2.0 {
        p.map(|v| v * v).sum()
    } else {
        p.filter(|&v| v > 0.0).map(|v| v.powf(k)).sum()
    }
}

/// Rényi participation entropy `S_k = log₂(Σ_x |c_x|^{2k})/(1-k)` in bits;
/// `k = 1` falls through to [`shannon_pe`].
pub fn participation_entropy(state: &PureState, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::InvalidInput(format!("participation order {k} must be ≥ 0")));
    }
    if k == 1.0 {
        return Ok(shannon_pe(state));
    }
    Ok(participation_moment(state, k).log2() / (1.0 - k))
}

/// Shannon participation entropy `-Σ_x p_x log₂ p_x`.
pub fn shannon_pe(state: &PureState) -> f64 {
    -state
        .amplitudes()
        .iter()
        .map(|c| c.norm_sqr())
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::haar_state;

    fn t_state() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = vec![Complex64::new(s, 0.0), Complex64::from_polar(s, std::f64::consts::FRAC_PI_4)];
        PureState::from_amplitudes(1, amps).unwrap()
    }

    #[test]
    fn fwht_small() {
        let mut v = vec![1.0, 2.0, 3.0, 4.0];
        fwht(&mut v);
        assert_eq!(v, vec![10.0, -2.0, -4.0, 0.0]);
    }

    #[test]
    fn stabilizer_states() {
        for l in 1..=6 {
            let z = PureState::basis(l, 0).unwrap();
            assert_eq!(stabilizer_purity_fast(&z, 2.0).unwrap(), 1.0);
            assert_eq!(stabilizer_entropy(&z, 2.0).unwrap(), 0.0);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(s, 0.0);
        amps[3] = Complex64::new(s, 0.0);
        let ghz = PureState::from_amplitudes(2, amps).unwrap();
        assert!((stabilizer_purity_fast(&ghz, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((stabilizer_purity_bruteforce(&ghz, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn t_state_values() {
        let t = t_state();
        assert!((stabilizer_purity_fast(&t, 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((stabilizer_purity_bruteforce(&t, 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((stabilizer_entropy(&t, 2.0).unwrap() - (4.0f64 / 3.0).log2()).abs() < 1e-14);
    }

    #[test]
    fn fast_matches_bruteforce() {
        for l in 1..=5 {
            for seed in 0..20 {
                let s = haar_state(l, seed).unwrap();
                for alpha in [1.0, 2.0, 3.0, 2.5] {
                    let a = stabilizer_purity_fast(&s, alpha).unwrap();
                    let b = stabilizer_purity_bruteforce(&s, alpha).unwrap();
                    assert!((a - b).abs() < 1e-10, "L={l} α={alpha}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn purity_identity_and_ordering() {
        for seed in 0..10 {
            let s = haar_state(7, seed).unwrap();
            let x1 = stabilizer_purity_fast(&s, 1.0).unwrap();
            let x2 = stabilizer_purity_fast(&s, 2.0).unwrap();
            let x3 = stabilizer_purity_fast(&s, 3.0).unwrap();
            assert!((x1 - 1.0).abs() < 1e-12);
            assert!(x3 <= x2 && x2 <= x1 && x3 > 0.0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.1, 0.0);
        let s = PureState::from_amplitudes(2, amps).unwrap();
        assert!(stabilizer_purity_fast(&s, 2.0).is_err());
        let big = haar_state(7, 1).unwrap();
        assert!(matches!(
            stabilizer_purity_bruteforce(&big, 2.0),
            Err(Error::CostGuard { .. })
        ));
        assert!(stabilizer_entropy(&t_state(), 1.0).is_err());
    }

    #[test]
    fn histogram_counts_every_pauli() {
        let s = haar_state(5, 3).unwrap();
        let summary = pauli_spectrum_summary(&s, 2.0, 200).unwrap();
        assert_eq!(summary.histogram.iter().sum::<u64>(), 1 << 10);
        assert_eq!(summary.purity, stabilizer_purity_fast(&s, 2.0).unwrap());
    }

    #[test]
    fn participation_examples() {
        for l in 1..=6 {
            let b = PureState::basis(l, 3 % (1 << l)).unwrap();
            for k in [0.0, 0.5, 1.0, 2.0, 3.0] {
                assert_eq!(participation_entropy(&b, k).unwrap(), 0.0);
            }
            let u = PureState::uniform(l).unwrap();
            for k in [0.0, 0.5, 1.0, 2.0, 3.0] {
                assert!((participation_entropy(&u, k).unwrap() - l as f64).abs() < 1e-12);
            }
        }
    }
}
