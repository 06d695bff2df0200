//! Seed-reproducible Haar and Haar×U(1) random states.
//!
//! Streams come from ChaCha20 seeded through [`SeedPolicy`]; normal variates use
//! Box–Muller on `libm` transcendental functions, so a given seed produces the
//! same bits on every platform and thread count.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sectors::{enumerate_sector, rotate_into, rotate_out_of, sector_popcount, Frame};
use crate::state::{PureState, MAX_QUBITS};

/// Squared norm below which a projected state counts as having missed the sector.
const ZERO_WEIGHT: f64 = 1e-300;
const MAX_RESAMPLES: u64 = 64;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derives one independent stream seed per `(experiment, task)` from a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPolicy {
    pub master_seed: u64,
}

impl SeedPolicy {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    /// `hash(master_seed, experiment_id, task)`, a splitmix cascade over an FNV-1a
    /// digest of the experiment id.
    pub fn child_seed(&self, experiment_id: &str, task: u64) -> u64 {
        let h = splitmix64(self.master_seed);
        let h = splitmix64(h ^ fnv1a(experiment_id.as_bytes()));
        splitmix64(h ^ splitmix64(task))
    }

    pub fn rng(&self, experiment_id: &str, task: u64) -> GaussianSource {
        GaussianSource::new(self.child_seed(experiment_id, task))
    }
}

/// Seed for the `attempt`-th resample after a zero-weight projection.
fn resample_seed(seed: u64, attempt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(attempt.wrapping_add(0x5EED)))
}

/// Stream of uniform and complex-normal variates.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha20Rng,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`, 53-bit resolution.
    pub fn next_open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex normal: independent real and imaginary parts with variance 1/2.
    pub fn next_complex(&mut self) -> Complex64 {
        let u1 = self.next_open01();
        let u2 = self.next_open01();
        let r = libm::sqrt(-libm::log(u1));
        let t = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * libm::cos(t), r * libm::sin(t))
    }

    /// Standard real normal (one Box–Muller branch).
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_open01();
        let u2 = self.next_open01();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * std::f64::consts::PI * u2)
    }

    pub fn fill_complex(&mut self, out: &mut [Complex64]) {
        for c in out {
            *c = self.next_complex();
        }
    }
}

/// How constrained states are produced; both are equal in law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SamplingPath {
    /// `d_q` Gaussians on sector coordinates, then the frame rotation.
    #[default]
    Direct,
    /// Full Haar state, rotate out of the frame, project, rotate back.
    Projection,
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidInput(format!(
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn normalize_in_place(amps: &mut [Complex64]) -> f64 {
    let n2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if n2 > ZERO_WEIGHT {
        let inv = 1.0 / n2.sqrt();
        for c in amps.iter_mut() {
            *c *= inv;
        }
    }
    n2
}

/// Haar-random state on `L` qubits.
pub fn haar_state(n_qubits: usize, seed: u64) -> Result<PureState> {
    check_qubits(n_qubits)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
    let mut src = GaussianSource::new(seed);
    src.fill_complex(&mut amps);
    normalize_in_place(&mut amps);
    PureState::from_amplitudes(n_qubits, amps)
}

fn check_sector(n_qubits: usize, charge: i64) -> Result<usize> {
    check_qubits(n_qubits)?;
    sector_popcount(n_qubits, charge).ok_or(Error::EmptySector { n_qubits, charge })
}

/// Haar×U(1) state built by projecting a Haar state onto sector `q` of `frame`.
pub fn constrained_haar_state(
    n_qubits: usize,
    charge: i64,
    frame: &Frame,
    seed: u64,
) -> Result<PureState> {
    let pop = check_sector(n_qubits, charge)?;
    let mut seed_now = seed;
    for attempt in 0..=MAX_RESAMPLES {
        let mut state = haar_state(n_qubits, seed_now)?;
        rotate_out_of(&mut state, frame);
        for (x, c) in state.amplitudes_mut().iter_mut().enumerate() {
            if x.count_ones() as usize != pop {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        if normalize_in_place(state.amplitudes_mut()) > ZERO_WEIGHT {
            canonicalize_one_dimensional(&mut state, pop);
            rotate_into(&mut state, frame);
            return Ok(state);
        }
        log::warn!(
            "zero sector weight for L={n_qubits} q={charge} seed={seed_now}; resampling (attempt {})",
            attempt + 1
        );
        seed_now = resample_seed(seed, attempt + 1);
    }
    Err(Error::Numerical(format!(
        "projection onto L={n_qubits} q={charge} failed {MAX_RESAMPLES} times"
    )))
}

/// A one-dimensional sector holds a single ray; fix its phase to `+1`.
fn canonicalize_one_dimensional(state: &mut PureState, pop: usize) {
    let l = state.n_qubits();
    if pop == 0 || pop == l {
        let x = if pop == 0 { 0 } else { (1usize << l) - 1 };
        state.amplitudes_mut()[x] = Complex64::new(1.0, 0.0);
    }
}

/// Haar×U(1) state in the z frame from `d_q` Gaussians placed on the sector basis.
pub fn constrained_haar_state_direct(n_qubits: usize, charge: i64, seed: u64) -> Result<PureState> {
    constrained_haar_state_direct_in_frame(n_qubits, charge, &Frame::Z, seed)
}

/// [`constrained_haar_state_direct`] rotated into `frame`.
pub fn constrained_haar_state_direct_in_frame(
    n_qubits: usize,
    charge: i64,
    frame: &Frame,
    seed: u64,
) -> Result<PureState> {
    let pop = check_sector(n_qubits, charge)?;
    let map = enumerate_sector(n_qubits, charge);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
    let mut src = GaussianSource::new(seed);
    let mut local: Vec<Complex64> = (0..map.len()).map(|_| src.next_complex()).collect();
    normalize_in_place(&mut local);
    for (&x, c) in map.members().iter().zip(local) {
        amps[x] = c;
    }
    let mut state = PureState::from_amplitudes(n_qubits, amps)?;
    canonicalize_one_dimensional(&mut state, pop);
    rotate_into(&mut state, frame);
    Ok(state)
}

/// Dispatches on [`SamplingPath`].
pub fn sample_constrained(
    n_qubits: usize,
    charge: i64,
    frame: &Frame,
    path: SamplingPath,
    seed: u64,
) -> Result<PureState> {
    match path {
        SamplingPath::Direct => constrained_haar_state_direct_in_frame(n_qubits, charge, frame, seed),
        SamplingPath::Projection => constrained_haar_state(n_qubits, charge, frame, seed),
    }
}
