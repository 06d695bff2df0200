//! Computational-basis indexing, charge sectors and Pauli-frame rotations.
//!
//! Bit `j` of a basis index is qubit `j`; a set bit is `|1⟩`, the `σ^z = -1`
//! eigenstate. The z-charge of a bitstring `x` is therefore
//! `L - 2·popcount(x)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;

/// Tolerance on `‖n̂‖₂ = 1` for charge directions.
pub const DIRECTION_TOL: f64 = 1e-12;

/// z-charge `L - 2·popcount(x)` of basis index `x`.
#[inline]
pub fn basis_charge(n_qubits: usize, x: usize) -> i64 {
    n_qubits as i64 - 2 * x.count_ones() as i64
}

/// Number of set bits a sector member carries, or `None` when the sector is empty.
pub fn sector_popcount(n_qubits: usize, charge: i64) -> Option<usize> {
    let l = n_qubits as i64;
    if charge.abs() > l || (l - charge).rem_euclid(2) != 0 {
        return None;
    }
    Some(((l - charge) / 2) as usize)
}

/// `C(n, k)` in `u128`; zero outside `0 ≤ k ≤ n`.
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension `d_q = C(L, (L-q)/2)` of the charge-`q` eigenspace; zero for an
/// empty sector. Exact for `L ≤ 120`.
pub fn sector_dimension(n_qubits: usize, charge: i64) -> u128 {
    match sector_popcount(n_qubits, charge) {
        Some(k) => binomial_u128(n_qubits, k),
        None => 0,
    }
}

/// Allowed charges `-L, -L+2, ..., L`.
pub fn charges(n_qubits: usize) -> impl Iterator<Item = i64> {
    let l = n_qubits as i64;
    (0..=l).map(move |k| l - 2 * k)
}

/// Ordered list of the bitstrings in one z-charge sector.
///
/// Positions map to full-space indices through [`SectorBasisMap::index`] and back
/// through [`SectorBasisMap::position`] (combinatorial ranking, no lookup table).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasisMap {
    n_qubits: usize,
    charge: i64,
    members: Vec<usize>,
}

impl SectorBasisMap {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn index(&self, position: usize) -> usize {
        self.members[position]
    }

    /// Position of `x` inside the sector, if `x` belongs to it.
    pub fn position(&self, x: usize) -> Option<usize> {
        if x >> self.n_qubits != 0 {
            return None;
        }
        let k = sector_popcount(self.n_qubits, self.charge)?;
        if x.count_ones() as usize != k {
            return None;
        }
        // colex rank: sum over set bits (ascending) of C(bit, rank + 1)
        let mut rank = 0u128;
        let mut i = 0usize;
        let mut rest = x;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rank += binomial_u128(b, i + 1);
            i += 1;
            rest &= rest - 1;
        }
        Some(rank as usize)
    }
}

/// All bitstrings of charge `q`, ascending. An empty sector yields an empty map.
pub fn enumerate_sector(n_qubits: usize, charge: i64) -> SectorBasisMap {
    let mut members = Vec::new();
    if let Some(k) = sector_popcount(n_qubits, charge) {
        let dim = 1usize << n_qubits;
        members.reserve(binomial_u128(n_qubits, k) as usize);
        if k == 0 {
            members.push(0);
        } else {
            // Gosper's hack walks same-popcount integers in increasing order
            let mut x: usize = (1usize << k) - 1;
            while x < dim {
                members.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
    }
    SectorBasisMap {
        n_qubits,
        charge,
        members,
    }
}

/// Unit vector `n̂` defining the charge `Σ_j n̂·σ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    n: [f64; 3],
}

impl Direction {
    pub const Z: Direction = Direction { n: [0.0, 0.0, 1.0] };
    pub const X: Direction = Direction { n: [1.0, 0.0, 0.0] };
    pub const Y: Direction = Direction { n: [0.0, 1.0, 0.0] };

    /// Rejects vectors whose norm deviates from one by more than [`DIRECTION_TOL`].
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::InvalidInput(format!(
                "direction ({nx}, {ny}, {nz}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self { n: [nx, ny, nz] })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidInput("zero direction vector".into()));
        }
        Ok(Self {
            n: [nx / norm, ny / norm, nz / norm],
        })
    }

    /// `n̂ = (sin θ, 0, cos θ)`.
    pub fn from_theta(theta: f64) -> Self {
        Self {
            n: [theta.sin(), 0.0, theta.cos()],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    pub fn neg(&self) -> Self {
        Self {
            n: [-self.n[0], -self.n[1], -self.n[2]],
        }
    }

    /// `Σ_k n_k⁴`; equals one exactly for `±x̂, ±ŷ, ±ẑ`.
    pub fn quartic_weight(&self) -> f64 {
        self.n.iter().map(|v| v.powi(4)).sum()
    }

    /// Whether `n̂` is one of `±x̂, ±ŷ, ±ẑ` up to `tol`.
    pub fn is_axis_aligned(&self, tol: f64) -> bool {
        (1.0 - self.quartic_weight()).abs() <= tol
    }
}

/// Basis in which a charge `Σ_j n̂·σ_j` is diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Frame {
    Z,
    X,
    Y,
    Tilted(Direction),
}

impl Frame {
    pub fn direction(&self) -> Direction {
        match self {
            Frame::Z => Direction::Z,
            Frame::X => Direction::X,
            Frame::Y => Direction::Y,
            Frame::Tilted(d) => *d,
        }
    }

    /// Single-qubit unitary `U` with `U σ^z U† = n̂·σ`.
    ///
    /// x uses the Hadamard gate, y uses `R_x(-π/2)`; a tilted direction with
    /// polar angle `θ` and azimuth `φ` uses `R_z(φ) R_y(θ)`.
    pub fn unitary(&self) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Frame::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            Frame::X => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
            Frame::Y => [[c(s, 0.0), c(0.0, s)], [c(0.0, s), c(s, 0.0)]],
            Frame::Tilted(d) => {
                let [nx, ny, nz] = d.components();
                let theta = nz.clamp(-1.0, 1.0).acos();
                let phi = ny.atan2(nx);
                let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let em = Complex64::from_polar(1.0, -phi / 2.0);
                let ep = Complex64::from_polar(1.0, phi / 2.0);
                [[em * ct, -em * st], [ep * st, ep * ct]]
            }
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Z => write!(f, "z"),
            Frame::X => write!(f, "x"),
            Frame::Y => write!(f, "y"),
            Frame::Tilted(d) => {
                let [x, y, z] = d.components();
                write!(f, "n({x},{y},{z})")
            }
        }
    }
}

/// A charge sector `(L, q)` of the charge defined by `frame`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeSector {
    pub n_qubits: usize,
    pub charge: i64,
    pub frame: Frame,
}

impl ChargeSector {
    pub fn new(n_qubits: usize, charge: i64, frame: Frame) -> Self {
        Self {
            n_qubits,
            charge,
            frame,
        }
    }

    pub fn dimension(&self) -> u128 {
        sector_dimension(self.n_qubits, self.charge)
    }

    pub fn is_empty(&self) -> bool {
        self.dimension() == 0
    }

    /// Member bitstrings of the sector in its own (rotated) frame.
    pub fn basis_map(&self) -> SectorBasisMap {
        enumerate_sector(self.n_qubits, self.charge)
    }
}

/// Applies the same 2×2 matrix to every qubit, in place: `L` butterfly passes.
pub fn apply_local_unitary(amps: &mut [Complex64], u: &[[Complex64; 2]; 2]) {
    let dim = amps.len();
    let mut bit = 1usize;
    while bit < dim {
        let mut base = 0;
        while base < dim {
            for x0 in base..base + bit {
                let x1 = x0 | bit;
                let a = amps[x0];
                let b = amps[x1];
                amps[x0] = u[0][0] * a + u[0][1] * b;
                amps[x1] = u[1][0] * a + u[1][1] * b;
            }
            base += bit << 1;
        }
        bit <<= 1;
    }
}

fn adjoint(u: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

/// Applies `U^{⊗L}` for the frame's unitary. For a z-charge eigenstate the
/// result is an eigenstate of the frame's charge with the same eigenvalue.
pub fn apply_frame_rotation(state: &PureState, frame: &Frame) -> PureState {
    let mut out = state.clone();
    rotate_into(&mut out, frame);
    out
}

/// Applies `U†^{⊗L}`, the inverse of [`apply_frame_rotation`].
pub fn apply_inverse_frame_rotation(state: &PureState, frame: &Frame) -> PureState {
    let mut out = state.clone();
    rotate_out_of(&mut out, frame);
    out
}

/// In-place form of [`apply_frame_rotation`].
pub fn rotate_into(state: &mut PureState, frame: &Frame) {
    if *frame == Frame::Z {
        return;
    }
    apply_local_unitary(state.amplitudes_mut(), &frame.unitary());
}

/// In-place form of [`apply_inverse_frame_rotation`].
pub fn rotate_out_of(state: &mut PureState, frame: &Frame) {
    if *frame == Frame::Z {
        return;
    }
    apply_local_unitary(state.amplitudes_mut(), &adjoint(&frame.unitary()));
}

/// `⟨ψ| Σ_j n̂·σ_j |ψ⟩`, accumulated qubit by qubit.
pub fn charge_expectation(state: &PureState, direction: &Direction) -> f64 {
    let amps = state.amplitudes();
    let dim = amps.len();
    let [nx, ny, nz] = direction.components();
    let mut total = 0.0;
    for j in 0..state.n_qubits() {
        let bit = 1usize << j;
        let (mut ex, mut ey, mut ez) = (0.0, 0.0, 0.0);
        for x0 in (0..dim).filter(|x| x & bit == 0) {
            let a = amps[x0];
            let b = amps[x0 | bit];
            let z = a.conj() * b;
            ex += 2.0 * z.re;
            ey += 2.0 * z.im;
            ez += a.norm_sqr() - b.norm_sqr();
        }
        total += nx * ex + ny * ey + nz * ez;
    }
    total
}
