//! Large-`L` saddle-point form `-log₂ 𝔼[Ξ₂] ≈ m(s)·L + g(s)` at charge density `s = q/L`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sectors::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub s: f64,
    /// Saddle-point location `z(s)`.
    pub z: f64,
    /// Exponent `F(α*; s)` at the saddle.
    pub f_star: f64,
    /// Gaussian-fluctuation prefactor `ξ(s)`, normalized so that `ξ(0) = 1`.
    pub xi: f64,
    /// Volume coefficient.
    pub m: f64,
    /// Constant offset.
    pub g: f64,
}

impl AsymptoticPrediction {
    /// `m(s)·L + g(s)`.
    pub fn neg_log2_mean(&self, n_qubits: usize) -> f64 {
        self.m * n_qubits as f64 + self.g
    }

    /// The alternative prefactor `(3+r)²/(2 r^{1/2} (1-s²)²)`, which equals `8ξ`
    /// and therefore gives `ξ(0) = 8`.
    pub fn xi_alternative(&self) -> f64 {
        8.0 * self.xi
    }

    /// Offset built from [`Self::xi_alternative`]; `-6` at `s = 0`. The exact
    /// finite-size mean rules this out in favour of [`Self::g`].
    pub fn g_alternative(&self) -> f64 {
        self.g - 3.0
    }
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Saddle-point data at density `s ∈ [0, 1)`.
pub fn asymptotic_prediction(s: f64) -> Result<AsymptoticPrediction> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::Domain(format!("charge density {s} outside [0, 1)")));
    }
    let r = (1.0 + 8.0 * s * s).sqrt();
    let z = (3.0 * s + r) / (1.0 - s);
    let f_star = -((3.0 - r) / 2.0).ln() - s * z.ln();
    let one_m_s2 = 1.0 - s * s;
    // ξ² = (3+r)⁴ / (256 r (1-s²)⁴): inverse square root of the Hessian determinant
    let xi = ((3.0 + r).powi(2) / (16.0 * r.sqrt() * one_m_s2 * one_m_s2)).abs();
    let m = 4.0 * binary_entropy((1.0 - s) / 2.0) - f_star / LN_2 - 3.0;
    let g = -(8.0 * one_m_s2 * one_m_s2 * xi).log2();
    Ok(AsymptoticPrediction {
        s,
        z,
        f_star,
        xi,
        m,
        g,
    })
}

/// Offset of `-log₂ 𝔼[Ξ₂] - L` at `q = 0` for the charge along `n̂`: `-3` along a
/// Cartesian axis, `-2` for every other direction.
pub fn tilted_asymptotic_q0(n: &Direction) -> f64 {
    if n.is_axis_aligned(1e-12) {
        -3.0
    } else {
        -2.0
    }
}
