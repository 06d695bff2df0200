//! Lévy concentration bounds for `Ξ₂` on a charge sector.

use std::f64::consts::PI;

use crate::sectors::sector_dimension;

/// Lipschitz constant of `Ξ₂` on the unit sphere used in the bounds.
pub const LIPSCHITZ_ETA: f64 = 5.4;

fn pi3_eta2() -> f64 {
    PI.powi(3) * LIPSCHITZ_ETA * LIPSCHITZ_ETA
}

/// `Pr(|Ξ₂ - 𝔼Ξ₂| ≥ ε) ≤ 2 exp(-d_q ε² / (9π³η²))`.
pub fn levy_tail_bound(n_qubits: usize, charge: i64, eps: f64) -> f64 {
    let d = sector_dimension(n_qubits, charge) as f64;
    2.0 * (-d * eps * eps / (9.0 * pi3_eta2())).exp()
}

/// Variance bound `18π³η²/d_q` obtained by integrating the tail bound. Infinite
/// for an empty sector.
pub fn levy_variance_bound(n_qubits: usize, charge: i64) -> f64 {
    let d = sector_dimension(n_qubits, charge) as f64;
    18.0 * pi3_eta2() / d
}
