//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `𝔼[x^{2a} y^{2b} z^{2c}]` for `(x, y, z)` uniform on the unit sphere.
pub fn sphere_moment(a: u32, b: u32, c: u32) -> BigRational {
    let dfact = |k: u32| -> BigInt { (1..=k).map(|j| BigInt::from(2 * j - 1)).product() };
    let den: BigInt = (1..=a + b + c).map(|k| BigInt::from(2 * k + 1)).product();
    BigRational::new(dfact(a) * dfact(b) * dfact(c), den)
}

/// Polynomial in `x², y², z²`: map from half-exponents to coefficient.
pub type SpherePoly = Vec<([u32; 3], BigRational)>;

fn poly_mul(p: &SpherePoly, q: &SpherePoly) -> SpherePoly {
    let mut out: SpherePoly = vec![];
    for (e1, c1) in p {
        for (e2, c2) in q {
            let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
            let c = c1 * c2;
            match out.iter_mut().find(|(k, _)| *k == e) {
                Some((_, acc)) => *acc += c,
                None => out.push((e, c)),
            }
        }
    }
    out
}

fn sphere_average(p: &SpherePoly) -> BigRational {
    p.iter()
        .fold(BigRational::zero(), |acc, (e, c)| acc + c * sphere_moment(e[0], e[1], e[2]))
}

/// Two qubits at zero magnetization form a single effective qubit with
/// Bloch vector `(x, y, z)`; its Pauli expectations are `1, -1` (II, ZZ),
/// `±x` twice, `±y` twice, `±z` twice, and zero otherwise, so
/// `Ξ₂ = (1 + x⁴ + y⁴ + z⁴)/2`. Returns `(𝔼Ξ₂, 𝔼Ξ₂²)` under the uniform measure.
pub fn bloch_two_qubit_moments() -> (BigRational, BigRational) {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let xi: SpherePoly = vec![
        ([0, 0, 0], r(1, 2)),
        ([2, 0, 0], r(1, 2)),
        ([0, 2, 0], r(1, 2)),
        ([0, 0, 2], r(1, 2)),
    ];
    (sphere_average(&xi), sphere_average(&poly_mul(&xi, &xi)))
}

/// `Ξ₂` of `cos(θ/2)|01⟩ + e^{iφ} sin(θ/2)|10⟩` from the Bloch formula.
pub fn bloch_xi2(theta: f64, phi: f64) -> f64 {
    let (x, y, z) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    0.5 * (1.0 + x.powi(4) + y.powi(4) + z.powi(4))
}

pub fn one() -> BigRational {
    BigRational::one()
}
