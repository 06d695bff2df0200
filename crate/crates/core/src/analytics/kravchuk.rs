//! The Fourier integrals `J_q(a,b) = (1/2π)∫ cos^a α sin^b α e^{-iqα} dα`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::BinomialTable;

/// Exact value `(-i)^phase · k / 2^pow2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KravchukJ {
    pub k: BigInt,
    pub pow2: u32,
    /// Exponent of `-i`, reduced mod 4.
    pub phase: u8,
}

impl KravchukJ {
    pub fn is_zero(&self) -> bool {
        self.k.is_zero()
    }

    /// `(re, im)` as exact rationals.
    pub fn to_rational_parts(&self) -> (BigRational, BigRational) {
        let v = BigRational::new(self.k.clone(), BigInt::from(1) << self.pow2);
        let z = BigRational::zero();
        match self.phase {
            0 => (v, z),
            1 => (z, -v),
            2 => (-v, z),
            _ => (z, v),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let v = self.k.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.pow2 as i32));
        match self.phase {
            0 => Complex64::new(v, 0.0),
            1 => Complex64::new(0.0, -v),
            2 => Complex64::new(-v, 0.0),
            _ => Complex64::new(0.0, v),
        }
    }
}

/// Integer kernel `K_q(a,b) = Σ_m (-1)^m C(b,m) C(a, (a+b-q)/2 - m)`; zero if `a+b+q` is odd.
///
/// `J_q(a,b) = (-i)^b K_q(a,b) / 2^{a+b}`. `K` is even in `q` up to the sign
/// `(-1)^b`, so only odd-`b` values ever see the sign of `q`.
pub fn kravchuk_k(a: usize, b: usize, q: i64) -> BigInt {
    let table = BinomialTable::new(a.max(b));
    kravchuk_k_with(&table, a, b, q)
}

pub(crate) fn kravchuk_k_with(table: &BinomialTable, a: usize, b: usize, q: i64) -> BigInt {
    let s = a as i64 + b as i64 - q;
    if s.rem_euclid(2) != 0 {
        return BigInt::zero();
    }
    let top = s / 2;
    let mut acc = BigInt::zero();
    for m in 0..=b as i64 {
        let Some(ca) = table.get_ref(a as i64, top - m) else {
            continue;
        };
        let cb = table.get_ref(b as i64, m).expect("m ≤ b");
        let term = ca * cb;
        if m % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Exact `J_q(a,b)` with its phase tag.
pub fn kravchuk_j(a: usize, b: usize, q: i64) -> KravchukJ {
    KravchukJ {
        k: kravchuk_k(a, b, q),
        pow2: (a + b) as u32,
        phase: (b % 4) as u8,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn quad(a: usize, b: usize, q: i64) -> Complex64 {
        // trapezoid rule is exact for trigonometric polynomials below the node count
        let n = 128;
        let mut acc = Complex64::zero();
        for t in 0..n {
            let x = 2.0 * std::f64::consts::PI * t as f64 / n as f64;
            acc += Complex64::from_polar(1.0, -(q as f64) * x)
                * x.cos().powi(a as i32)
                * x.sin().powi(b as i32);
        }
        acc / n as f64
    }

    #[test]
    fn small_values() {
        assert_eq!(kravchuk_j(0, 0, 0).to_rational_parts().0, BigRational::one());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(kravchuk_j(2, 0, 0).to_rational_parts().0, half);
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(kravchuk_j(2, 0, 2).to_rational_parts().0, quarter);
        assert!(kravchuk_j(1, 0, 0).is_zero());
        assert!(kravchuk_j(3, 2, 2).is_zero());
    }

    #[test]
    fn matches_quadrature() {
        for a in 0..=16usize {
            for b in 0..=16 - a {
                for q in -16..=16i64 {
                    let exact = kravchuk_j(a, b, q).to_complex();
                    let num = quad(a, b, q);
                    assert!((exact - num).norm() < 1e-12, "J_{q}({a},{b}): {exact} vs {num}");
                }
            }
        }
    }
}
