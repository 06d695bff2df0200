//! Mean stabilizer purity for the tilted charge `Σ_j n̂·σ_j`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::kravchuk::kravchuk_k_with;
use super::{binomial_big, to_f64, BinomialTable};
use crate::error::{Error, Result};
use crate::sectors::{sector_popcount, Direction};

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("direction components are finite")
}

/// `(f, g, w)` of a direction, exactly from its binary64 components.
fn shape_factors(n: &Direction) -> (BigRational, BigRational, BigRational) {
    let [x, y, z] = n.components().map(exact);
    let f = (&x - &y - &z) * (&x + &y - &z) * (&x - &y + &z) * (&x + &y + &z);
    let (x2, y2, z2) = (&x * &x, &y * &y, &z * &z);
    let w = &x2 * &x2 + &y2 * &y2 + &z2 * &z2;
    let six = BigRational::from_integer(6.into());
    let g = &w - six * (&x2 * &y2 + &x2 * &z2 + &y2 * &z2);
    (f, g, w)
}

/// Exact ensemble mean of `Ξ₂` in sector `q` of the charge along `n̂`, treating
/// the binary64 components of `n̂` as exact rationals.
pub fn mean_sp2_tilted_exact(n_qubits: usize, charge: i64, n: &Direction) -> Result<BigRational> {
    if n_qubits == 0 {
        return Err(Error::Domain("at least one qubit required".into()));
    }
    let pop = sector_popcount(n_qubits, charge).ok_or(Error::EmptySector { n_qubits, charge })?;
    let l = n_qubits as i64;
    let t = BinomialTable::new(n_qubits);
    let (f, g, w) = shape_factors(n);
    let one = BigRational::one();
    let rat = |v: BigInt| BigRational::from_integer(v);
    let top = (l + charge) / 2;

    let rf = (&f - &one) / rat(4.into());
    let rg = (&g - &one) / rat(8.into());
    let (mut i1, mut i2, mut i3) = (BigRational::zero(), BigRational::zero(), BigRational::zero());
    let (mut pf, mut pg, mut pw) = (one.clone(), one.clone(), one.clone());
    for k in 0..=l {
        let ck = t.get(l, k);
        let mut s1 = BigInt::zero();
        let mut s2 = BigInt::zero();
        for j in 0..=k {
            let Some(c) = t.get_ref(l - k, top - j) else {
                continue;
            };
            let ckj2 = t.get(k, j).pow(2);
            s1 += &ckj2 * c;
            s2 += &ckj2 * &ckj2 * c;
        }
        if !s1.is_zero() && !pf.is_zero() {
            i1 += &pf * rat(&ck * &s1 * &s1);
        }
        if !s2.is_zero() && !pg.is_zero() {
            i2 += &pg * rat(&ck * &s2);
        }
        let kk = kravchuk_k_with(&t, (l - k) as usize, k as usize, charge);
        if !kk.is_zero() {
            i3 += &pw * rat(&ck * kk.pow(4));
        }
        pf *= &rf;
        pg *= &rg;
        pw *= &w;
    }
    i1 *= rat(12.into());
    i2 *= rat(8.into());
    i3 = i3 * rat(4.into()) / rat(BigInt::one() << n_qubits);

    let d = t.get(l, pop as i64);
    let denom = rat(BigInt::from(24) * binomial_big(&(&d + 3), 4));
    Ok((i1 + i2 + i3) / denom)
}

/// [`mean_sp2_tilted_exact`] rounded to `f64`.
pub fn mean_sp2_tilted(n_qubits: usize, charge: i64, n: &Direction) -> Result<f64> {
    mean_sp2_tilted_exact(n_qubits, charge, n).map(|v| to_f64(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::mean_sp2;
    use crate::sectors::charges;

    #[test]
    fn z_direction_reproduces_axis_mean() {
        for l in 1..=8usize {
            for q in charges(l) {
                let a = mean_sp2_tilted(l, q, &Direction::Z).unwrap();
                let b = to_f64(&mean_sp2(l, q).unwrap());
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn axis_directions_agree_exactly() {
        for l in 1..=6usize {
            for q in charges(l) {
                let z = mean_sp2_tilted_exact(l, q, &Direction::Z).unwrap();
                assert_eq!(z, mean_sp2_tilted_exact(l, q, &Direction::X).unwrap());
                assert_eq!(z, mean_sp2_tilted_exact(l, q, &Direction::Y).unwrap());
                assert_eq!(z, mean_sp2_tilted_exact(l, q, &Direction::Z.neg()).unwrap());
            }
        }
    }

    #[test]
    fn symmetric_under_permutation_and_reflection() {
        let n = Direction::normalized(0.3, -0.5, 0.8).unwrap();
        let [a, b, c] = n.components();
        let perms = [[b, c, a], [c, a, b], [a, c, b], [-a, -b, -c]];
        let base = mean_sp2_tilted(6, 2, &n).unwrap();
        for p in perms {
            let m = Direction::new(p[0], p[1], p[2]).unwrap();
            let v = mean_sp2_tilted(6, 2, &m).unwrap();
            assert!((v - base).abs() < 1e-12 * base);
        }
    }

    #[test]
    fn tilting_increases_magic_at_q0() {
        let z = mean_sp2_tilted(8, 0, &Direction::Z).unwrap();
        let t = mean_sp2_tilted(8, 0, &Direction::from_theta(0.6)).unwrap();
        assert!(t < z);
    }
}
