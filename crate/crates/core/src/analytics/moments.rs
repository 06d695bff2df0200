//! Exact first and second moments of `Ξ₂` over the Haar×U(1) ensemble.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::kravchuk::kravchuk_k_with;
use super::{binomial_big, neg_log2, BinomialTable};
use crate::error::{Error, Result};
use crate::sectors::sector_popcount;

/// Which coefficient multiplies the `𝒦₂` sum in the second moment.
///
/// The term-by-term permutation bookkeeping gives `960·d_q + 5920`; a grouped
/// form in circulation reads `960·2^{5L} + 5920`. Only the former reproduces
/// the exact `S₈` permutation sum (checked in the integration tests) and the
/// sampled variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum K2Coefficient {
    #[default]
    SectorDimension,
    Printed,
}

/// Exact moments of the 2-stabilizer purity in one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMoments {
    pub n_qubits: usize,
    pub charge: i64,
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
    /// `-log₂ 𝔼[Ξ₂]`, a lower bound on `𝔼[M₂]` by Jensen.
    pub m2_mean_bound: f64,
}

fn check_sector(n_qubits: usize, charge: i64) -> Result<usize> {
    if n_qubits == 0 {
        return Err(Error::Domain("at least one qubit required".into()));
    }
    sector_popcount(n_qubits, charge).ok_or(Error::EmptySector { n_qubits, charge })
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `h(L,q) = Σ_k C(L,k) K_q(L-k,k)⁴`; zero when `L - q` is odd or `|q| > L`.
pub fn h_sum(n_qubits: usize, charge: i64) -> BigInt {
    if sector_popcount(n_qubits, charge).is_none() {
        return BigInt::zero();
    }
    let t = BinomialTable::new(n_qubits);
    h_sum_with(&t, n_qubits, charge)
}

fn h_sum_with(t: &BinomialTable, l: usize, q: i64) -> BigInt {
    (0..=l)
        .map(|k| {
            let kk = kravchuk_k_with(t, l - k, k, q);
            t.get(l as i64, k as i64) * kk.pow(4)
        })
        .sum()
}

fn dim_big(t: &BinomialTable, l: usize, k: usize) -> BigInt {
    t.get(l as i64, k as i64)
}

/// Exact `𝔼[Ξ₂] = (12d² + 8d + 4h/2^L) / (4!·C(d+3,4))`.
pub fn mean_sp2(n_qubits: usize, charge: i64) -> Result<BigRational> {
    let k = check_sector(n_qubits, charge)?;
    let t = BinomialTable::new(n_qubits);
    Ok(mean_with(&t, n_qubits, charge, k))
}

fn mean_with(t: &BinomialTable, l: usize, q: i64, k: usize) -> BigRational {
    let d = dim_big(t, l, k);
    let h = h_sum_with(t, l, q);
    let num = ratio(BigInt::from(12) * &d * &d + BigInt::from(8) * &d, BigInt::one())
        + ratio(BigInt::from(4) * h, pow2(l));
    num / ratio(BigInt::from(24) * binomial_big(&(&d + 3), 4), BigInt::one())
}

/// Unconstrained Haar average `4/(2^L+3)`.
pub fn haar_mean_sp2(n_qubits: usize) -> BigRational {
    ratio(BigInt::from(4), pow2(n_qubits) + 3)
}

/// Gaussian integer accumulator for terms `(-i)^phase · value`.
#[derive(Default)]
struct GaussAcc {
    re: BigInt,
    im: BigInt,
}

impl GaussAcc {
    fn add(&mut self, phase: usize, v: BigInt) {
        match phase % 4 {
            0 => self.re += v,
            1 => self.im -= v,
            2 => self.re -= v,
            _ => self.im += v,
        }
    }

    fn into_real(self, what: &str) -> Result<BigInt> {
        if !self.im.is_zero() {
            return Err(Error::Numerical(format!(
                "{what}: imaginary part {} does not cancel",
                self.im
            )));
        }
        Ok(self.re)
    }
}

/// `2^{5L}·𝒦₁(L,q)`, the eight-fold Fourier term with the `(3,3,1)` cycle pattern.
///
/// Summed over the four-way split `n_A+n_B+n_C+n_D = L` of qubits, which is the
/// nested `(k, j, p)` sum reorganized by multinomial coefficients. Every
/// kernel has `a + b = L`, so the sum is an integer over `4^L`.
pub fn k1_scaled(n_qubits: usize, charge: i64) -> Result<BigRational> {
    check_sector(n_qubits, charge)?;
    let t = BinomialTable::new(n_qubits);
    k1_with(&t, n_qubits, charge)
}

fn k1_with(t: &BinomialTable, l: usize, q: i64) -> Result<BigRational> {
    // K_q(L-b, b) for b = 0..=L
    let kk: Vec<BigInt> = (0..=l).map(|b| kravchuk_k_with(t, l - b, b, q)).collect();
    let cubes: Vec<BigInt> = kk.iter().map(|v| v.pow(3)).collect();
    let mut acc = GaussAcc::default();
    for na in 0..=l {
        let ca = dim_big(t, l, na);
        for nb in 0..=l - na {
            let cab = &ca * dim_big(t, l - na, nb);
            for nc in 0..=l - na - nb {
                let nd = l - na - nb - nc;
                let b1 = nb + nd;
                let b2 = na + nb;
                let b3 = na + nd;
                if kk[b1].is_zero() || kk[b2].is_zero() || kk[b3].is_zero() {
                    continue;
                }
                let mult = &cab * dim_big(t, l - na - nb, nc);
                let v = mult * &cubes[b1] * &cubes[b2] * &kk[b3];
                // (-1)^{n_B} is (-i)^{2 n_B}
                acc.add(3 * b1 + 3 * b2 + b3 + 2 * nb, v);
            }
        }
    }
    Ok(ratio(acc.into_real("K1")?, pow2(2 * l)))
}

/// `𝒦₂(L,q) = Σ_k C(L,2k) C(2k,k)² C(L-2k, (L-2k+q)/2)²`.
pub fn k2_sum(n_qubits: usize, charge: i64) -> BigInt {
    let t = BinomialTable::new(n_qubits);
    k23_with(&t, n_qubits, charge, 2)
}

/// `𝒦₃`, the same sum with cubed binomials.
pub fn k3_sum(n_qubits: usize, charge: i64) -> BigInt {
    let t = BinomialTable::new(n_qubits);
    k23_with(&t, n_qubits, charge, 3)
}

fn k23_with(t: &BinomialTable, l: usize, q: i64, power: u32) -> BigInt {
    let l = l as i64;
    let mut acc = BigInt::zero();
    for k in 0..=l / 2 {
        let rest = l - 2 * k;
        if (rest + q).rem_euclid(2) != 0 {
            continue;
        }
        let inner = t.get(2 * k, k) * t.get(rest, (rest + q) / 2);
        acc += t.get(l, 2 * k) * inner.pow(power);
    }
    acc
}

/// `2^{3L}·𝒦₄(L,q) = 2^{3L} Σ C(L,k) C(k,j) C(L-k,p) J_q(k-j, L-k-p)⁴ J_0(j,p)⁴`.
pub fn k4_scaled(n_qubits: usize, charge: i64) -> Result<BigRational> {
    check_sector(n_qubits, charge)?;
    let t = BinomialTable::new(n_qubits);
    k4_with(&t, n_qubits, charge)
}

fn k4_with(t: &BinomialTable, l: usize, q: i64) -> Result<BigRational> {
    // fourth powers of K_q(a,b) and K_0(a,b) for a + b ≤ L
    let table = |qq: i64| -> Vec<Vec<BigInt>> {
        (0..=l)
            .map(|a| (0..=l - a).map(|b| kravchuk_k_with(t, a, b, qq).pow(4)).collect())
            .collect()
    };
    let kq = table(q);
    let k0 = table(0);
    let mut acc = GaussAcc::default();
    for k in 0..=l {
        let ck = dim_big(t, l, k);
        for j in 0..=k {
            let ckj = &ck * dim_big(t, k, j);
            for p in 0..=l - k {
                let (a1, b1) = (k - j, l - k - p);
                if kq[a1][b1].is_zero() || k0[j][p].is_zero() {
                    continue;
                }
                let v = &ckj * dim_big(t, l - k, p) * &kq[a1][b1] * &k0[j][p];
                acc.add(4 * b1 + 4 * p, v);
            }
        }
    }
    Ok(ratio(acc.into_real("K4")?, pow2(l)))
}

/// Exact `𝔼[Ξ₂²]`.
pub fn second_moment_sp2(n_qubits: usize, charge: i64) -> Result<BigRational> {
    second_moment_sp2_with(n_qubits, charge, K2Coefficient::SectorDimension)
}

/// Exact `𝔼[Ξ₂²]` with an explicit choice of the `𝒦₂` coefficient.
pub fn second_moment_sp2_with(
    n_qubits: usize,
    charge: i64,
    coefficient: K2Coefficient,
) -> Result<BigRational> {
    let k = check_sector(n_qubits, charge)?;
    let t = BinomialTable::new(n_qubits);
    second_with(&t, n_qubits, charge, k, coefficient)
}

fn second_with(
    t: &BinomialTable,
    l: usize,
    q: i64,
    k: usize,
    coefficient: K2Coefficient,
) -> Result<BigRational> {
    let int = |v: BigInt| ratio(v, BigInt::one());
    let n = |v: i64| BigInt::from(v);
    let d = dim_big(t, l, k);
    let hp = ratio(h_sum_with(t, l, q), pow2(l));
    let d2 = &d * &d;
    let d3 = &d2 * &d;

    let mut total = hp.clone()
        * (int(n(96) * &d2 + n(640) * &d + n(1536)) + hp.clone() * int(n(16)));
    total += int(&d * (n(144) * &d3 + n(3648) * &d2 + n(17152) * &d + n(8704)));
    total += k1_with(t, l, q)? * int(n(256));
    let c2 = match coefficient {
        K2Coefficient::SectorDimension => n(960) * &d + n(5920),
        K2Coefficient::Printed => n(960) * pow2(5 * l) + n(5920),
    };
    total += int(c2 * k23_with(t, l, q, 2));
    total += int(n(1152) * k23_with(t, l, q, 3));
    total += k4_with(t, l, q)? * int(n(96));

    let denom = n(40320) * binomial_big(&(&d + 7), 8);
    Ok(total / int(denom))
}

/// Exact `Δ²[Ξ₂] = 𝔼[Ξ₂²] - 𝔼[Ξ₂]²`.
pub fn variance_sp2(n_qubits: usize, charge: i64) -> Result<BigRational> {
    Ok(analytic_moments(n_qubits, charge)?.variance)
}

/// Mean, second moment and variance of `Ξ₂` in one pass.
pub fn analytic_moments(n_qubits: usize, charge: i64) -> Result<AnalyticMoments> {
    let k = check_sector(n_qubits, charge)?;
    let t = BinomialTable::new(n_qubits);
    let mean = mean_with(&t, n_qubits, charge, k);
    let second_moment = second_with(&t, n_qubits, charge, k, K2Coefficient::SectorDimension)?;
    let variance = &second_moment - &mean * &mean;
    Ok(AnalyticMoments {
        n_qubits,
        charge,
        m2_mean_bound: neg_log2(&mean),
        mean,
        second_moment,
        variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sectors::charges;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_sum(2, 0), BigInt::from(32));
        assert_eq!(h_sum(3, 0), BigInt::zero());
        for l in 1..=12 {
            assert_eq!(h_sum(l, l as i64), pow2(l));
        }
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_sp2(2, 0).unwrap(), r(4, 5));
        assert_eq!(mean_sp2(3, 1).unwrap(), r(3, 5));
        for l in 1..=12 {
            assert_eq!(mean_sp2(l, l as i64).unwrap(), BigRational::one());
            assert_eq!(mean_sp2(l, -(l as i64)).unwrap(), BigRational::one());
        }
        assert!(matches!(mean_sp2(3, 0), Err(Error::EmptySector { .. })));
    }

    #[test]
    fn second_moment_examples() {
        assert_eq!(second_moment_sp2(2, 0).unwrap(), r(68, 105));
        assert_eq!(variance_sp2(2, 0).unwrap(), r(4, 525));
        assert_eq!(second_moment_sp2(3, 1).unwrap(), r(13, 35));
        for l in 1..=10 {
            assert_eq!(second_moment_sp2(l, l as i64).unwrap(), BigRational::one());
            assert!(variance_sp2(l, l as i64).unwrap().is_zero());
        }
    }

    #[test]
    fn one_dimensional_sector_terms_reduce_to_one() {
        for l in 1..=8 {
            let q = l as i64;
            assert_eq!(k1_scaled(l, q).unwrap(), BigRational::one());
            assert_eq!(k2_sum(l, q), BigInt::one());
            assert_eq!(k3_sum(l, q), BigInt::one());
            assert_eq!(k4_scaled(l, q).unwrap(), BigRational::one());
        }
    }

    #[test]
    fn printed_coefficient_differs_beyond_trivial_sector() {
        let a = second_moment_sp2_with(4, 0, K2Coefficient::SectorDimension).unwrap();
        let b = second_moment_sp2_with(4, 0, K2Coefficient::Printed).unwrap();
        assert_ne!(a, b);
        // the printed variant overshoots the trivial bound Ξ₂² ≤ 1
        assert!(b > BigRational::one());
    }

    #[test]
    fn symmetric_and_nonnegative_variance() {
        for l in 1..=9usize {
            for q in charges(l) {
                let m = analytic_moments(l, q).unwrap();
                let n = analytic_moments(l, -q).unwrap();
                assert_eq!(m.mean, n.mean);
                assert_eq!(m.second_moment, n.second_moment);
                assert!(m.variance >= BigRational::zero());
                assert!(m.mean > BigRational::zero() && m.mean <= BigRational::one());
            }
        }
    }
}
