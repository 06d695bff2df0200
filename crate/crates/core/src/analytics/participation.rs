//! Participation-entropy averages and the sector Porter–Thomas law.

use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// `𝔼[Σ_x |c_x|^{2k}] = k!·d!/(d+k-1)!` for a Haar state of dimension `d`.
pub fn pe_moment_mean(d: u64, k: u32) -> BigRational {
    assert!(d >= 1 && k >= 1, "pe_moment_mean needs d ≥ 1 and k ≥ 1");
    // k! d! / (d+k-1)! = k! / ((d+1)(d+2)...(d+k-1))
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=k as u64 {
        num *= BigInt::from(i);
    }
    for i in 1..k as u64 {
        den *= BigInt::from(d + i);
    }
    BigRational::new(num, den)
}

/// `H_d = Σ_{p=1}^{d} 1/p`.
pub fn harmonic_number(d: u64) -> f64 {
    // summed from the small end for accuracy
    (1..=d).rev().map(|p| 1.0 / p as f64).sum()
}

/// Mean Shannon participation entropy `H_d - 1` in nats.
pub fn pe_shannon_mean_nats(d: u64) -> f64 {
    harmonic_number(d) - 1.0
}

/// Mean Shannon participation entropy in bits, `(H_d - 1)/ln 2`.
pub fn pe_shannon_mean(d: u64) -> f64 {
    pe_shannon_mean_nats(d) / LN_2
}

/// Density of `w = d·|c_x|²` for a single amplitude of a Haar state in dimension
/// `d`: `((d-1)/d)(1 - w/d)^{d-2}` on `[0, d]`.
pub fn porter_thomas_pdf(w: f64, d: u64) -> f64 {
    if d <= 1 || !(0.0..=d as f64).contains(&w) {
        return 0.0;
    }
    let d = d as f64;
    ((d - 1.0) / d) * (1.0 - w / d).powf(d - 2.0)
}

/// Cumulative distribution `1 - (1 - w/d)^{d-1}` of the same law.
pub fn porter_thomas_cdf(w: f64, d: u64) -> f64 {
    if d <= 1 {
        return if w >= 1.0 { 1.0 } else { 0.0 };
    }
    if w <= 0.0 {
        return 0.0;
    }
    let d = d as f64;
    if w >= d {
        return 1.0;
    }
    1.0 - (1.0 - w / d).powf(d - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_examples() {
        for d in 1..50 {
            assert_eq!(pe_moment_mean(d, 1), BigRational::one());
            assert_eq!(pe_moment_mean(d, 2), BigRational::new(2.into(), (d + 1).into()));
        }
        assert_eq!(pe_moment_mean(4, 3), BigRational::new(6.into(), 30.into()));
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(pe_shannon_mean(1), 0.0);
        assert!((pe_shannon_mean_nats(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn porter_thomas_normalized() {
        for d in [2u64, 3, 6, 20, 70] {
            let n = 20000;
            let h = d as f64 / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                acc += porter_thomas_pdf((i as f64 + 0.5) * h, d) * h;
            }
            assert!((acc - 1.0).abs() < 1e-6, "d = {d}: {acc}");
            let mean: f64 = (0..n)
                .map(|i| {
                    let w = (i as f64 + 0.5) * h;
                    w * porter_thomas_pdf(w, d) * h
                })
                .sum();
            assert!((mean - 1.0).abs() < 1e-6);
            assert!((porter_thomas_cdf(d as f64 * 0.3, d) - {
                let m = (0.3 * n as f64) as usize;
                (0..m).map(|i| porter_thomas_pdf((i as f64 + 0.5) * h, d) * h).sum::<f64>()
            })
            .abs()
                < 1e-6);
        }
    }
}
