//! Exact and asymptotic ensemble statistics of the stabilizer purity.
//!
//! Everything exact is evaluated in arbitrary-precision integers and rationals,
//! at every system size; floats appear only at the very end (`to_f64`, `neg_log2`).

mod asymptotic;
mod kravchuk;
mod moments;
mod participation;
mod tilted;
mod typicality;

pub use asymptotic::{asymptotic_prediction, tilted_asymptotic_q0, AsymptoticPrediction};
pub use kravchuk::{kravchuk_j, kravchuk_k, KravchukJ};
pub use moments::{
    analytic_moments, haar_mean_sp2, h_sum, k1_scaled, k2_sum, k3_sum, k4_scaled, mean_sp2,
    second_moment_sp2, second_moment_sp2_with, variance_sp2, AnalyticMoments, K2Coefficient,
};
pub use participation::{
    harmonic_number, pe_moment_mean, pe_shannon_mean, pe_shannon_mean_nats, porter_thomas_cdf,
    porter_thomas_pdf,
};
pub use tilted::{mean_sp2_tilted, mean_sp2_tilted_exact};
pub use typicality::{levy_tail_bound, levy_variance_bound, LIPSCHITZ_ETA};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Pascal triangle rows `0..=n` as big integers.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        rows.push(vec![BigInt::one()]);
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(BigInt::one());
            for k in 1..i {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`; zero whenever `k < 0` or `k > n`.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        self.get_ref(n, k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn get_ref(&self, n: i64, k: i64) -> Option<&BigInt> {
        if n < 0 || k < 0 || k > n {
            return None;
        }
        self.rows.get(n as usize).map(|row| &row[k as usize])
    }
}

/// `C(n, k)` for a big `n` and small `k`.
pub(crate) fn binomial_big(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn log2_abs_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.abs().to_f64().unwrap_or(f64::NAN).log2();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap_or(f64::NAN).log2() + shift as f64
}

/// `-log₂ x` for a positive rational of any magnitude.
pub fn neg_log2(x: &BigRational) -> f64 {
    if x.numer().sign() != Sign::Plus {
        return f64::NAN;
    }
    log2_abs_int(x.denom()) - log2_abs_int(x.numer())
}
