//! Dense Hermitian eigensolver with a residual and orthonormality contract.

use faer::{Mat, Par, Side};
use num_complex::Complex64;

use super::HamiltonianMatrix;
use crate::error::{Error, Result};

/// Relative residual and orthonormality tolerance.
pub const EIG_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` belongs to `values[k]`; its largest-modulus entry is real and positive.
    pub vectors: Mat<Complex64>,
    /// `max_k ‖Hv_k - λ_k v_k‖₂ / ‖H‖₂`.
    pub max_residual: f64,
    /// `max |V†V - 1|`.
    pub max_orthonormality_error: f64,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.nrows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn solver_error(e: impl std::fmt::Debug) -> Error {
    Error::Numerical(format!("eigensolver failed: {e:?}"))
}

fn raw_eigen(m: &Mat<Complex64>) -> Result<(Vec<f64>, Mat<Complex64>)> {
    // faer would otherwise split blocked kernels over the current rayon pool,
    // which makes the rounding depend on the worker count
    faer::set_global_parallelism(Par::Seq);
    let n = m.nrows();
    let real = (0..n).all(|j| (0..n).all(|i| m[(i, j)].im == 0.0));
    if real {
        let re = Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)].re);
        let e = re.self_adjoint_eigen(Side::Lower).map_err(solver_error)?;
        let s = e.S().column_vector();
        let u = e.U();
        let vals = (0..n).map(|k| s[k]).collect();
        Ok((vals, Mat::from_fn(n, n, |i, j| Complex64::new(u[(i, j)], 0.0))))
    } else {
        let e = m.self_adjoint_eigen(Side::Lower).map_err(solver_error)?;
        let s = e.S().column_vector();
        let vals = (0..n).map(|k| s[k].re).collect();
        Ok((vals, e.U().to_owned()))
    }
}

/// Eigen-decomposition of a Hermitian matrix, sorted ascending with a fixed
/// eigenvector phase. The exact zero matrix returns the identity basis.
pub fn diagonalize(h: &HamiltonianMatrix) -> Result<EigenSystem> {
    let m = &h.matrix;
    let n = m.nrows();
    let scale = h.max_abs();
    let herm = h.hermiticity_defect();
    if herm > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!("matrix is not Hermitian: defect {herm:e}")));
    }
    if scale == 0.0 {
        return Ok(EigenSystem {
            values: vec![0.0; n],
            vectors: Mat::identity(n, n),
            max_residual: 0.0,
            max_orthonormality_error: 0.0,
        });
    }

    let (vals, vecs) = raw_eigen(m)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
    let mut vectors = Mat::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    for k in 0..n {
        let mut best = 0;
        let mut best_mod = -1.0;
        for i in 0..n {
            let a = vectors[(i, k)].norm();
            if a > best_mod * (1.0 + 1e-12) {
                best = i;
                best_mod = a;
            }
        }
        let phase = vectors[(best, k)].conj() / best_mod;
        for i in 0..n {
            vectors[(i, k)] *= phase;
        }
        vectors[(best, k)] = Complex64::new(vectors[(best, k)].norm(), 0.0);
    }

    // ‖H‖₂ of a Hermitian matrix is its largest |λ|
    let norm2 = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let hv = m * &vectors;
    let mut max_residual = 0.0f64;
    for k in 0..n {
        let r: f64 = (0..n)
            .map(|i| (hv[(i, k)] - vectors[(i, k)] * values[k]).norm_sqr())
            .sum();
        max_residual = max_residual.max(r.sqrt() / norm2);
    }
    let gram = vectors.adjoint() * &vectors;
    let mut max_orth = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            max_orth = max_orth.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    if max_residual > EIG_TOL || max_orth > EIG_TOL {
        return Err(Error::Numerical(format!(
            "eigensolver contract failed: residual {max_residual:e}, orthonormality {max_orth:e} (n = {n})"
        )));
    }
    Ok(EigenSystem {
        values,
        vectors,
        max_residual,
        max_orthonormality_error: max_orth,
    })
}
