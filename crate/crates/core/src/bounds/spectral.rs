use nalgebra::DMatrix;

use super::QuadForm;

/// Forms up to this size go through the dense symmetric eigensolver.
pub const EIGEN_SOLVER_MAX_N: usize = 64;
pub const POWER_ITERATION_TOL: f64 = 1e-10;
pub const POWER_ITERATION_CAP: usize = 100_000;

pub fn frobenius_norm(a: &QuadForm) -> f64 {
    a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest eigenvalue magnitude from a full symmetric eigendecomposition.
pub fn operator_norm_eigen(a: &QuadForm) -> f64 {
    let n = a.n();
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_row_slice(n, n, a.as_slice());
    m.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Largest eigenvalue magnitude by power iteration on `A`, tracking
/// `||A v||` for unit `v`. A `±lambda` pair makes `v` oscillate but leaves
/// `||A v||` converging to `lambda`. Stops when successive estimates agree to
/// `tol` relative, or after `cap` iterations.
pub fn operator_norm_power(a: &QuadForm, tol: f64, cap: usize) -> f64 {
    let n = a.n();
    if n == 0 {
        return 0.0;
    }
    // Deterministic, non-symmetric start so it is not orthogonal to the
    // top eigenvector in structured cases.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 + 1.0).sqrt() * 1e-3).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut w = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..cap {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = a.row(i).iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let next = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if next == 0.0 {
            return 0.0;
        }
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / next);
        let done = (next - estimate).abs() <= tol * next;
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// `sup_{|y|=1} |y^T A y|`: eigensolver up to [`EIGEN_SOLVER_MAX_N`], power
/// iteration beyond.
pub fn operator_norm(a: &QuadForm) -> f64 {
    if a.n() <= EIGEN_SOLVER_MAX_N {
        operator_norm_eigen(a)
    } else {
        operator_norm_power(a, POWER_ITERATION_TOL, POWER_ITERATION_CAP)
    }
}

/// `sqrt(p) ||A||_F + p ||A||_op`.
pub fn hanson_wright_bound(a: &QuadForm, p: f64) -> f64 {
    p.sqrt() * frobenius_norm(a) + p * operator_norm(a)
}
