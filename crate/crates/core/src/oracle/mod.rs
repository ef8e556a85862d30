//! Ground-truth engines: the error term `Z = ||Ax||^2 - ||x||^2`, collision
//! counts between column supports, exhaustive and Monte Carlo moments of
//! `Z`, exact Rademacher form norms, and exact binomial / hypergeometric
//! moments.

mod distributions;
mod enumerate;
mod monte_carlo;

use serde::Serialize;

pub use distributions::{binomial_moment_exact, hypergeometric_moment_exact, BinomialSpec};
pub use enumerate::{
    enumerate_z, exact_failure_probability, exact_moment_z, exact_raw_moment_z,
    rademacher_linear_norm_exact, rademacher_quadratic_norm_exact, EnumerationBudget,
    MAX_EXACT_FORM_LEN,
};
pub use monte_carlo::{mc_failure_count, mc_failure_rate, mc_moment_z, mc_z_samples, FailureTally};

use crate::bounds::QuadForm;
use crate::error::Result;
use crate::sketch::SparseSketch;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MomentMethod {
    Exact,
    MonteCarlo { stderr: f64, trials: u64 },
    Bound,
}

/// A p-norm `||.||_p` together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub p: f64,
    pub value: f64,
    #[serde(flatten)]
    pub method: MomentMethod,
}

impl MomentEstimate {
    pub fn exact(p: f64, value: f64) -> Self {
        Self {
            p,
            value,
            method: MomentMethod::Exact,
        }
    }

    pub fn monte_carlo(p: f64, value: f64, stderr: f64, trials: u64) -> Self {
        Self {
            p,
            value,
            method: MomentMethod::MonteCarlo { stderr, trials },
        }
    }

    pub fn stderr(&self) -> Option<f64> {
        match self.method {
            MomentMethod::MonteCarlo { stderr, .. } => Some(stderr),
            _ => None,
        }
    }

    pub fn trials(&self) -> Option<u64> {
        match self.method {
            MomentMethod::MonteCarlo { trials, .. } => Some(trials),
            _ => None,
        }
    }
}

/// `||Ax||^2 - ||x||^2`, which for unit `x` is the JL error term `Z`.
///
/// The squared norm is accumulated from the unscaled product and divided by
/// `s` once, so a basis vector yields exactly zero.
pub fn error_z<A: SparseSketch + ?Sized>(matrix: &A, x: &[f64]) -> Result<f64> {
    let y = matrix.apply_unscaled(x)?;
    let s = matrix.params().s() as f64;
    let norm_y = y.iter().map(|v| v * v).sum::<f64>();
    let norm_x = x.iter().map(|v| v * v).sum::<f64>();
    Ok(norm_y / s - norm_x)
}

/// Pairwise support intersection sizes `Q[i][j]`, zero on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionTable {
    n: usize,
    q: Vec<u32>,
}

impl CollisionTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.q[i * self.n + j]
    }

    /// The quadratic form with entries `Q[i][j] * x_i * x_j`.
    pub fn weighted_form(&self, x: &[f64]) -> QuadForm {
        QuadForm::from_fn(self.n, |i, j| {
            if i == j {
                0.0
            } else {
                self.get(i, j) as f64 * x[i] * x[j]
            }
        })
    }
}

pub(crate) fn sorted_intersection(a: &[u32], b: &[u32]) -> u32 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

pub fn collision_table<A: SparseSketch + ?Sized>(matrix: &A) -> CollisionTable {
    let n = matrix.params().n();
    let mut q = vec![0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let c = sorted_intersection(matrix.rows(i), matrix.rows(j));
            q[i * n + j] = c;
            q[j * n + i] = c;
        }
    }
    CollisionTable { n, q }
}
