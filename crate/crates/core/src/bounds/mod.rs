//! Closed-form moment bounds for Rademacher linear and quadratic forms and
//! for sums of independent variables.
//!
//! Every `≲` bound is evaluated with constant 1. How far each one sits from
//! the exact value is measured as a ratio; see [`calibration`].

mod binomial;
pub mod calibration;
mod latala;
mod linear;
mod quadform;
mod spectral;

pub use binomial::{manybin_b, manybin_bound, manybin_sup};
pub use latala::{
    latala_nonneg_bound, latala_nonneg_bound_with, latala_symmetric_t, log_spaced_orders,
    rademacher_phi, sup_over_orders, LatalaSearch, LatalaThreshold, Supremum,
    DEFAULT_ORDER_GRID,
};
pub use linear::{descending_magnitude_order, hitczenko_bound, khintchine_bound};
pub use quadform::{quadform_bound, InnerNormMode, QuadFormBound, EXACT_TAIL_LIMIT};
pub use spectral::{
    frobenius_norm, hanson_wright_bound, operator_norm, operator_norm_eigen, operator_norm_power,
    POWER_ITERATION_CAP, POWER_ITERATION_TOL,
};

use crate::error::{Error, Result};

/// Symmetric coefficient matrix with zero diagonal, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm {
    n: usize,
    a: Vec<f64>,
}

impl QuadForm {
    pub fn new(n: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: a.len(),
            });
        }
        for i in 0..n {
            if a[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "diagonal entry ({i}, {i}) is {}, expected 0",
                    a[i * n + i]
                )));
            }
            for j in i + 1..n {
                if a[i * n + j] != a[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(Self { n, a })
    }

    /// Builds the form from the upper triangle of `f`; the diagonal is zeroed
    /// and the lower triangle mirrored.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        Self { n, a }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    /// Reorders rows and columns so that new index `k` is old index `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: order.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &o in order {
            if o >= self.n || std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
        }
        Ok(Self::from_fn(self.n, |i, j| self.get(order[i], order[j])))
    }
}
