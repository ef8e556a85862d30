use serde::Serialize;

use super::linear::hitczenko_bound;
use super::QuadForm;
use crate::error::{Error, Result};
use crate::oracle::rademacher_linear_norm_exact;

/// Tails longer than this use the Hitczenko estimate for the inner norms.
pub const EXACT_TAIL_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerNormMode {
    ExactEnumeration,
    Hitczenko,
}

impl InnerNormMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InnerNormMode::ExactEnumeration => "exact_enumeration",
            InnerNormMode::Hitczenko => "hitczenko",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadFormBound {
    pub value: f64,
    /// `sum_{i,j <= q} |a_ij|`
    pub head: f64,
    /// `sqrt(q) * sqrt(sum_i ||sum_{j > q} a_ij sigma_j||_q^2)`
    pub tail: f64,
    /// Mode actually used for the inner norms.
    pub mode: InnerNormMode,
}

/// Moment bound for `sigma^T A sigma` that keeps the top-left `q x q` block
/// in `l1` and treats the rest through Rademacher linear forms. The index
/// order of `a` is taken as the magnitude order; callers permute first (see
/// [`super::descending_magnitude_order`]).
pub fn quadform_bound(a: &QuadForm, q: usize, mode: InnerNormMode) -> Result<QuadFormBound> {
    let n = a.n();
    if q == 0 || q > n {
        return Err(Error::InvalidOrder {
            order: q as f64,
            reason: format!("need 1 <= q <= n = {n}"),
        });
    }
    let head: f64 = (0..q).flat_map(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| a.get(i, j).abs()).sum();
    let tail_len = n - q;
    let mode = if mode == InnerNormMode::ExactEnumeration && tail_len > EXACT_TAIL_LIMIT {
        log::warn!(
            "tail length {tail_len} exceeds {EXACT_TAIL_LIMIT}; using the Hitczenko estimate for inner norms"
        );
        InnerNormMode::Hitczenko
    } else {
        mode
    };
    let mut inner_sq = 0.0;
    if tail_len > 0 {
        for i in 0..n {
            let coeffs = &a.row(i)[q..];
            let inner = match mode {
                InnerNormMode::ExactEnumeration => rademacher_linear_norm_exact(coeffs, q as f64)?,
                InnerNormMode::Hitczenko => hitczenko_bound(coeffs, q),
            };
            inner_sq += inner * inner;
        }
    }
    let tail = (q as f64).sqrt() * inner_sq.sqrt();
    Ok(QuadFormBound {
        value: head + tail,
        head,
        tail,
        mode,
    })
}
