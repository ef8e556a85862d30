//! Moment bound for sums of many Bernoulli variables.

use crate::bounds::latala::{sup_over_orders, Supremum};
use crate::oracle::BinomialSpec;

/// `B = q / (alpha * max(N, q))`.
pub fn manybin_b(spec: &BinomialSpec, q: f64) -> f64 {
    q / (spec.alpha() * (spec.n_trials() as f64).max(q))
}

/// `q / ln B` when `B >= e`, else `q / B`. Constant 1.
pub fn manybin_bound(spec: &BinomialSpec, q: f64) -> f64 {
    let b = manybin_b(spec, q);
    if b >= std::f64::consts::E {
        q / b.ln()
    } else {
        q / b
    }
}

/// Grid maximum of `(q/t) B^(-1/t)` over `t in [1, q]`, with the stationary
/// point `t = ln B` added as a candidate.
pub fn manybin_sup(q: f64, b: f64, grid: usize) -> Supremum {
    let candidate = [b.ln()];
    sup_over_orders(q, grid, &candidate, |t| (q / t) * b.powf(-1.0 / t))
}
