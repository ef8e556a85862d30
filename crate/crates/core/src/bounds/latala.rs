//! Moment formulas for sums of independent variables: the threshold form
//! for symmetric summands and the supremum form for i.i.d. nonnegative
//! summands.

use serde::Serialize;

use crate::error::{Error, Result};

/// Grid size used when no explicit grid is requested.
pub const DEFAULT_ORDER_GRID: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatalaSearch {
    pub t_min: f64,
    /// Upper end of the bracket. When absent the bracket grows geometrically
    /// from 1 until the condition holds.
    pub t_max: Option<f64>,
    pub rel_tol: f64,
    pub max_expansions: u32,
}

impl Default for LatalaSearch {
    fn default() -> Self {
        Self {
            t_min: 1e-30,
            t_max: None,
            rel_tol: 1e-6,
            max_expansions: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatalaThreshold {
    pub t: f64,
    pub q: f64,
    /// `sum_i log E[(1 + X_i/T)^q]` at the returned `T`.
    pub residual: f64,
    /// Set when the condition already holds at `t_min` (e.g. all summands zero).
    pub degenerate: bool,
}

/// `E|1 + a sigma / t|^q` for a Rademacher `sigma`.
pub fn rademacher_phi(a: f64, t: f64, q: f64) -> f64 {
    let r = a / t;
    0.5 * ((1.0 + r).abs().powf(q) + (1.0 - r).abs().powf(q))
}

/// Smallest `T` (to `rel_tol`) with `sum_i log phi(i, T) <= q`, where
/// `phi(i, T) = E[(1 + X_i/T)^q]` for independent symmetric `X_i`.
/// The condition decreases in `T`, so the search is a geometric bisection.
pub fn latala_symmetric_t<F>(phi: F, count: usize, q: f64, search: &LatalaSearch) -> Result<LatalaThreshold>
where
    F: Fn(usize, f64) -> f64,
{
    if !(q >= 2.0 && q.is_finite()) {
        return Err(Error::InvalidOrder {
            order: q,
            reason: "the symmetric threshold needs q >= 2".into(),
        });
    }
    let condition = |t: f64| (0..count).map(|i| phi(i, t).ln()).sum::<f64>();

    let at_min = condition(search.t_min);
    if at_min <= q {
        return Ok(LatalaThreshold {
            t: search.t_min,
            q,
            residual: at_min,
            degenerate: true,
        });
    }

    let (mut lo, mut hi, mut at_hi) = match search.t_max {
        Some(t_max) => {
            let c = condition(t_max);
            if c > q {
                return Err(Error::BracketFailure { t: t_max, residual: c, q });
            }
            (search.t_min, t_max, c)
        }
        None => {
            let mut lo = search.t_min;
            let mut hi = 1.0f64.max(search.t_min);
            let mut c = condition(hi);
            let mut expansions = 0;
            while c > q {
                if expansions == search.max_expansions || !hi.is_finite() {
                    return Err(Error::BracketFailure { t: hi, residual: c, q });
                }
                lo = hi;
                hi *= 2.0;
                c = condition(hi);
                expansions += 1;
            }
            (lo, hi, c)
        }
    };

    while hi / lo > 1.0 + search.rel_tol {
        let mid = (lo * hi).sqrt();
        let c = condition(mid);
        if c <= q {
            hi = mid;
            at_hi = c;
        } else {
            lo = mid;
        }
    }
    Ok(LatalaThreshold {
        t: hi,
        q,
        residual: at_hi,
        degenerate: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Supremum {
    pub value: f64,
    pub argmax: f64,
}

/// `grid` log-spaced orders from 1 to `q` inclusive.
pub fn log_spaced_orders(q: f64, grid: usize) -> Vec<f64> {
    if q <= 1.0 || grid < 2 {
        return vec![1.0];
    }
    let step = q.ln() / (grid - 1) as f64;
    let mut t: Vec<f64> = (0..grid).map(|k| (k as f64 * step).exp()).collect();
    t[grid - 1] = q;
    t
}

/// Maximum of `f` over the log-spaced grid on `[1, q]` plus any candidate
/// orders inside that range.
pub fn sup_over_orders<F: Fn(f64) -> f64>(q: f64, grid: usize, candidates: &[f64], f: F) -> Supremum {
    let mut best = Supremum {
        value: f64::NEG_INFINITY,
        argmax: 1.0,
    };
    let inside = candidates.iter().copied().filter(|&t| (1.0..=q).contains(&t));
    for t in log_spaced_orders(q, grid).into_iter().chain(inside) {
        let v = f(t);
        if v > best.value {
            best = Supremum { value: v, argmax: t };
        }
    }
    best
}

/// `sup_{1 <= t <= q} (q/t) (n/q)^(1/t) ||X||_t` for i.i.d. nonnegative
/// summands, with `norm(t) = ||X||_t`.
pub fn latala_nonneg_bound_with<F: Fn(f64) -> f64>(
    norm: F,
    n: f64,
    q: f64,
    grid: usize,
    candidates: &[f64],
) -> Result<Supremum> {
    if !(q >= 1.0 && q <= n) {
        return Err(Error::InvalidOrder {
            order: q,
            reason: format!("need 1 <= q <= n = {n}"),
        });
    }
    Ok(sup_over_orders(q, grid, candidates, |t| {
        (q / t) * (n / q).powf(1.0 / t) * norm(t)
    }))
}

pub fn latala_nonneg_bound<F: Fn(f64) -> f64>(norm: F, n: f64, q: f64) -> Result<f64> {
    Ok(latala_nonneg_bound_with(norm, n, q, DEFAULT_ORDER_GRID, &[])?.value)
}
