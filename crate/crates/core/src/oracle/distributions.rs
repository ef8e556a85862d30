use serde::Serialize;

use crate::error::{Error, Result};

/// `Bin(n_trials, alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinomialSpec {
    n_trials: u64,
    alpha: f64,
}

impl BinomialSpec {
    /// `alpha = 1` is accepted so that the full-collision case `s = m`
    /// has a binomial counterpart.
    pub fn new(n_trials: u64, alpha: f64) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::InvalidParameter("binomial needs at least one trial".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "success probability must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self { n_trials, alpha })
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

fn ln_choose(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `(sum_k exp(terms_k))^(1/q)` with the terms combined in log space.
fn norm_from_log_terms(log_terms: &[f64], q: f64) -> f64 {
    let max = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 0.0;
    }
    let sum: f64 = log_terms.iter().map(|t| (t - max).exp()).sum();
    ((max + sum.ln()) / q).exp()
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOrder {
            order: q,
            reason: "moment order must be at least 1".into(),
        })
    }
}

/// `||X||_q` for `X ~ Bin(N, alpha)` from the exact pmf.
pub fn binomial_moment_exact(spec: BinomialSpec, q: f64) -> Result<f64> {
    check_q(q)?;
    let (n, alpha) = (spec.n_trials, spec.alpha);
    if q == 1.0 {
        return Ok(n as f64 * alpha);
    }
    if alpha == 1.0 {
        return Ok(n as f64);
    }
    let (ln_a, ln_b) = (alpha.ln(), (-alpha).ln_1p());
    let mut ln_c = 0.0;
    let mut terms = Vec::with_capacity(n as usize);
    for k in 1..=n {
        // ln C(n, k) from ln C(n, k - 1)
        ln_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
        terms.push(q * (k as f64).ln() + ln_c + k as f64 * ln_a + (n - k) as f64 * ln_b);
    }
    Ok(norm_from_log_terms(&terms, q))
}

/// `||Q||_q` where `Q` is the overlap of two independent uniform `s`-subsets
/// of `[0, m)`, i.e. `Q ~ Hypergeometric(m, s, s)`:
/// `P[Q = k] = C(s, k) C(m - s, s - k) / C(m, s)`.
pub fn hypergeometric_moment_exact(m: u64, s: u64, q: f64) -> Result<f64> {
    check_q(q)?;
    if s == 0 || s > m {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= m, got s = {s}, m = {m}"
        )));
    }
    let k_min = (2 * s).saturating_sub(m);
    if k_min == s {
        return Ok(s as f64);
    }
    if q == 1.0 {
        return Ok((s * s) as f64 / m as f64);
    }
    let ln_total = ln_choose(m, s);
    let terms: Vec<f64> = (k_min.max(1)..=s)
        .map(|k| q * (k as f64).ln() + ln_choose(s, k) + ln_choose(m - s, s - k) - ln_total)
        .collect();
    Ok(norm_from_log_terms(&terms, q))
}
