//! The two-spike vector `x = (1/√2, 1/√2, 0, ..., 0)` and the moment bound
//! `U_p` that the Hanson-Wright inequality gives for it.
//!
//! Conditioned on the supports, `Z = σᵀAσ / s` with `A[i][j] = Q[i][j] x_i x_j`.
//! Hanson-Wright bounds `||σᵀAσ||_p` by `√p ||A||_F + p ||A||_op`, and `U_p`
//! is the p-norm of that quantity over the supports. For the two-spike vector
//! the integrand collapses to `(√p/√2 + p/2) Q_12`.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{frobenius_norm, operator_norm, QuadForm};
use crate::error::{Error, Result};
use crate::oracle::{hypergeometric_moment_exact, mc_moment_z, sorted_intersection, MomentEstimate};
use crate::rng::{self, TAG_U_P};
use crate::sketch::{sample_sign_consistent_column, select_params, SketchParams, SupportSampler, ThetaConstants};
use crate::stats::pnorm_with_stderr;

/// Largest allowed gap between the general integrand and its closed form.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

pub fn two_spike_vector(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("the two-spike vector needs n >= 2, got {n}")));
    }
    let mut x = vec![0.0; n];
    x[0] = std::f64::consts::FRAC_1_SQRT_2;
    x[1] = std::f64::consts::FRAC_1_SQRT_2;
    Ok(x)
}

/// `√p ||A||_F + p ||A||_op` for a collision-weighted form.
pub fn u_p_integrand(a: &QuadForm, p: f64) -> f64 {
    p.sqrt() * frobenius_norm(a) + p * operator_norm(a)
}

/// `(√p/√2 + p/2) Q_12`.
pub fn u_p_integrand_two_spike(q12: u32, p: f64) -> f64 {
    ((p / 2.0).sqrt() + p / 2.0) * q12 as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpEstimate {
    pub estimate: MomentEstimate,
    /// Largest `|general - closed| / max(1, closed)` over the trials.
    pub max_identity_error: f64,
}

fn check_even_order(p: u32) -> Result<()> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::InvalidOrder {
            order: p as f64,
            reason: "U_p is defined for even p >= 2".into(),
        });
    }
    Ok(())
}

/// Monte Carlo estimate of `U_p` for the two-spike vector. Trial `t` draws
/// the first two columns of the matrix with seed `derive_seed(seed ^ TAG_U_P, t)`.
///
/// The general integrand is evaluated on every trial and checked against the
/// closed form; a gap above [`IDENTITY_TOLERANCE`] is an error.
pub fn u_p_estimate(params: &SketchParams, p: u32, trials: u64, seed: u64) -> Result<UpEstimate> {
    check_even_order(p)?;
    if trials < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 trials, got {trials}")));
    }
    let x = two_spike_vector(params.n())?;
    let pf = p as f64;
    let base = seed ^ TAG_U_P;
    let per_trial: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map_init(
            || (SupportSampler::new(params.m()), Vec::new(), Vec::new()),
            |(sampler, first, second), t| {
                let matrix_seed = rng::derive_seed(base, t);
                first.clear();
                second.clear();
                sample_sign_consistent_column(params, matrix_seed, 0, sampler, first);
                sample_sign_consistent_column(params, matrix_seed, 1, sampler, second);
                let q12 = sorted_intersection(first, second);
                let a = QuadForm::from_fn(2, |i, j| q12 as f64 * x[i] * x[j]);
                let general = u_p_integrand(&a, pf);
                let closed = u_p_integrand_two_spike(q12, pf);
                (general, (general - closed).abs() / closed.max(1.0))
            },
        )
        .collect();
    let max_identity_error = per_trial.iter().map(|v| v.1).fold(0.0, f64::max);
    if max_identity_error > IDENTITY_TOLERANCE {
        return Err(Error::IdentityViolation(format!(
            "two-spike U_p integrand differs from its closed form by {max_identity_error:e}"
        )));
    }
    let samples: Vec<f64> = per_trial.into_iter().map(|v| v.0).collect();
    let (value, se) = pnorm_with_stderr(&samples, pf);
    Ok(UpEstimate {
        estimate: MomentEstimate::monte_carlo(pf, value, se, trials),
        max_identity_error,
    })
}

/// Sparsity and dimension for `(eps, delta)` from the Hanson-Wright route and
/// from the direct moment bound, with shared constants and shared `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImpliedDimensions {
    pub eps: f64,
    pub delta: f64,
    pub b: f64,
    /// `ln(1/delta)`.
    pub p: f64,
    pub hw_s: usize,
    pub hw_m: usize,
    pub direct_s: usize,
    pub direct_m: usize,
}

impl ImpliedDimensions {
    pub fn m_ratio(&self) -> f64 {
        self.hw_m as f64 / self.direct_m as f64
    }
}

/// Markov on `U_p` with `p = ln(1/delta)`: `U_p ~ p^2 / ln(Bp)` when
/// `B >= e/p` and `p / B` otherwise, so `s = c_s U_p / eps` and
/// `m = c_m B s^2`. The direct route is [`select_params`], whose range
/// `e <= B <= 1/delta` forces `p >= 1`, so only the first case is reachable.
pub fn implied_dimensions(eps: f64, delta: f64, b: f64, constants: ThetaConstants) -> Result<ImpliedDimensions> {
    let direct = select_params(2, eps, delta, b, constants)?;
    let p = (1.0 / delta).ln();
    let u = if b >= E / p { p * p / (b * p).ln() } else { p / b };
    let hw_s = ((constants.c_s * u / eps).ceil() as usize).max(1);
    let hw_m = ((constants.c_m * b * (hw_s * hw_s) as f64).ceil() as usize).max(hw_s);
    Ok(ImpliedDimensions {
        eps,
        delta,
        b,
        p,
        hw_s,
        hw_m,
        direct_s: direct.s(),
        direct_m: direct.m(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleConfig {
    pub eps: f64,
    /// Even moment orders. Each row uses `s = 2p`, `B = e`, `m = ceil(e s^2)`.
    pub p_grid: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub constants: ThetaConstants,
}

impl CounterexampleConfig {
    pub fn new(eps: f64, trials: u64, seed: u64) -> Self {
        Self {
            eps,
            p_grid: vec![4, 8, 16],
            trials,
            seed,
            constants: ThetaConstants::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub p: u32,
    pub s: usize,
    pub m: usize,
    /// `m / s^2` after rounding.
    pub b: f64,
    pub u_p: f64,
    pub u_p_stderr: f64,
    /// `||Q_12||_p` from the exact hypergeometric law.
    pub p_norm_q: f64,
    /// `p ||Q_12||_p`.
    pub keyfail: f64,
    pub z_norm: f64,
    pub z_stderr: f64,
    /// `U_p / (s ||Z||_p)`. `U_p` bounds `||σᵀAσ||_p = s ||Z||_p`.
    pub looseness: f64,
    pub looseness_stderr: f64,
    /// `e^-p`, the failure probability at which `p = ln(1/delta)`.
    pub delta: f64,
    pub hw_implied_m: usize,
    pub direct_m: usize,
    pub max_identity_error: f64,
}

/// One row per order in the grid, computed in grid order.
pub fn compare_dimensions(config: &CounterexampleConfig) -> Result<Vec<CounterexampleRow>> {
    if config.p_grid.is_empty() {
        return Err(Error::InvalidParameter("empty p grid".into()));
    }
    let x = two_spike_vector(2)?;
    let mut rows = Vec::with_capacity(config.p_grid.len());
    for &p in &config.p_grid {
        check_even_order(p)?;
        let pf = p as f64;
        let s = 2 * p as usize;
        let m = (E * (s * s) as f64).ceil() as usize;
        let params = SketchParams::new(2, m, s)?;
        let up = u_p_estimate(&params, p, config.trials, config.seed)?;
        let z = mc_moment_z(&params, &x, pf, config.trials, config.seed)?;
        let p_norm_q = hypergeometric_moment_exact(m as u64, s as u64, pf)?;
        let u_p = up.estimate.value;
        let u_se = up.estimate.stderr().unwrap_or(0.0);
        let z_se = z.stderr().unwrap_or(0.0);
        let looseness = u_p / (s as f64 * z.value);
        let looseness_stderr = looseness * ((u_se / u_p).powi(2) + (z_se / z.value).powi(2)).sqrt();
        let delta = (-pf).exp();
        let dims = implied_dimensions(config.eps, delta, E, config.constants)?;
        rows.push(CounterexampleRow {
            p,
            s,
            m,
            b: params.b(),
            u_p,
            u_p_stderr: u_se,
            p_norm_q,
            keyfail: pf * p_norm_q,
            z_norm: z.value,
            z_stderr: z_se,
            looseness,
            looseness_stderr,
            delta,
            hw_implied_m: dims.hw_m,
            direct_m: dims.direct_m,
            max_identity_error: up.max_identity_error,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::collision_table;
    use crate::sketch::sample_sign_consistent;

    #[test]
    fn two_spike_shape() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(two_spike_vector(2).unwrap(), vec![h, h]);
        let x = two_spike_vector(5).unwrap();
        assert_eq!(&x[2..], &[0.0; 3]);
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(two_spike_vector(1).is_err());
    }

    #[test]
    fn integrand_identity_on_sampled_matrices() {
        // General path over the full n x n form, not just the two columns.
        let params = SketchParams::new(6, 40, 8).unwrap();
        let x = two_spike_vector(6).unwrap();
        for seed in 0..200 {
            let a = sample_sign_consistent(&params, seed);
            let table = collision_table(&a);
            let form = table.weighted_form(&x);
            for p in [2.0, 4.0, 16.0] {
                let general = u_p_integrand(&form, p);
                let closed = u_p_integrand_two_spike(table.get(0, 1), p);
                assert!((general - closed).abs() <= 1e-9 * closed.max(1.0));
            }
        }
    }

    #[test]
    fn single_row_pair_gives_root_two() {
        // m = 2, s = 1: Q is Bernoulli(1/2) and the integrand is 2Q.
        let params = SketchParams::new(2, 2, 1).unwrap();
        let up = u_p_estimate(&params, 2, 100_000, 11).unwrap();
        let se = up.estimate.stderr().unwrap();
        assert!((up.estimate.value - 2f64.sqrt()).abs() <= 4.0 * se, "{:?}", up);
        assert!(up.max_identity_error <= IDENTITY_TOLERANCE);
    }

    #[test]
    fn up_tracks_exact_collision_norm() {
        let params = SketchParams::new(2, 44, 4).unwrap();
        let p = 4;
        let up = u_p_estimate(&params, p, 50_000, 3).unwrap();
        let exact = u_p_integrand_two_spike(1, p as f64) * hypergeometric_moment_exact(44, 4, p as f64).unwrap();
        let se = up.estimate.stderr().unwrap();
        assert!((up.estimate.value - exact).abs() <= 4.0 * se);
    }

    #[test]
    fn odd_or_small_orders_rejected() {
        let params = SketchParams::new(2, 8, 2).unwrap();
        assert!(u_p_estimate(&params, 3, 10, 0).is_err());
        assert!(u_p_estimate(&params, 0, 10, 0).is_err());
        assert!(u_p_estimate(&params, 2, 1, 0).is_err());
        assert!(u_p_estimate(&SketchParams::new(1, 8, 2).unwrap(), 2, 10, 0).is_err());
    }

    #[test]
    fn hanson_wright_route_needs_more_rows() {
        let c = ThetaConstants::default();
        let mut last = 0.0;
        for delta in [1e-2, 1e-3, 1e-4, 1e-6] {
            let d = implied_dimensions(0.5, delta, E, c).unwrap();
            assert!(d.hw_s >= d.direct_s && d.hw_m >= d.direct_m);
            assert!(d.m_ratio() > last);
            last = d.m_ratio();
        }
    }

    #[test]
    fn report_rows_follow_grid() {
        let mut config = CounterexampleConfig::new(0.5, 2_000, 5);
        config.p_grid = vec![2, 4];
        let rows = compare_dimensions(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].s, rows[0].m), (4, 44));
        assert_eq!((rows[1].s, rows[1].m), (8, 174));
        for r in &rows {
            assert!(r.u_p >= r.z_norm);
            assert_eq!(r.keyfail, r.p as f64 * r.p_norm_q);
        }
        config.p_grid.clear();
        assert!(compare_dimensions(&config).is_err());
    }
}
