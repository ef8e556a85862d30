use rayon::prelude::*;
use serde::Serialize;

use super::MomentEstimate;
use crate::error::{Error, Result};
use crate::rng::{self, TAG_FAILURE, TAG_MOMENT};
use crate::sketch::{sample_sign_consistent_column, SketchParams, SupportSampler};
use crate::stats::{pnorm_with_stderr, wilson_interval, Interval};

struct TrialScratch {
    sampler: SupportSampler,
    rows: Vec<u32>,
    y: Vec<f64>,
}

impl TrialScratch {
    fn new(m: usize) -> Self {
        Self {
            sampler: SupportSampler::new(m),
            rows: Vec::new(),
            y: vec![0.0; m],
        }
    }
}

/// `Z` for the sign-consistent matrix with seed `matrix_seed`, sampling only
/// the columns where `x` is nonzero. Bitwise equal to
/// `error_z(&sample_sign_consistent(params, matrix_seed), x)`.
fn trial_z(params: &SketchParams, x: &[f64], norm_x: f64, matrix_seed: u64, scratch: &mut TrialScratch) -> f64 {
    let s = params.s();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        scratch.rows.clear();
        let sign = sample_sign_consistent_column(params, matrix_seed, i, &mut scratch.sampler, &mut scratch.rows);
        let v = sign.as_f64() * xi;
        for &r in &scratch.rows[..s] {
            scratch.y[r as usize] += v;
        }
    }
    let norm_y = scratch.y.iter().map(|v| v * v).sum::<f64>();
    scratch.y.iter_mut().for_each(|v| *v = 0.0);
    norm_y / s as f64 - norm_x
}

fn check_len(params: &SketchParams, x: &[f64]) -> Result<()> {
    if x.len() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            found: x.len(),
        });
    }
    Ok(())
}

fn z_samples_tagged(params: &SketchParams, x: &[f64], trials: u64, seed: u64, tag: u64) -> Result<Vec<f64>> {
    check_len(params, x)?;
    let norm_x = x.iter().map(|v| v * v).sum::<f64>();
    let base = seed ^ tag;
    Ok((0..trials)
        .into_par_iter()
        .map_init(
            || TrialScratch::new(params.m()),
            |scratch, t| trial_z(params, x, norm_x, rng::derive_seed(base, t), scratch),
        )
        .collect())
}

/// Samples of `Z` from independent matrices; trial `t` uses matrix seed
/// `derive_seed(seed ^ TAG_MOMENT, t)`.
pub fn mc_z_samples(params: &SketchParams, x: &[f64], trials: u64, seed: u64) -> Result<Vec<f64>> {
    z_samples_tagged(params, x, trials, seed, TAG_MOMENT)
}

/// Plug-in Monte Carlo estimate of `||Z||_p` with a delta-method standard
/// error.
pub fn mc_moment_z(params: &SketchParams, x: &[f64], p: f64, trials: u64, seed: u64) -> Result<MomentEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 trials, got {trials}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidOrder {
            order: p,
            reason: "moment order must be at least 1".into(),
        });
    }
    let z = mc_z_samples(params, x, trials, seed)?;
    let (value, se) = pnorm_with_stderr(&z, p);
    Ok(MomentEstimate::monte_carlo(p, value, se, trials))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FailureTally {
    pub trials: u64,
    pub failures: u64,
}

impl FailureTally {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    pub fn wilson(&self, z: f64) -> Interval {
        wilson_interval(self.failures, self.trials, z)
    }

    pub fn merge(self, other: FailureTally) -> FailureTally {
        FailureTally {
            trials: self.trials + other.trials,
            failures: self.failures + other.failures,
        }
    }
}

/// Number of sampled matrices with `|Z| > eps`.
pub fn mc_failure_count(params: &SketchParams, x: &[f64], eps: f64, trials: u64, seed: u64) -> Result<FailureTally> {
    let z = z_samples_tagged(params, x, trials, seed, TAG_FAILURE)?;
    let failures = z.iter().filter(|v| v.abs() > eps).count() as u64;
    Ok(FailureTally { trials, failures })
}

pub fn mc_failure_rate(params: &SketchParams, x: &[f64], eps: f64, trials: u64, seed: u64) -> Result<f64> {
    Ok(mc_failure_count(params, x, eps, trials, seed)?.rate())
}
