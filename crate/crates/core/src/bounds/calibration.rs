//! Instance grids on which each bound is compared with the exact norm, and
//! the ratio constants measured on them.
//!
//! The constants were measured once with [`summarize`] over the grids below
//! and frozen. Tests check that no instance exceeds them.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    hanson_wright_bound, hitczenko_bound, khintchine_bound, latala_symmetric_t, manybin_bound,
    quadform_bound, rademacher_phi, InnerNormMode, LatalaSearch, QuadForm,
};
use crate::error::Result;
use crate::oracle::{
    binomial_moment_exact, rademacher_linear_norm_exact, rademacher_quadratic_norm_exact,
    BinomialSpec,
};
use crate::rng;

/// Largest exact/bound ratio for [`khintchine_bound`] on [`linear_instances`].
pub const C_KHINTCHINE: f64 = 0.7072;
/// Window holding exact/bound for [`hitczenko_bound`] on [`linear_instances`].
pub const HITCZENKO_WINDOW: (f64, f64) = (0.432, 1.0001);
/// Window holding exact/T for [`latala_symmetric_t`] on [`linear_instances`].
pub const LATALA_WINDOW: (f64, f64) = (1.026, 2.528);
/// Largest exact/bound ratio for [`quadform_bound`] on [`quadform_instances`].
pub const C_QF: f64 = 1.4143;
/// Largest exact/bound ratio for [`hanson_wright_bound`] on [`quadform_instances`].
pub const C_HW: f64 = 0.5973;
/// Largest exact/bound ratio for [`manybin_bound`] on [`binomial_instances`].
pub const C_MANYBIN: f64 = 1.6932;

/// Seed for the random quadratic-form grid.
pub const GRID_SEED: u64 = 20_190_611;

pub const LINEAR_MAX_N: usize = 16;
pub const LINEAR_ORDERS: [usize; 3] = [2, 4, 8];
pub const QUADFORM_MAX_N: usize = 12;
pub const QUADFORM_ORDERS: [usize; 2] = [2, 4];
pub const QUADFORM_REPS: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct RatioRecord {
    pub evaluator: &'static str,
    pub instance: String,
    pub order: f64,
    pub exact: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(records: &[RatioRecord]) -> RatioSummary {
    records.iter().fold(
        RatioSummary {
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        },
        |acc, r| RatioSummary {
            count: acc.count + 1,
            min: acc.min.min(r.ratio),
            max: acc.max.max(r.ratio),
        },
    )
}

/// Unit vectors `e1`, uniform and geometric decay (ratio 1/2) for every
/// length up to [`LINEAR_MAX_N`].
pub fn linear_instances() -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::new();
    for n in 1..=LINEAR_MAX_N {
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        out.push((format!("e1/n={n}"), e1));
        out.push((format!("uniform/n={n}"), vec![1.0 / (n as f64).sqrt(); n]));
        let geo: Vec<f64> = (0..n).map(|i| 0.5f64.powi(i as i32)).collect();
        let norm = geo.iter().map(|v| v * v).sum::<f64>().sqrt();
        out.push((format!("geometric/n={n}"), geo.into_iter().map(|v| v / norm).collect()));
    }
    out
}

/// Random symmetric zero-diagonal forms for `2 <= n <= QUADFORM_MAX_N`.
/// Even repetitions are dense with entries uniform in `[-1, 1]`; odd ones
/// keep each entry with probability 1/2.
pub fn quadform_instances(seed: u64) -> Vec<(String, QuadForm)> {
    let mut out = Vec::new();
    for n in 2..=QUADFORM_MAX_N {
        for rep in 0..QUADFORM_REPS {
            let mut rng = rng::stream(seed ^ rng::TAG_GRID, (n * QUADFORM_REPS + rep) as u64);
            let sparse = rep % 2 == 1;
            let form = QuadForm::from_fn(n, |_, _| {
                let v: f64 = rng.random_range(-1.0..=1.0);
                if sparse && rng.random_bool(0.5) {
                    0.0
                } else {
                    v
                }
            });
            let kind = if sparse { "sparse" } else { "dense" };
            out.push((format!("{kind}/n={n}/rep={rep}"), form));
        }
    }
    out
}

/// `q in 1..=16`, `N in 1..=32`, `alpha = 2^-k` for `k in 1..=6`.
pub fn binomial_instances() -> Vec<(BinomialSpec, f64)> {
    let mut out = Vec::new();
    for k in 1..=6 {
        let alpha = 0.5f64.powi(k);
        for n in 1..=32u64 {
            for q in 1..=16 {
                let spec = BinomialSpec::new(n, alpha).expect("grid specs are valid");
                out.push((spec, q as f64));
            }
        }
    }
    out
}

fn record(evaluator: &'static str, instance: String, order: f64, exact: f64, bound: f64) -> RatioRecord {
    RatioRecord {
        evaluator,
        instance,
        order,
        exact,
        bound,
        // A vanishing form has exact norm and bound both zero.
        ratio: if exact == 0.0 && bound == 0.0 { 0.0 } else { exact / bound },
    }
}

pub fn hitczenko_ratios() -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (label, x) in linear_instances() {
        for p in LINEAR_ORDERS.into_iter().filter(|&p| p <= x.len()) {
            let exact = rademacher_linear_norm_exact(&x, p as f64)?;
            out.push(record("hitczenko", label.clone(), p as f64, exact, hitczenko_bound(&x, p)));
        }
    }
    Ok(out)
}

pub fn khintchine_ratios() -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (label, x) in linear_instances() {
        for q in LINEAR_ORDERS.map(|q| q as f64) {
            let exact = rademacher_linear_norm_exact(&x, q)?;
            out.push(record("khintchine", label.clone(), q, exact, khintchine_bound(&x, q)));
        }
    }
    Ok(out)
}

pub fn latala_ratios() -> Result<Vec<RatioRecord>> {
    let search = LatalaSearch::default();
    let mut out = Vec::new();
    for (label, x) in linear_instances() {
        for q in LINEAR_ORDERS.map(|q| q as f64) {
            let exact = rademacher_linear_norm_exact(&x, q)?;
            let t = latala_symmetric_t(|i, t| rademacher_phi(x[i], t, q), x.len(), q, &search)?;
            out.push(record("latala_symmetric", label.clone(), q, exact, t.t));
        }
    }
    Ok(out)
}

pub fn quadform_ratios(seed: u64) -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (label, a) in quadform_instances(seed) {
        for q in QUADFORM_ORDERS.into_iter().filter(|&q| q <= a.n()) {
            let exact = rademacher_quadratic_norm_exact(&a, q as f64)?;
            let bound = quadform_bound(&a, q, InnerNormMode::ExactEnumeration)?.value;
            out.push(record("quadform", label.clone(), q as f64, exact, bound));
        }
    }
    Ok(out)
}

pub fn hanson_wright_ratios(seed: u64) -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (label, a) in quadform_instances(seed) {
        for q in QUADFORM_ORDERS.map(|q| q as f64) {
            let exact = rademacher_quadratic_norm_exact(&a, q)?;
            out.push(record("hanson_wright", label.clone(), q, exact, hanson_wright_bound(&a, q)));
        }
    }
    Ok(out)
}

pub fn manybin_ratios() -> Result<Vec<RatioRecord>> {
    let mut out = Vec::new();
    for (spec, q) in binomial_instances() {
        let exact = binomial_moment_exact(spec, q)?;
        let label = format!("N={}/alpha={}", spec.n_trials(), spec.alpha());
        out.push(record("manybin", label, q, exact, manybin_bound(&spec, q)));
    }
    Ok(out)
}
