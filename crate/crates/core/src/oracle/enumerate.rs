//! Exhaustive enumeration over column supports and sign vectors.
//!
//! Only coordinates with `x_i != 0` influence `Z`, so the enumeration runs
//! over those columns alone. Every support configuration has weight
//! `C(m, s)^-k` and every sign vector `2^-k`; `Z` is invariant under a
//! global sign flip, so the first sign is pinned to `+1`.

use super::sorted_intersection;
use crate::bounds::QuadForm;
use crate::error::{Error, Result};
use crate::sketch::SketchParams;

/// Longest coefficient vector accepted by the exact Rademacher form norms.
pub const MAX_EXACT_FORM_LEN: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationBudget {
    /// Maximum number of (support configuration, sign vector) evaluations.
    pub max_evaluations: f64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_evaluations: 1e7,
        }
    }
}

/// All `s`-subsets of `[0, m)` in lexicographic order.
fn combinations(m: usize, s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..s as u32).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..s).rev().find(|&i| (cur[i] as usize) < m - s + i) else {
            return out;
        };
        cur[i] += 1;
        for k in i + 1..s {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Calls `visit(z, weight)` for every outcome of `Z` on unit-weight
/// enumeration; the weights sum to one.
pub fn enumerate_z<F: FnMut(f64, f64)>(
    params: &SketchParams,
    x: &[f64],
    budget: EnumerationBudget,
    mut visit: F,
) -> Result<()> {
    if x.len() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            found: x.len(),
        });
    }
    let coords: Vec<f64> = x.iter().copied().filter(|&v| v != 0.0).collect();
    let k = coords.len();
    if k < 2 {
        visit(0.0, 1.0);
        return Ok(());
    }
    let (m, s) = (params.m(), params.s());
    let n_supports = binomial_f64(m, s).round();
    let required = n_supports.powi(k as i32) * 2f64.powi(k as i32);
    if required > budget.max_evaluations {
        return Err(Error::BudgetExceeded {
            required,
            cap: budget.max_evaluations,
        });
    }
    let supports = combinations(m, s);
    let ns = supports.len();
    let mut overlap = vec![0u32; ns * ns];
    for a in 0..ns {
        for b in a..ns {
            let c = sorted_intersection(&supports[a], &supports[b]);
            overlap[a * ns + b] = c;
            overlap[b * ns + a] = c;
        }
    }

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect();
    // Z = (2/s) sum_{a<b} Q_ab sigma_a sigma_b x_a x_b
    let pair_scale: Vec<f64> = pairs
        .iter()
        .map(|&(a, b)| 2.0 * coords[a] * coords[b] / s as f64)
        .collect();
    let weight = 1.0 / (ns as f64).powi(k as i32) / 2f64.powi(k as i32 - 1);
    let mut idx = vec![0usize; k];
    let mut w = vec![0.0; pairs.len()];
    loop {
        for (p, &(a, b)) in pairs.iter().enumerate() {
            w[p] = overlap[idx[a] * ns + idx[b]] as f64 * pair_scale[p];
        }
        for mask in 0u64..(1u64 << (k - 1)) {
            let sign = |a: usize| if a > 0 && mask >> (a - 1) & 1 == 1 { -1.0 } else { 1.0 };
            let z: f64 = pairs
                .iter()
                .zip(&w)
                .map(|(&(a, b), &wp)| sign(a) * sign(b) * wp)
                .sum();
            visit(z, weight);
        }
        // odometer over support choices
        let mut c = 0;
        loop {
            idx[c] += 1;
            if idx[c] < ns {
                break;
            }
            idx[c] = 0;
            c += 1;
            if c == k {
                return Ok(());
            }
        }
    }
}

/// `E[Z^p]` (signed) by exhaustive enumeration.
pub fn exact_raw_moment_z(
    params: &SketchParams,
    x: &[f64],
    p: u32,
    budget: EnumerationBudget,
) -> Result<f64> {
    let mut acc = 0.0;
    enumerate_z(params, x, budget, |z, w| acc += w * z.powi(p as i32))?;
    Ok(acc)
}

/// `||Z||_p = E[|Z|^p]^(1/p)` by exhaustive enumeration.
pub fn exact_moment_z(
    params: &SketchParams,
    x: &[f64],
    p: u32,
    budget: EnumerationBudget,
) -> Result<super::MomentEstimate> {
    if p == 0 {
        return Err(Error::InvalidOrder {
            order: 0.0,
            reason: "moment order must be at least 1".into(),
        });
    }
    let mut acc = 0.0;
    enumerate_z(params, x, budget, |z, w| acc += w * z.abs().powi(p as i32))?;
    Ok(super::MomentEstimate::exact(p as f64, acc.powf(1.0 / p as f64)))
}

/// `P[|Z| > eps]` by exhaustive enumeration.
pub fn exact_failure_probability(
    params: &SketchParams,
    x: &[f64],
    eps: f64,
    budget: EnumerationBudget,
) -> Result<f64> {
    let mut acc = 0.0;
    enumerate_z(params, x, budget, |z, w| {
        if z.abs() > eps {
            acc += w
        }
    })?;
    Ok(acc)
}

fn check_order(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOrder {
            order: q,
            reason: "moment order must be positive and finite".into(),
        })
    }
}

/// `||sum_i a_i sigma_i||_q` over all `2^n` sign patterns (Gray code order).
pub fn rademacher_linear_norm_exact(a: &[f64], q: f64) -> Result<f64> {
    check_order(q)?;
    let coeffs: Vec<f64> = a.iter().copied().filter(|&v| v != 0.0).collect();
    let n = coeffs.len();
    if n == 0 {
        return Ok(0.0);
    }
    if n > MAX_EXACT_FORM_LEN {
        return Err(Error::BudgetExceeded {
            required: 2f64.powi(n as i32),
            cap: 2f64.powi(MAX_EXACT_FORM_LEN as i32),
        });
    }
    // |S| is even in a global flip; pin sigma_0 = +1.
    let mut sigma = vec![1.0; n];
    let mut sum: f64 = coeffs.iter().sum();
    let count = 1u64 << (n - 1);
    let mut acc = sum.abs().powf(q);
    for step in 1..count {
        let bit = step.trailing_zeros() as usize + 1;
        sigma[bit] = -sigma[bit];
        sum += 2.0 * sigma[bit] * coeffs[bit];
        acc += sum.abs().powf(q);
    }
    Ok((acc / count as f64).powf(1.0 / q))
}

/// `||sigma^T A sigma||_q` over all `2^n` sign patterns (Gray code order).
pub fn rademacher_quadratic_norm_exact(a: &QuadForm, q: f64) -> Result<f64> {
    check_order(q)?;
    let n = a.n();
    if n < 2 {
        return Ok(0.0);
    }
    if n > MAX_EXACT_FORM_LEN {
        return Err(Error::BudgetExceeded {
            required: 2f64.powi(n as i32),
            cap: 2f64.powi(MAX_EXACT_FORM_LEN as i32),
        });
    }
    let mut sigma = vec![1.0; n];
    // r = A sigma
    let mut r: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).sum()).collect();
    let mut form: f64 = r.iter().sum();
    let count = 1u64 << (n - 1);
    let mut acc = form.abs().powf(q);
    for step in 1..count {
        let k = step.trailing_zeros() as usize + 1;
        let old = sigma[k];
        form -= 4.0 * old * r[k];
        sigma[k] = -old;
        for (j, rj) in r.iter_mut().enumerate() {
            *rj -= 2.0 * a.get(j, k) * old;
        }
        acc += form.abs().powf(q);
    }
    Ok((acc / count as f64).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn brute_linear(a: &[f64], q: f64) -> f64 {
        let n = a.len();
        let mut acc = 0.0;
        for mask in 0u32..(1 << n) {
            let s: f64 = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -a[i] } else { a[i] })
                .sum();
            acc += s.abs().powf(q);
        }
        (acc / (1u32 << n) as f64).powf(1.0 / q)
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let c = combinations(4, 2);
        assert_eq!(
            c,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
        assert_eq!(combinations(9, 4).len(), 126);
    }

    #[test]
    fn two_spike_on_two_rows() {
        let p = SketchParams::new(2, 2, 1).unwrap();
        let x = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        let b = EnumerationBudget::default();
        let norm = exact_moment_z(&p, &x, 2, b).unwrap().value;
        assert!((norm - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(exact_raw_moment_z(&p, &x, 1, b).unwrap(), 0.0);
        assert_eq!(exact_raw_moment_z(&p, &x, 3, b).unwrap(), 0.0);
        assert!((exact_failure_probability(&p, &x, 0.5, b).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(exact_failure_probability(&p, &x, 1.01, b).unwrap(), 0.0);
    }

    #[test]
    fn basis_vector_moments_vanish() {
        let p = SketchParams::new(5, 30, 4).unwrap();
        let x = [0.0, 0.0, 1.0, 0.0, 0.0];
        for q in 1..6 {
            assert_eq!(exact_moment_z(&p, &x, q, EnumerationBudget::default()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn mean_of_z_is_zero() {
        let p = SketchParams::new(4, 6, 2).unwrap();
        let x = [0.5, 0.5, 0.5, 0.5];
        let mean = exact_raw_moment_z(&p, &x, 1, EnumerationBudget::default()).unwrap();
        assert!(mean.abs() < 1e-15);
    }

    #[test]
    fn budget_is_enforced() {
        let p = SketchParams::new(6, 20, 5).unwrap();
        let x = [0.4; 6];
        let err = exact_moment_z(&p, &x, 2, EnumerationBudget::default()).unwrap_err();
        match err {
            Error::BudgetExceeded { required, .. } => assert!(required > 1e7),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn linear_norm_matches_brute_force() {
        let a = [0.9, -0.3, 0.25, 0.0, 0.6, -0.05, 0.11];
        for q in [1.0, 2.0, 3.5, 8.0] {
            assert!((rademacher_linear_norm_exact(&a, q).unwrap() - brute_linear(&a, q)).abs() < 1e-12);
        }
        assert_eq!(rademacher_linear_norm_exact(&[0.0, 0.0], 4.0).unwrap(), 0.0);
        // (sigma_1 + sigma_2): |S| is 2 w.p. 1/2, else 0.
        assert!((rademacher_linear_norm_exact(&[1.0, 1.0], 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quadratic_norm_matches_brute_force() {
        let n = 6;
        let a = QuadForm::from_fn(n, |i, j| {
            if i == j {
                0.0
            } else {
                ((i * 7 + j * 7 + i * j) % 5) as f64 - 2.0
            }
        });
        for q in [1.0, 2.0, 4.0] {
            let mut acc = 0.0;
            for mask in 0u32..(1 << n) {
                let s: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
                let mut f = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        f += a.get(i, j) * s[i] * s[j];
                    }
                }
                acc += f64::abs(f).powf(q);
            }
            let brute = (acc / 64.0).powf(1.0 / q);
            assert!((rademacher_quadratic_norm_exact(&a, q).unwrap() - brute).abs() < 1e-9);
        }
        let swap = QuadForm::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        assert_eq!(rademacher_quadratic_norm_exact(&swap, 2.0).unwrap(), 2.0);
    }
}
