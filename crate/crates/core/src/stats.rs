use serde::Serialize;

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Plug-in p-norm `(mean |v|^p)^(1/p)` of a sample with a delta-method
/// standard error. Returns `(value, stderr)`.
pub fn pnorm_with_stderr(samples: &[f64], p: f64) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let powers: Vec<f64> = samples.iter().map(|v| v.abs().powf(p)).collect();
    let mean = powers.iter().sum::<f64>() / n as f64;
    if mean == 0.0 {
        return (0.0, 0.0);
    }
    let var = if n > 1 {
        powers.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let se_mean = (var / n as f64).sqrt();
    let value = mean.powf(1.0 / p);
    // d/dM M^(1/p) = (1/p) M^(1/p - 1)
    let se = value / (p * mean) * se_mean;
    (value, se)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    if trials == 0 {
        return Interval { low: 0.0, high: 1.0 };
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    // The bounds at the extremes are exactly 0 and 1; the formula only
    // reaches them up to rounding.
    Interval {
        low: if successes == 0 { 0.0 } else { (center - half).max(0.0) },
        high: if successes == trials { 1.0 } else { (center + half).min(1.0) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10 successes in 100 trials: (0.0552291, 0.1743657).
        let ci = wilson_interval(10, 100, Z_95);
        assert!((ci.low - 0.055_229_1).abs() < 1e-6, "{ci:?}");
        assert!((ci.high - 0.174_365_7).abs() < 1e-6, "{ci:?}");
        let zero = wilson_interval(0, 1000, Z_95);
        assert_eq!(zero.low, 0.0);
        assert!((zero.high - 0.003_826_8).abs() < 1e-6, "{zero:?}");
    }

    #[test]
    fn pnorm_of_constant_sample_has_no_error() {
        let (v, se) = pnorm_with_stderr(&[2.0, -2.0, 2.0], 4.0);
        assert!((v - 2.0).abs() < 1e-15);
        assert!(se.abs() < 1e-15);
        assert_eq!(pnorm_with_stderr(&[0.0, 0.0], 2.0), (0.0, 0.0));
    }
}
