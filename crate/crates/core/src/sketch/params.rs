use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problem dimensions plus the accuracy targets they were chosen for.
///
/// `b` is always `m / s^2` of the stored `m` and `s`, so it reflects the
/// rounded dimensions rather than the ratio that was requested.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SketchParams {
    n: usize,
    m: usize,
    s: usize,
    eps: Option<f64>,
    delta: Option<f64>,
    b: f64,
}

impl SketchParams {
    pub fn new(n: usize, m: usize, s: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if s == 0 || s > m {
            return Err(Error::InvalidParameter(format!(
                "sparsity must satisfy 1 <= s <= m, got s = {s}, m = {m}"
            )));
        }
        if m > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds u32 row indices")));
        }
        Ok(Self {
            n,
            m,
            s,
            eps: None,
            delta: None,
            b: m as f64 / (s * s) as f64,
        })
    }

    pub fn with_targets(mut self, eps: f64, delta: f64) -> Self {
        self.eps = Some(eps);
        self.delta = Some(delta);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn eps(&self) -> Option<f64> {
        self.eps
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Tradeoff ratio `m / s^2`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Magnitude of every nonzero entry, `1/sqrt(s)`.
    pub fn scale(&self) -> f64 {
        1.0 / (self.s as f64).sqrt()
    }

    /// Same `m` and `s` with a different input dimension.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        Ok(Self { n, ..self.clone() })
    }
}

/// Multipliers standing in for the asymptotic constants in the sparsity
/// and dimension formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaConstants {
    pub c_s: f64,
    pub c_m: f64,
}

impl ThetaConstants {
    pub fn new(c_s: f64, c_m: f64) -> Result<Self> {
        if !(c_s > 0.0 && c_s.is_finite() && c_m > 0.0 && c_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "constants must be positive and finite, got c_s = {c_s}, c_m = {c_m}"
            )));
        }
        Ok(Self { c_s, c_m })
    }
}

impl Default for ThetaConstants {
    /// Calibrated by the distortion acceptance runs at eps = 0.5,
    /// delta = 0.05 over B in {e, 5, 10, 20}.
    fn default() -> Self {
        Self { c_s: 1.0, c_m: 1.0 }
    }
}

impl FromStr for ThetaConstants {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidParameter(format!("expected `c_s,c_m`, got `{s}`")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("bad constant `{v}`: {e}")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for ThetaConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.c_s, self.c_m)
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")))
    }
}

/// Sparsity and dimension for distortion `eps`, failure probability `delta`
/// and tradeoff ratio `b`:
///
/// `s = max(1, ceil(c_s * ln(1/delta) / (eps * ln b)))`,
/// `m = max(s, ceil(c_m * b * s^2))`.
///
/// `b` must lie in `[e, 1/delta]`. At `b = e` this is the classic
/// `s ~ eps^-1 log(1/delta)`, `m ~ eps^-2 log^2(1/delta)` setting.
pub fn select_params(
    n: usize,
    eps: f64,
    delta: f64,
    b: f64,
    constants: ThetaConstants,
) -> Result<SketchParams> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    let b_max = 1.0 / delta;
    if !(b >= E && b <= b_max) {
        return Err(Error::InvalidParameter(format!(
            "B must lie in [e, 1/delta] = [{E}, {b_max}], got {b}"
        )));
    }
    let log_b_inv_delta = (1.0 / delta).ln() / b.ln();
    let s = ((constants.c_s * log_b_inv_delta / eps).ceil() as usize).max(1);
    let m = ((constants.c_m * b * (s * s) as f64).ceil() as usize).max(s);
    Ok(SketchParams::new(n, m, s)?.with_targets(eps, delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_at_b_equal_e() {
        let p = select_params(1, 0.5, 0.05, E, ThetaConstants::default()).unwrap();
        assert_eq!(p.s(), 6);
        assert_eq!(p.m(), 98);
        assert_eq!(p.b(), 98.0 / 36.0);
    }

    #[test]
    fn b_equal_e_matches_natural_log_formula() {
        let c = ThetaConstants::new(1.3, 0.7).unwrap();
        for &eps in &[0.05, 0.1, 0.25, 0.5, 0.9] {
            for &delta in &[1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.2, 0.3] {
                let p = select_params(3, eps, delta, E, c).unwrap();
                let s = ((c.c_s * (1.0 / delta).ln() / eps).ceil() as usize).max(1);
                let m = ((c.c_m * E * (s * s) as f64).ceil() as usize).max(s);
                assert_eq!((p.s(), p.m()), (s, m), "eps={eps} delta={delta}");
            }
        }
    }

    #[test]
    fn larger_b_trades_sparsity_for_dimension() {
        let c = ThetaConstants::default();
        let lo = select_params(1, 0.5, 0.05, E, c).unwrap();
        let hi = select_params(1, 0.5, 0.05, 20.0, c).unwrap();
        assert!(hi.s() < lo.s());
        // m ~ B / ln^2 B dips below its B = e value before growing again.
        assert_eq!((lo.s(), lo.m()), (6, 98));
        assert_eq!((hi.s(), hi.m()), (2, 80));
        assert_eq!(hi.b(), 20.0);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let c = ThetaConstants::default();
        assert!(select_params(1, 0.5, 0.05, 1.0, c).is_err());
        assert!(select_params(1, 0.5, 0.05, 20.5, c).is_err());
        assert!(select_params(1, 0.0, 0.05, E, c).is_err());
        assert!(select_params(1, 1.0, 0.05, E, c).is_err());
        assert!(select_params(1, 0.5, 1.0, E, c).is_err());
        // 1/delta < e leaves no admissible B.
        assert!(select_params(1, 0.5, 0.5, E, c).is_err());
        let msg = select_params(1, 0.5, 0.05, 1.0, c).unwrap_err().to_string();
        assert!(msg.contains("[e, 1/delta]"), "{msg}");
    }

    #[test]
    fn params_validation() {
        assert!(SketchParams::new(0, 4, 2).is_err());
        assert!(SketchParams::new(3, 4, 0).is_err());
        assert!(SketchParams::new(3, 4, 5).is_err());
        let p = SketchParams::new(3, 8, 2).unwrap();
        assert_eq!(p.b(), 2.0);
        assert_eq!(p.eps(), None);
    }

    #[test]
    fn constants_parse() {
        let c: ThetaConstants = "1.5, 2".parse().unwrap();
        assert_eq!(c, ThetaConstants { c_s: 1.5, c_m: 2.0 });
        assert!("1.5".parse::<ThetaConstants>().is_err());
        assert!("0,1".parse::<ThetaConstants>().is_err());
    }
}
