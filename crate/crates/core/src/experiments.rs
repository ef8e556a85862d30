//! Experiment drivers behind the command line: distortion failure rates,
//! the sparsity/dimension tradeoff sweep, the bound-dominance report and
//! vector dataset ingestion.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bounds::calibration::{self, RatioRecord};
use crate::counterexample::two_spike_vector;
use crate::error::{Error, Result};
use crate::oracle::{mc_failure_count, FailureTally};
use crate::rng::{self, TAG_VECTORS};
use crate::sketch::{select_params, SketchParams, ThetaConstants};
use crate::stats::{Interval, Z_95};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Basis,
    Uniform,
    TwoSpike,
    RandomUnit,
    File,
}

impl FamilyKind {
    pub const BUILTIN: [FamilyKind; 4] = [Self::Basis, Self::Uniform, Self::TwoSpike, Self::RandomUnit];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Basis => "basis",
            Self::Uniform => "uniform",
            Self::TwoSpike => "two_spike",
            Self::RandomUnit => "random_unit",
            Self::File => "file",
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis" => Ok(Self::Basis),
            "uniform" => Ok(Self::Uniform),
            "two_spike" => Ok(Self::TwoSpike),
            "random_unit" => Ok(Self::RandomUnit),
            "file" => Ok(Self::File),
            _ => Err(Error::InvalidParameter(format!(
                "unknown vector family `{s}` (basis, uniform, two_spike, random_unit, file)"
            ))),
        }
    }
}

/// Number of random unit vectors drawn when no count is given.
pub const DEFAULT_RANDOM_COUNT: usize = 16;

/// A named set of unit vectors of a common length.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFamily {
    pub kind: FamilyKind,
    pub vectors: Vec<Vec<f64>>,
}

impl VectorFamily {
    /// `e_1`, the all-`1/√n` vector, the two-spike vector, or `count`
    /// normalized Gaussian vectors seeded from `seed`.
    pub fn builtin(kind: FamilyKind, n: usize, count: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("vector length must be positive".into()));
        }
        let vectors = match kind {
            FamilyKind::Basis => {
                let mut e1 = vec![0.0; n];
                e1[0] = 1.0;
                vec![e1]
            }
            FamilyKind::Uniform => vec![vec![1.0 / (n as f64).sqrt(); n]],
            FamilyKind::TwoSpike => vec![two_spike_vector(n)?],
            FamilyKind::RandomUnit => {
                if count == 0 {
                    return Err(Error::InvalidParameter("random_unit needs at least one vector".into()));
                }
                (0..count).map(|k| random_unit(n, seed, k as u64)).collect()
            }
            FamilyKind::File => {
                return Err(Error::InvalidParameter("the file family is loaded with VectorFamily::from_file".into()))
            }
        };
        Ok(Self { kind, vectors })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self {
            kind: FamilyKind::File,
            vectors: ingest_vectors(path)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

fn random_unit(n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed ^ TAG_VECTORS, index);
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Reads comma-separated rows of equal length and scales each to unit norm.
pub fn ingest_vectors(path: &Path) -> Result<Vec<Vec<f64>>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => parse_err(0, format!("{other:?}")),
        })?;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            match e.into_kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    parse_err(line, format!("expected {expected_len} fields, found {len}"))
                }
                csv::ErrorKind::Io(io) => Error::Io(io),
                other => parse_err(line, format!("{other:?}")),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("`{field}` is not a finite number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector {
                path: path.to_path_buf(),
                line,
            });
        }
        out.push(row.into_iter().map(|v| v / norm).collect());
    }
    if out.is_empty() {
        return Err(parse_err(0, "no vectors".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyResult {
    pub family: FamilyKind,
    pub vectors: usize,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci: Interval,
    /// The 95% interval reaches down to `delta`.
    pub pass: bool,
}

/// `trials` matrices per family, split evenly over the family's vectors.
/// Vector `k` of a family uses seed `derive_seed(derive_seed(seed, family), k)`,
/// so results do not depend on which other families are run.
pub fn run_distortion(
    params: &SketchParams,
    eps: f64,
    delta: f64,
    families: &[VectorFamily],
    trials: u64,
    seed: u64,
) -> Result<Vec<FamilyResult>> {
    if families.is_empty() {
        return Err(Error::InvalidParameter("no vector families selected".into()));
    }
    families
        .iter()
        .map(|family| {
            let count = family.vectors.len() as u64;
            if count == 0 || trials < count {
                return Err(Error::InvalidParameter(format!(
                    "family {} has {count} vectors for {trials} trials",
                    family.kind
                )));
            }
            let family_seed = rng::derive_seed(seed, family.kind.index());
            let mut tally = FailureTally { trials: 0, failures: 0 };
            for (k, x) in family.vectors.iter().enumerate() {
                let k = k as u64;
                let share = trials / count + u64::from(k < trials % count);
                let t = mc_failure_count(params, x, eps, share, rng::derive_seed(family_seed, k))?;
                tally = tally.merge(t);
            }
            let ci = tally.wilson(Z_95);
            Ok(FamilyResult {
                family: family.kind,
                vectors: family.vectors.len(),
                trials: tally.trials,
                failures: tally.failures,
                rate: tally.rate(),
                ci,
                pass: ci.low <= delta,
            })
        })
        .collect()
}

/// `points` values of `B` spaced evenly in `ln B` from `e` to `1/delta`.
pub fn default_b_grid(delta: f64, points: usize) -> Vec<f64> {
    let hi = (1.0 / delta).ln();
    if points < 2 || hi <= 1.0 {
        return vec![std::f64::consts::E];
    }
    let mut grid: Vec<f64> = (0..points)
        .map(|k| (1.0 + (hi - 1.0) * k as f64 / (points - 1) as f64).exp())
        .collect();
    grid[0] = std::f64::consts::E;
    grid[points - 1] = 1.0 / delta;
    grid
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub b_requested: f64,
    pub s: usize,
    pub m: usize,
    pub b: f64,
    pub families: Vec<FamilyResult>,
}

/// Distortion experiment at each `B`, all with the same seed.
#[allow(clippy::too_many_arguments)]
pub fn run_tradeoff(
    n: usize,
    eps: f64,
    delta: f64,
    b_grid: &[f64],
    constants: ThetaConstants,
    families: &[VectorFamily],
    trials: u64,
    seed: u64,
) -> Result<Vec<TradeoffPoint>> {
    if b_grid.is_empty() {
        return Err(Error::InvalidParameter("empty B grid".into()));
    }
    b_grid
        .iter()
        .map(|&b| {
            let params = select_params(n, eps, delta, b, constants)?;
            let families = run_distortion(&params, eps, delta, families, trials, seed)?;
            Ok(TradeoffPoint {
                b_requested: b,
                s: params.s(),
                m: params.m(),
                b: params.b(),
                families,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    Khintchine,
    Hitczenko,
    LatalaSymmetric,
    Quadform,
    HansonWright,
    Manybin,
}

impl Evaluator {
    pub const ALL: [Evaluator; 6] = [
        Self::Khintchine,
        Self::Hitczenko,
        Self::LatalaSymmetric,
        Self::Quadform,
        Self::HansonWright,
        Self::Manybin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Khintchine => "khintchine",
            Self::Hitczenko => "hitczenko",
            Self::LatalaSymmetric => "latala_symmetric",
            Self::Quadform => "quadform",
            Self::HansonWright => "hanson_wright",
            Self::Manybin => "manybin",
        }
    }

    /// Frozen `[low, high]` range for exact/bound on this evaluator's grid.
    pub fn frozen_window(self) -> (f64, f64) {
        match self {
            Self::Khintchine => (0.0, calibration::C_KHINTCHINE),
            Self::Hitczenko => calibration::HITCZENKO_WINDOW,
            Self::LatalaSymmetric => calibration::LATALA_WINDOW,
            Self::Quadform => (0.0, calibration::C_QF),
            Self::HansonWright => (0.0, calibration::C_HW),
            Self::Manybin => (0.0, calibration::C_MANYBIN),
        }
    }

    fn mode(self) -> &'static str {
        match self {
            Self::Quadform => crate::bounds::InnerNormMode::ExactEnumeration.as_str(),
            _ => "closed_form",
        }
    }

    pub fn ratios(self, grid_seed: u64) -> Result<Vec<RatioRecord>> {
        match self {
            Self::Khintchine => calibration::khintchine_ratios(),
            Self::Hitczenko => calibration::hitczenko_ratios(),
            Self::LatalaSymmetric => calibration::latala_ratios(),
            Self::Quadform => calibration::quadform_ratios(grid_seed),
            Self::HansonWright => calibration::hanson_wright_ratios(grid_seed),
            Self::Manybin => calibration::manybin_ratios(),
        }
    }
}

impl FromStr for Evaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown evaluator `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub evaluator: Evaluator,
    pub mode: &'static str,
    pub instances: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub frozen_low: f64,
    pub frozen_high: f64,
    pub pass: bool,
}

/// Exact/bound ratio range per evaluator on its calibration grid.
pub fn run_bounds_report(evaluators: &[Evaluator], grid_seed: u64) -> Result<Vec<BoundsRow>> {
    if evaluators.is_empty() {
        return Err(Error::InvalidParameter("empty evaluator grid".into()));
    }
    evaluators
        .iter()
        .map(|&e| {
            let records = e.ratios(grid_seed)?;
            if records.is_empty() {
                return Err(Error::InvalidParameter(format!("{} grid is empty", e.as_str())));
            }
            let summary = calibration::summarize(&records);
            let (lo, hi) = e.frozen_window();
            Ok(BoundsRow {
                evaluator: e,
                mode: e.mode(),
                instances: summary.count,
                min_ratio: summary.min,
                max_ratio: summary.max,
                frozen_low: lo,
                frozen_high: hi,
                pass: summary.min >= lo && summary.max <= hi,
            })
        })
        .collect()
}
