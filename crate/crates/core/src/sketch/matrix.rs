use rand::Rng;

use super::params::SketchParams;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Sign {
    Plus = 1,
    Minus = -1,
}

impl Sign {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_f64(self) -> f64 {
        self as i8 as f64
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn try_from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Common read access for column-sparse projection matrices with exactly
/// `s` nonzeros of magnitude `1/sqrt(s)` per column.
pub trait SparseSketch: Sync {
    fn params(&self) -> &SketchParams;

    /// Sorted row indices of the nonzeros of column `i`.
    fn rows(&self, i: usize) -> &[u32];

    /// Sign of the `k`-th nonzero (in row order) of column `i`.
    fn entry_sign(&self, i: usize, k: usize) -> Sign;

    /// `sqrt(s) * A x`: the product with every nonzero replaced by its sign.
    /// Columns whose coordinate is zero are skipped.
    fn apply_unscaled(&self, x: &[f64]) -> Result<Vec<f64>> {
        let p = self.params();
        if x.len() != p.n() {
            return Err(Error::DimensionMismatch {
                expected: p.n(),
                found: x.len(),
            });
        }
        let mut y = vec![0.0; p.m()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (k, &r) in self.rows(i).iter().enumerate() {
                y[r as usize] += self.entry_sign(i, k).as_f64() * xi;
            }
        }
        Ok(y)
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let scale = self.params().scale();
        let mut y = self.apply_unscaled(x)?;
        y.iter_mut().for_each(|v| *v *= scale);
        Ok(y)
    }
}

/// One matrix from the sparse sign-consistent distribution: each column
/// has `s` uniformly chosen rows and a single shared sign.
#[derive(Clone, Debug, PartialEq)]
pub struct SignConsistentMatrix {
    params: SketchParams,
    seed: Option<u64>,
    rows: Vec<u32>,
    signs: Vec<Sign>,
}

/// Sparse JL baseline: same supports, independent sign per nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseJlMatrix {
    params: SketchParams,
    seed: Option<u64>,
    rows: Vec<u32>,
    signs: Vec<Sign>,
}

fn check_support(params: &SketchParams, i: usize, rows: &[u32]) -> Result<()> {
    if rows.len() != params.s() {
        return Err(Error::Format(format!(
            "column {i} has {} rows, expected s = {}",
            rows.len(),
            params.s()
        )));
    }
    if rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Format(format!(
            "column {i} rows are not strictly increasing"
        )));
    }
    if let Some(&last) = rows.last() {
        if last as usize >= params.m() {
            return Err(Error::Format(format!(
                "column {i} row {last} out of range for m = {}",
                params.m()
            )));
        }
    }
    Ok(())
}

impl SignConsistentMatrix {
    /// Builds a matrix from explicit `(rows, sign)` columns; rows must be
    /// sorted, distinct, in range and exactly `s` per column.
    pub fn from_columns(
        params: SketchParams,
        seed: Option<u64>,
        columns: Vec<(Vec<u32>, Sign)>,
    ) -> Result<Self> {
        if columns.len() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: columns.len(),
            });
        }
        let mut rows = Vec::with_capacity(params.n() * params.s());
        let mut signs = Vec::with_capacity(params.n());
        for (i, (r, sign)) in columns.into_iter().enumerate() {
            check_support(&params, i, &r)?;
            rows.extend_from_slice(&r);
            signs.push(sign);
        }
        Ok(Self {
            params,
            seed,
            rows,
            signs,
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }
}

impl SparseSketch for SignConsistentMatrix {
    fn params(&self) -> &SketchParams {
        &self.params
    }

    fn rows(&self, i: usize) -> &[u32] {
        let s = self.params.s();
        &self.rows[i * s..(i + 1) * s]
    }

    fn entry_sign(&self, i: usize, _k: usize) -> Sign {
        self.signs[i]
    }
}

impl SparseJlMatrix {
    pub fn from_columns(
        params: SketchParams,
        seed: Option<u64>,
        columns: Vec<(Vec<u32>, Vec<Sign>)>,
    ) -> Result<Self> {
        if columns.len() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: columns.len(),
            });
        }
        let mut rows = Vec::with_capacity(params.n() * params.s());
        let mut signs = Vec::with_capacity(params.n() * params.s());
        for (i, (r, sg)) in columns.into_iter().enumerate() {
            check_support(&params, i, &r)?;
            if sg.len() != r.len() {
                return Err(Error::Format(format!(
                    "column {i} has {} signs for {} rows",
                    sg.len(),
                    r.len()
                )));
            }
            rows.extend_from_slice(&r);
            signs.extend_from_slice(&sg);
        }
        Ok(Self {
            params,
            seed,
            rows,
            signs,
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn signs(&self, i: usize) -> &[Sign] {
        let s = self.params.s();
        &self.signs[i * s..(i + 1) * s]
    }
}

impl SparseSketch for SparseJlMatrix {
    fn params(&self) -> &SketchParams {
        &self.params
    }

    fn rows(&self, i: usize) -> &[u32] {
        let s = self.params.s();
        &self.rows[i * s..(i + 1) * s]
    }

    fn entry_sign(&self, i: usize, k: usize) -> Sign {
        self.signs[i * self.params.s() + k]
    }
}

/// Draws uniform `s`-subsets of `[0, m)` by a partial Fisher-Yates shuffle
/// over a reusable identity permutation. The swaps are undone afterwards so
/// every draw starts from the identity.
#[derive(Clone, Debug)]
pub struct SupportSampler {
    perm: Vec<u32>,
    swaps: Vec<usize>,
}

impl SupportSampler {
    pub fn new(m: usize) -> Self {
        Self {
            perm: (0..m as u32).collect(),
            swaps: Vec::new(),
        }
    }

    /// Appends a sorted uniform `s`-subset to `out`.
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R, s: usize, out: &mut Vec<u32>) {
        let m = self.perm.len();
        debug_assert!(s <= m);
        self.swaps.clear();
        for k in 0..s {
            let j = rng.random_range(k..m);
            self.perm.swap(k, j);
            self.swaps.push(j);
        }
        let start = out.len();
        out.extend_from_slice(&self.perm[..s]);
        out[start..].sort_unstable();
        for k in (0..s).rev() {
            self.perm.swap(k, self.swaps[k]);
        }
    }
}

/// Rows and sign of column `column` of the sign-consistent matrix with the
/// given seed. Matches the corresponding column of
/// [`sample_sign_consistent`].
pub fn sample_sign_consistent_column(
    params: &SketchParams,
    seed: u64,
    column: usize,
    sampler: &mut SupportSampler,
    rows: &mut Vec<u32>,
) -> Sign {
    let mut rng = rng::stream(seed, column as u64);
    sampler.sample_into(&mut rng, params.s(), rows);
    Sign::from_bool(rng.random::<bool>())
}

fn sample_sparse_jl_column(
    params: &SketchParams,
    seed: u64,
    column: usize,
    sampler: &mut SupportSampler,
    rows: &mut Vec<u32>,
    signs: &mut Vec<Sign>,
) {
    let mut rng = rng::stream(seed, column as u64);
    sampler.sample_into(&mut rng, params.s(), rows);
    signs.extend((0..params.s()).map(|_| Sign::from_bool(rng.random::<bool>())));
}

pub fn sample_sign_consistent(params: &SketchParams, seed: u64) -> SignConsistentMatrix {
    let mut sampler = SupportSampler::new(params.m());
    let mut rows = Vec::with_capacity(params.n() * params.s());
    let signs = (0..params.n())
        .map(|i| sample_sign_consistent_column(params, seed, i, &mut sampler, &mut rows))
        .collect();
    SignConsistentMatrix {
        params: params.clone(),
        seed: Some(seed),
        rows,
        signs,
    }
}

pub fn sample_sparse_jl(params: &SketchParams, seed: u64) -> SparseJlMatrix {
    let mut sampler = SupportSampler::new(params.m());
    let mut rows = Vec::with_capacity(params.n() * params.s());
    let mut signs = Vec::with_capacity(params.n() * params.s());
    for i in 0..params.n() {
        sample_sparse_jl_column(params, seed, i, &mut sampler, &mut rows, &mut signs);
    }
    SparseJlMatrix {
        params: params.clone(),
        seed: Some(seed),
        rows,
        signs,
    }
}
