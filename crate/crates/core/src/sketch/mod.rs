//! Sampling and applying sparse sign-consistent JL matrices and the sparse
//! JL baseline, plus parameter selection along the sparsity/dimension
//! tradeoff.

mod format;
mod matrix;
mod params;

pub use format::{AnyMatrix, MatrixKind, FORMAT_TAG};
pub use matrix::{
    sample_sign_consistent, sample_sign_consistent_column, sample_sparse_jl, Sign,
    SignConsistentMatrix, SparseJlMatrix, SparseSketch, SupportSampler,
};
pub use params::{select_params, SketchParams, ThetaConstants};
