/// Indices of `x` sorted by decreasing `|x_i|` (stable for ties).
pub fn descending_magnitude_order(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));
    idx
}

/// Two-sided estimate of `||sum_i x_i sigma_i||_p`: the `p` largest
/// magnitudes in `l1` plus `sqrt(p)` times the `l2` norm of the rest.
/// The input is sorted internally.
pub fn hitczenko_bound(x: &[f64], p: usize) -> f64 {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let head_len = p.min(mags.len());
    let head: f64 = mags[..head_len].iter().sum();
    let tail: f64 = mags[head_len..].iter().map(|v| v * v).sum();
    head + (p as f64).sqrt() * tail.sqrt()
}

/// `sqrt(q) ||a||_2`.
pub fn khintchine_bound(a: &[f64], q: f64) -> f64 {
    q.sqrt() * a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
