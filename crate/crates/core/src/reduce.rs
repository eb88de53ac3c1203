//! Deterministic reductions.
//!
//! Every reduction splits its input into fixed-size chunks, sums each chunk
//! pairwise and then combines the chunk partials pairwise in order. The
//! result therefore depends only on the data, never on the worker count.

use rayon::prelude::*;

pub(crate) const CHUNK: usize = 4096;
const LEAF: usize = 32;

/// Pairwise (tree) sum of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_map(xs, &|x| x)
}

pub(crate) fn pairwise_map<F: Fn(f64) -> f64>(xs: &[f64], f: &F) -> f64 {
    if xs.len() <= LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += f(x);
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_map(&xs[..mid], f) + pairwise_map(&xs[mid..], f)
    }
}

/// Sum of `f(x)` over `xs`, chunked and pairwise.
pub fn sum_map<F>(xs: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let partials: Vec<f64> = xs
        .par_chunks(CHUNK)
        .map(|chunk| pairwise_map(chunk, &f))
        .collect();
    pairwise_sum(&partials)
}

/// Sum of `f(a, b)` over two equally long slices.
pub fn sum_zip<F>(a: &[f64], b: &[f64], f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    debug_assert_eq!(a.len(), b.len());
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| {
            let terms: Vec<f64> = ca.iter().zip(cb).map(|(&x, &y)| f(x, y)).collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&partials)
}

/// Sum over an index range, with the summand computed from the index.
pub fn sum_indexed<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let terms: Vec<f64> = (lo..hi).map(&f).collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&partials)
}

/// Maximum of `|x|`; zero for an empty slice.
pub fn abs_max(xs: &[f64]) -> f64 {
    xs.par_chunks(CHUNK)
        .map(|c| c.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
        .reduce(|| 0.0, f64::max)
}
