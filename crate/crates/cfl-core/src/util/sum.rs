//! Fixed-tree pairwise summation.
//!
//! Every reduction in the crate goes through these helpers so that results
//! are reproducible to the last bit.  The summation tree is determined by
//! the index range alone: a range splits at its midpoint until it is at
//! most [`LEAF`] long, then accumulates left to right.  The parallel
//! variant hands subtrees to rayon but keeps the exact same tree shape, so
//! serial and parallel runs (and runs with different `--jobs`) agree
//! bit-for-bit.

use num::Zero;
use std::ops::Add;

/// Sequential accumulation below this range length.
const LEAF: usize = 32;

/// Range length above which subtrees are forked onto the thread pool.
const PAR_LEAF: usize = 4096;

/// Sum `f(0) + f(1) + ... + f(len - 1)` over the fixed tree.
pub fn pairwise_sum_by<T, F>(len: usize, f: &F) -> T
where
    T: Zero + Add<Output = T> + Copy,
    F: Fn(usize) -> T,
{
    sum_range(0, len, f)
}

/// Sum a slice over the fixed tree.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    sum_range(0, xs.len(), &|i| xs[i])
}

/// Parallel version of [`pairwise_sum_by`].  Identical result, identical
/// tree; only the scheduling differs.
pub fn par_pairwise_sum_by<T, F>(len: usize, f: &F) -> T
where
    T: Zero + Add<Output = T> + Copy + Send,
    F: Fn(usize) -> T + Sync,
{
    par_sum_range(0, len, f)
}

fn sum_range<T, F>(lo: usize, hi: usize, f: &F) -> T
where
    T: Zero + Add<Output = T> + Copy,
    F: Fn(usize) -> T,
{
    if hi - lo <= LEAF {
        let mut acc = T::zero();
        for i in lo..hi {
            acc = acc + f(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        sum_range(lo, mid, f) + sum_range(mid, hi, f)
    }
}

fn par_sum_range<T, F>(lo: usize, hi: usize, f: &F) -> T
where
    T: Zero + Add<Output = T> + Copy + Send,
    F: Fn(usize) -> T + Sync,
{
    if hi - lo <= PAR_LEAF {
        sum_range(lo, hi, f)
    } else {
        let mid = lo + (hi - lo) / 2;
        let (a, b) = rayon::join(|| par_sum_range(lo, mid, f), || par_sum_range(mid, hi, f));
        a + b
    }
}
