//! Thin wrappers so data-parallel loops compile with or without rayon.
//!
//! Every caller maps independent work items and then combines the collected
//! results in index order, so the parallel and sequential builds produce
//! bitwise identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Sequential variant, always available (used by benchmarks as the baseline).
pub fn map_indexed_seq<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Map `f` over a slice, collecting results in order.
#[cfg(feature = "parallel")]
pub fn map_slice<S: Sync, T: Send, F: Fn(&S) -> T + Sync + Send>(items: &[S], f: F) -> Vec<T> {
    items.par_iter().map(f).collect()
}

/// Map `f` over a slice, collecting results in order.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<S, T, F: Fn(&S) -> T>(items: &[S], f: F) -> Vec<T> {
    items.iter().map(f).collect()
}
