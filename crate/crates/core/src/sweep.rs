//! Order-preserving map over a slice, data-parallel with the `parallel`
//! feature and sequential without it.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_seq<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_par(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_seq(items, f)
}

/// Map over case indices `0..n`.
pub fn map_range<R: Send>(n: u64, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    let idx: Vec<u64> = (0..n).collect();
    map(&idx, |&i| f(i))
}
