//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature (default) the loops run on rayon; without it
//! they run sequentially. Callers hand every index its own counter-based
//! substream and combine results either by lowest index or through an
//! associative fold, so both builds produce identical answers.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Returns `f(i)` for the lowest `i` in `0..n` where it is `Some`.
pub(crate) fn find_map_first<T, F>(n: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Folds `map(i)` over `0..n`; `combine` must be associative and commutative.
pub(crate) fn map_reduce<T, F, G>(n: u64, map: F, identity: T, combine: G) -> T
where
    T: Send + Clone + Sync,
    F: Fn(u64) -> T + Sync + Send,
    G: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .map(map)
            .reduce(|| identity.clone(), combine)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(map).fold(identity, combine)
    }
}
