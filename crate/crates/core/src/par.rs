//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon pool when asked
//! to; without it, or when `parallel` is false, they run sequentially. Results
//! never depend on the schedule: searches return the lowest-index hit and maps
//! keep input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether the crate was built with rayon support.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

/// First `f(i)` that is `Some`, for `i` in `0..n`, by index.
pub fn find_first<T, F>(n: usize, parallel: bool, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = parallel;
    (0..n).find_map(f)
}

/// `f` over `items`, preserving order.
pub fn map<S, T, F>(items: &[S], parallel: bool, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}
