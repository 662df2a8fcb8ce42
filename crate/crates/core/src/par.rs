//! Thin dispatch layer between rayon and sequential iteration.
//!
//! Float reductions collect into index-ordered vectors before folding, so
//! results are identical whichever path runs and whatever the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ordered map over a slice, parallel when the `parallel` feature is on.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Ordered map over an index range, parallel when the `parallel` feature is on.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential counterpart of [`map_range`].
pub fn map_range_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Caps the global thread pool from `OPCLT_THREADS` when the variable is
/// set to a positive integer. Without the `parallel` feature (or when the
/// pool was already initialized) this does nothing.
pub fn init_parallelism_from_env() {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("OPCLT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
