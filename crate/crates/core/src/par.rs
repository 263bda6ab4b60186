//! Order-preserving map that runs on the rayon pool when the `parallel`
//! feature is enabled and `parallel` is requested, sequentially otherwise.

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: Vec<T>, _parallel: bool, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Number of tasks worth splitting a job into.
#[cfg(feature = "parallel")]
pub(crate) fn tasks(parallel: bool) -> usize {
    if parallel {
        4 * rayon::current_num_threads()
    } else {
        1
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn tasks(_parallel: bool) -> usize {
    1
}
