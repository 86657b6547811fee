//! Index-parallel map with a sequential fallback.

#[cfg(feature = "parallel")]
pub(crate) fn map<T, F>(items: Vec<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, F>(items: Vec<usize>, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    items.into_iter().map(f).collect()
}
