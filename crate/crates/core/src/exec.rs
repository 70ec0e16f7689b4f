//! Execution strategy for the batch check drivers.
//!
//! Every driver maps an independent check over a list of instances and
//! collects the outcomes in input order, so the reports do not depend on
//! scheduling. With the `parallel` feature (default) `Strategy::Parallel`
//! fans instances out over rayon; without it both strategies run
//! sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Parallel,
    Sequential,
}

#[cfg(feature = "parallel")]
pub(crate) fn map_vec<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match strategy {
        Strategy::Parallel => items.par_iter().map(&f).collect(),
        Strategy::Sequential => items.iter().map(&f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_vec<T, U, F>(_strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(&f).collect()
}
