//! Independent column jobs (Jacobian probes, per-mode-set bounds) go
//! through an [`Executor`] so that a threaded runner can be plugged in
//! without the core depending on `std`.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Returns `[f(0), f(1), ..., f(n-1)]` in index order.
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        (0..n).map(f).collect()
    }
}
