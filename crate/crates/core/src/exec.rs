//! Pluggable execution of per-cell maps.
//!
//! The numerical kernels are written as pure functions of a cell index, so
//! the order of evaluation never affects the result. [`Serial`] is the
//! default; the `gridgauge` crate provides a thread-pool backed map.

use alloc::vec::Vec;

pub trait CellMap: Sync {
    /// Returns `[f(0), f(1), ..., f(n - 1)]`.
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl CellMap for Serial {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
