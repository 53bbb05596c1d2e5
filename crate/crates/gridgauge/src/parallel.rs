use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use gridgauge_core::CellMap;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "GRIDGAUGE_THREADS";

/// Per-cell maps on a dedicated rayon pool. Output order always follows
/// cell order, so results match [`gridgauge_core::Serial`] exactly.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `threads == 0` uses every core.
    pub fn new(threads: usize) -> Result<Parallel, rayon::ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Parallel { pool })
    }

    /// Sized from `GRIDGAUGE_THREADS`, defaulting to all cores.
    pub fn from_env() -> Result<Parallel, crate::Error> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                crate::Error::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))
            })?,
            Err(_) => 0,
        };
        Ok(Parallel::new(threads)?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl CellMap for Parallel {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
