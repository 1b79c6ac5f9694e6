//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (on by default) work fans out over rayon;
//! without it every map runs on the calling thread. Both paths return
//! results in input order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
#[cfg(feature = "parallel")]
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses rayon's global pool.
    #[cfg(feature = "parallel")]
    Parallel { threads: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        Self::with_threads(None)
    }
}

impl Execution {
    /// `None` picks the default; `Some(t)` pins a pool of `t` threads
    /// (ignored without the `parallel` feature).
    pub fn with_threads(threads: Option<usize>) -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel { threads }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = threads;
            Execution::Sequential
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match *self {
            Execution::Sequential => Ok(items.iter().map(f).collect()),
            #[cfg(feature = "parallel")]
            Execution::Parallel { threads: None } => Ok(items.par_iter().map(f).collect()),
            #[cfg(feature = "parallel")]
            Execution::Parallel {
                threads: Some(threads),
            } => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
                Ok(pool.install(|| items.par_iter().map(f).collect()))
            }
        }
    }

    /// Like [`map`](Self::map) over fallible work; the first error in input
    /// order wins.
    pub fn try_map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f)?.into_iter().collect()
    }
}
