//! Execution strategy for the embarrassingly parallel loops (sweeps,
//! enumeration, audits).
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans work
//! out over the rayon pool; without it both strategies run sequentially.
//! Results are always returned in input order, so output is identical
//! under either strategy.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build actually runs [`Exec::Parallel`] on several threads.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// `items.map(f)`, order-preserving.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] for fallible work; the first error in input order wins.
    pub fn try_map<T, R, E, F>(self, items: Vec<T>, f: F) -> Result<Vec<R>, E>
    where
        T: Send,
        R: Send,
        E: Send,
        F: Fn(T) -> Result<R, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
