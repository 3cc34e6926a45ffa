//! Execution policy for data-parallel loops.
//!
//! Only element-wise maps are parallelized; every floating-point reduction
//! runs sequentially in index order so results are bitwise identical for
//! either policy.

/// How an embarrassingly parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls
    /// back to [`Exec::Sequential`].
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Below this many items the parallel path is not worth the fork/join.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 256;

impl Exec {
    /// Evaluates `f(i)` for `i` in `0..n`, collecting in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if n >= MIN_PARALLEL_LEN => {
                use rayon::prelude::*;
                (0..n).into_par_iter().with_min_len(64).map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but over a slice of inputs, parallelizing at any length.
    /// Intended for coarse-grained work items (whole runs, scan points).
    pub fn map_items<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}
