//! Execution strategy for the data-parallel sweeps.
//!
//! Every sweep in the crate (per-degree series coefficients, exhaustive
//! oracle searches) goes through [`Exec::map_collect`] or
//! [`Exec::sum`]. With the `parallel` feature the work is spread over the
//! rayon pool; without it, or with [`Exec::Sequential`], it runs on the
//! calling thread. Results are always returned in input order, so the two
//! strategies are observationally identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential execution when the `parallel` feature is off.
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

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Map `f` over `items`, preserving order.
    pub fn map_collect<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    pub fn sum<T, F>(self, items: Vec<T>, f: F) -> u64
    where
        T: Send,
        F: Fn(T) -> u64 + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.into_par_iter().map(f).sum();
        }
        items.into_iter().map(f).sum()
    }

    /// First `Some` in input order.
    pub fn find_first<T, R, F>(self, items: Vec<T>, f: F) -> Option<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> Option<R> + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.into_par_iter().map(f).find_map_first(|r| r);
        }
        items.into_iter().find_map(f)
    }
}
