//! Chunked map/reduce over index ranges.
//!
//! Work is cut into chunks whose boundaries depend only on the total size,
//! never on the worker count. Chunk results are combined in chunk order, so
//! any reduction (even a non-commutative one) gives the same answer with 1
//! or 64 workers. With the `parallel` feature off, or `workers == 1`, the
//! chunks simply run in a loop.

use std::ops::Range;
#[cfg(feature = "parallel")]
use std::sync::Arc;

/// Default chunk length in points.
pub const CHUNK: u64 = 1 << 12;

/// Default cap on the number of points a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Executor plus enumeration budget, threaded through every counting call.
#[derive(Clone, Debug)]
pub struct Env {
    pub exec: Executor,
    pub budget: u64,
}

impl Env {
    pub fn new(workers: usize, budget: u64) -> Env {
        Env {
            exec: Executor::new(workers),
            budget,
        }
    }

    pub fn sequential(budget: u64) -> Env {
        Env {
            exec: Executor::sequential(),
            budget,
        }
    }
}

impl Default for Env {
    fn default() -> Self {
        Env::sequential(DEFAULT_BUDGET)
    }
}

#[derive(Clone)]
pub struct Executor {
    workers: usize,
    #[cfg(feature = "parallel")]
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Executor({} workers)", self.workers)
    }
}

impl Default for Executor {
    fn default() -> Self {
        Executor::sequential()
    }
}

/// Fixed chunk boundaries for `0..total`.
pub fn chunks(total: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    let chunk = chunk.max(1);
    let n = total.div_ceil(chunk);
    (0..n).map(move |i| i * chunk..((i + 1) * chunk).min(total))
}

impl Executor {
    pub fn sequential() -> Executor {
        Executor {
            workers: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// `workers == 0` picks the number of available cores. Without the
    /// `parallel` feature every executor is sequential.
    pub fn new(workers: usize) -> Executor {
        #[cfg(feature = "parallel")]
        {
            let workers = if workers == 0 {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            } else {
                workers
            };
            if workers == 1 {
                return Executor::sequential();
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            Executor {
                workers,
                pool: Some(Arc::new(pool)),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = workers;
            Executor::sequential()
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// Map every chunk of `0..total`, returning chunk results in order.
    pub fn map_chunks<T, M>(&self, total: u64, chunk: u64, map: M) -> Vec<T>
    where
        T: Send,
        M: Fn(Range<u64>) -> T + Sync,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            let ranges: Vec<Range<u64>> = chunks(total, chunk).collect();
            return pool.install(|| ranges.into_par_iter().map(&map).collect());
        }
        chunks(total, chunk).map(map).collect()
    }

    pub fn map_reduce<T, M, R>(&self, total: u64, chunk: u64, identity: T, map: M, reduce: R) -> T
    where
        T: Send,
        M: Fn(Range<u64>) -> T + Sync,
        R: Fn(T, T) -> T,
    {
        self.map_chunks(total, chunk, map)
            .into_iter()
            .fold(identity, reduce)
    }

    /// Result of the first chunk (in index order) for which `probe` returns
    /// `Some`. Later chunks may be skipped.
    pub fn find_first<T, P>(&self, total: u64, chunk: u64, probe: P) -> Option<T>
    where
        T: Send,
        P: Fn(Range<u64>) -> Option<T> + Sync,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            let ranges: Vec<Range<u64>> = chunks(total, chunk).collect();
            return pool.install(|| ranges.into_par_iter().find_map_first(&probe));
        }
        chunks(total, chunk).find_map(probe)
    }

    /// Run `f` on each item, results in input order.
    pub fn map_items<I, T, F>(&self, items: Vec<I>, f: F) -> Vec<T>
    where
        I: Send,
        T: Send,
        F: Fn(I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.into_par_iter().map(&f).collect());
        }
        items.into_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_boundaries_cover_range() {
        let v: Vec<_> = chunks(10, 4).collect();
        assert_eq!(v, vec![0..4, 4..8, 8..10]);
        assert_eq!(chunks(0, 4).count(), 0);
    }

    #[test]
    fn results_independent_of_workers() {
        // A non-commutative reduction exposes any reordering.
        let run = |w| {
            Executor::new(w).map_reduce(
                10_000,
                97,
                String::new(),
                |r| format!("{}-{};", r.start, r.end),
                |a, b| a + &b,
            )
        };
        let base = run(1);
        for w in [2, 3, 8] {
            assert_eq!(run(w), base);
        }
    }

    #[test]
    fn find_first_is_leftmost() {
        for w in [1, 4] {
            let ex = Executor::new(w);
            let hit = ex.find_first(1000, 10, |r| r.clone().find(|&i| i % 37 == 36));
            assert_eq!(hit, Some(36));
            assert_eq!(ex.find_first(100, 10, |_| None::<u64>), None);
        }
    }
}
