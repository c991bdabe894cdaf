//! Data-parallel helpers. With the `parallel` feature the parallel strategy
//! runs on rayon; without it every strategy runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the data-parallel loops (point counting, prime
/// batches). Results never depend on the strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

#[cfg(feature = "parallel")]
const CHUNK: u64 = 1 << 12;

impl Exec {
    /// Sum of `f(i)` over `0..n`.
    pub fn sum_range<F>(self, n: u64, f: F) -> i64
    where
        F: Fn(u64) -> i64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if n > CHUNK => (0..n.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).map(&f).sum::<i64>())
                .sum(),
            _ => (0..n).map(f).sum(),
        }
    }

    /// Order-preserving map.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Run `op` on a pool of `jobs` workers (or inline when `jobs <= 1` or the
/// `parallel` feature is off), passing it the matching strategy.
pub fn with_jobs<R, F>(jobs: usize, op: F) -> R
where
    R: Send,
    F: FnOnce(Exec) -> R + Send,
{
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        return pool.install(|| op(Exec::Parallel));
    }
    let _ = jobs;
    op(Exec::Sequential)
}
