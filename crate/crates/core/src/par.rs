//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper preserves input order in its output, so callers that reduce
//! the results in order get identical answers under both strategies. Without
//! the `parallel` feature, [`Exec::Parallel`] runs sequentially.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub fn map_slice<T, R, F>(items: &[T], exec: Exec, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn map_range<R, F>(range: Range<usize>, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Split `0..len` into contiguous chunks of at most `chunk` and map each.
pub fn map_chunks<R, F>(len: usize, chunk: usize, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    map_range(0..count, exec, |c| f(c * chunk..((c + 1) * chunk).min(len)))
}

/// Configure the global worker pool. Has no effect without the `parallel`
/// feature, or once the pool has been initialized.
pub fn set_workers(workers: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        false
    }
}

/// Run `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is `None`.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(w) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
        {
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved_under_both_strategies() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_slice(&items, Exec::Sequential, |x| x * x);
        let par = map_slice(&items, Exec::Parallel, |x| x * x);
        assert_eq!(seq, par);
        let chunks = map_chunks(10, 3, Exec::Parallel, |r| (r.start, r.end));
        assert_eq!(chunks, vec![(0, 3), (3, 6), (6, 9), (9, 10)]);
        assert!(map_chunks(0, 3, Exec::Parallel, |r| r.len()).is_empty());
    }
}
