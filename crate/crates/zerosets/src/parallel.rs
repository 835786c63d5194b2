//! Replicate-parallel execution with a deterministic contract: results are
//! collected in replicate order and reduced in a fixed order, so output is
//! bit-identical for any worker count, including the sequential fallback
//! built without the `parallel` feature.

/// Number of worker threads for an experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    /// Sequential in the calling thread.
    Serial,
    /// A rayon pool of the given size (>= 1).
    Threads(usize),
}

impl Workers {
    pub fn from_count(n: usize) -> Workers {
        if n <= 1 {
            Workers::Serial
        } else {
            Workers::Threads(n)
        }
    }
}

/// Map `f` over replicate indices `0..n`, preserving index order.
pub fn map_replicates<T, F>(workers: Workers, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match workers {
        Workers::Serial => map_serial(n, f),
        #[cfg(feature = "parallel")]
        Workers::Threads(t) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(|| (0..n).into_par_iter().map(f).collect())
        }
        #[cfg(not(feature = "parallel"))]
        Workers::Threads(_) => map_serial(n, f),
    }
}

/// Sequential reference implementation (also the fallback without the
/// `parallel` feature).
pub fn map_serial<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_worker_count() {
        let f = |i: usize| i * i;
        let serial = map_replicates(Workers::Serial, 100, f);
        assert_eq!(serial, (0..100).map(f).collect::<Vec<_>>());
        for t in [1, 4, 8] {
            let par = map_replicates(Workers::from_count(t), 100, f);
            assert_eq!(par, serial);
        }
    }
}
