//! Chunked execution of enumeration loops. Work splits into chunks
//! indexed by a fixed prefix of the assignment digits; chunks merge
//! with a commutative exact reduction, so results are identical for any
//! thread count. Parallel execution sits behind the `parallel` feature
//! and always has a sequential twin.

/// Number of worker threads a `threads` option resolves to: 0 means the
/// ambient pool (or 1 without the `parallel` feature).
pub(crate) fn effective_threads(threads: usize) -> usize {
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            rayon::current_num_threads()
        } else {
            threads
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        1
    }
}

/// Chooses how many leading digits to fix per chunk: the smallest
/// prefix giving at least 64 chunks per thread, capped at the digit
/// count. Returns (prefix_len, chunk_count).
pub(crate) fn chunk_prefix(radix: u64, digits: usize, threads: usize) -> (usize, u64) {
    debug_assert!(radix >= 2);
    let target = 64 * effective_threads(threads).max(1) as u64;
    let mut len = 0usize;
    let mut chunks = 1u64;
    while chunks < target && len < digits {
        chunks *= radix;
        len += 1;
    }
    (len, chunks)
}

/// Maps every chunk id in 0..n_chunks and folds the results with
/// `merge`. `threads` = 1 forces the sequential path; any other value
/// runs on rayon when the `parallel` feature is enabled (0 = ambient
/// pool, n = dedicated pool of n threads).
pub(crate) fn run_chunks<T, F, M>(n_chunks: u64, threads: usize, map: F, merge: M, init: T) -> T
where
    T: Clone + Send + Sync,
    F: Fn(u64) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if threads != 1 {
            let body = || {
                (0..n_chunks)
                    .into_par_iter()
                    .map(&map)
                    .reduce(|| init.clone(), &merge)
            };
            return if threads == 0 {
                body()
            } else {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("worker pool")
                    .install(body)
            };
        }
    }
    (0..n_chunks).map(map).fold(init, merge)
}
