//! Deterministic Monte Carlo drivers.
//!
//! Every estimate folds per-draw values in a fixed chunked order: draws are
//! grouped into fixed-size chunks, each chunk is folded sequentially in draw
//! order, and chunk results merge in chunk order. With the `parallel` feature
//! the chunks run on the rayon pool; without it they run in a plain loop. The
//! result is bit-identical either way and independent of the worker count,
//! because floating-point additions happen in the same order.

/// Draws per fold chunk. Fixed so that the reduction tree does not depend on
/// the number of workers.
pub const CHUNK: u64 = 4096;

/// Folds `f(i)` for i in 0..draws into an accumulator, merging chunk
/// accumulators in index order.
pub fn mc_fold<A, F>(draws: u64, init: A, f: F, merge: impl Fn(A, A) -> A + Sync) -> A
where
    A: Clone + Send + Sync,
    F: Fn(u64, A) -> A + Send + Sync,
{
    let chunks: Vec<(u64, u64)> = (0..draws)
        .step_by(CHUNK as usize)
        .map(|start| (start, (start + CHUNK).min(draws)))
        .collect();
    let fold_chunk = |(start, end): (u64, u64)| {
        let mut acc = init.clone();
        for i in start..end {
            acc = f(i, acc);
        }
        acc
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<A> = {
        use rayon::prelude::*;
        chunks.into_par_iter().map(fold_chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<A> = chunks.into_iter().map(fold_chunk).collect();
    let mut iter = parts.into_iter();
    let first = match iter.next() {
        Some(a) => a,
        None => return init,
    };
    iter.fold(first, merge)
}

/// Sequential reference implementation of [`mc_fold`]; same fold order, no
/// thread pool involvement regardless of features.
pub fn mc_fold_seq<A, F>(draws: u64, init: A, f: F, merge: impl Fn(A, A) -> A) -> A
where
    A: Clone,
    F: Fn(u64, A) -> A,
{
    let mut parts = Vec::new();
    let mut start = 0;
    while start < draws {
        let end = (start + CHUNK).min(draws);
        let mut acc = init.clone();
        for i in start..end {
            acc = f(i, acc);
        }
        parts.push(acc);
        start = end;
    }
    let mut iter = parts.into_iter();
    match iter.next() {
        Some(first) => iter.fold(first, merge),
        None => init,
    }
}

/// Maps `f(i)` over 0..draws preserving index order.
pub fn mc_collect<T, F>(draws: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..draws).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..draws).map(f).collect()
    }
}

/// Sequential reference implementation of [`mc_collect`].
pub fn mc_collect_seq<T, F>(draws: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..draws).map(f).collect()
}

/// Caps the rayon pool at `n` workers. Returns false when the global pool was
/// already built (rayon only allows one global configuration) or when the
/// `parallel` feature is off.
pub fn set_worker_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}
