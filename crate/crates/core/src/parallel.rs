//! Deterministic parallel evaluation.
//!
//! Maps collect in index order and sums go through fixed-size chunks that
//! are combined sequentially, so results do not depend on thread count or
//! scheduling.

use rayon::prelude::*;

/// Terms per chunk in [`chunked_vector_sum`].
pub const REDUCTION_CHUNK: usize = 1024;

/// `f(0), ..., f(n - 1)` evaluated in parallel, returned in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// `Σ_i term(i)` for vector-valued terms of length `width`.
///
/// `term` accumulates its contribution into the slice it is given.
pub fn chunked_vector_sum<F>(n_terms: usize, width: usize, term: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let n_chunks = n_terms.div_ceil(REDUCTION_CHUNK);
    let partials: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            let end = ((c + 1) * REDUCTION_CHUNK).min(n_terms);
            for i in c * REDUCTION_CHUNK..end {
                term(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; width];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Runs `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(f)
}
