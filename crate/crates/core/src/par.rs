//! Data-parallel helpers. With the `parallel` feature (default) inner loops
//! run on rayon; without it they fall back to sequential execution. Results
//! are identical either way: work is split into fixed-size chunks and partial
//! results are reduced in index order.

/// Map `f` over `0..n` into a Vec, in parallel when enabled.
pub fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Apply `f` to fixed-size chunks of `items`, returning per-chunk results in
/// chunk order. Chunk boundaries depend only on `chunk` and `items.len()`, so
/// a later in-order reduction is schedule-independent.
pub fn par_chunk_map<T, R, F>(items: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_chunks(chunk).map(|c| f(c)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.chunks(chunk).map(|c| f(c)).collect()
    }
}

/// Sequential versions, kept available under both feature configurations so
/// benchmarks can compare the two paths directly.
pub mod seq {
    pub fn map<T, F>(n: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        (0..n).map(f).collect()
    }

    pub fn chunk_map<T, R, F>(items: &[T], chunk: usize, f: F) -> Vec<R>
    where
        F: Fn(&[T]) -> R,
    {
        items.chunks(chunk).map(|c| f(c)).collect()
    }
}
