//! Execution-mode plumbing: data-parallel kernels with a sequential fallback.
//!
//! Reductions are accumulated over fixed-size chunks and the per-chunk
//! partials are combined in index order, so every reduction returns the same
//! bits in `Seq` and `Par` mode and for any thread count. Parallelism only
//! changes wall time, never results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for reductions and pointwise kernels. Fixed so that the
/// summation tree does not depend on the execution mode or thread count.
pub const CHUNK: usize = 1 << 13;

/// How to run a kernel. `Par` falls back to `Seq` when the crate is built
/// without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Seq,
    Par,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Par
        } else {
            Exec::Seq
        }
    }
}

#[cfg(feature = "parallel")]
macro_rules! run {
    ($exec:expr, $len:expr, $seq:expr, $par:expr) => {
        // Tiny inputs are not worth a fork-join round trip.
        if $exec == Exec::Par && $len >= 2 * CHUNK {
            $par
        } else {
            $seq
        }
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! run {
    ($exec:expr, $len:expr, $seq:expr, $par:expr) => {{
        let _ = $exec;
        $seq
    }};
}

/// Apply `f(base_index, chunk)` to fixed-size chunks of `data`.
pub fn for_each_chunk_mut<T, F>(exec: Exec, data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    let len = data.len();
    run!(
        exec,
        len,
        for (ci, chunk) in data.chunks_mut(CHUNK).enumerate() {
            f(ci * CHUNK, chunk);
        },
        data.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(ci, chunk)| f(ci * CHUNK, chunk))
    );
}

/// Pointwise map over one slice, index-aware.
pub fn map_mut<T, F>(exec: Exec, data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync,
{
    for_each_chunk_mut(exec, data, |base, chunk| {
        for (i, v) in chunk.iter_mut().enumerate() {
            f(base + i, v);
        }
    });
}

/// Pointwise `dst[i] = f(i, src[i])`.
pub fn map_into<S, T, F>(exec: Exec, src: &[S], dst: &mut [T], f: F)
where
    S: Sync,
    T: Send,
    F: Fn(usize, &S) -> T + Sync,
{
    assert_eq!(src.len(), dst.len());
    for_each_chunk_mut(exec, dst, |base, chunk| {
        for (i, v) in chunk.iter_mut().enumerate() {
            *v = f(base + i, &src[base + i]);
        }
    });
}

fn chunk_partials<T, F>(exec: Exec, data: &[T], f: &F) -> Vec<f64>
where
    T: Sync,
    F: Fn(usize, &[T]) -> f64 + Sync,
{
    let len = data.len();
    run!(
        exec,
        len,
        data.chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| f(ci * CHUNK, chunk))
            .collect(),
        data.par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| f(ci * CHUNK, chunk))
            .collect()
    )
}

/// Sum `f` over fixed chunks; partials combined in index order.
pub fn sum_chunks<T, F>(exec: Exec, data: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(usize, &[T]) -> f64 + Sync,
{
    chunk_partials(exec, data, &f).into_iter().sum()
}

/// Sum a per-element quantity.
pub fn sum_elems<T, F>(exec: Exec, data: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(usize, &T) -> f64 + Sync,
{
    sum_chunks(exec, data, |base, chunk| {
        let mut acc = 0.0;
        for (i, v) in chunk.iter().enumerate() {
            acc += f(base + i, v);
        }
        acc
    })
}

/// Mutate every element and return the maximum of the per-element values
/// reported by `f` (NaN propagates). Chunk maxima are combined in index
/// order, so the result is mode- and thread-count-independent.
pub fn map_mut_max<T, F>(exec: Exec, data: &mut [T], f: F) -> f64
where
    T: Send,
    F: Fn(usize, &mut T) -> f64 + Sync,
{
    let kernel = |base: usize, chunk: &mut [T]| -> f64 {
        let mut m = 0.0f64;
        for (i, v) in chunk.iter_mut().enumerate() {
            let x = f(base + i, v);
            if x.is_nan() {
                return f64::NAN;
            }
            if x > m {
                m = x;
            }
        }
        m
    };
    let len = data.len();
    let partials: Vec<f64> = run!(
        exec,
        len,
        data.chunks_mut(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| kernel(ci * CHUNK, chunk))
            .collect(),
        data.par_chunks_mut(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| kernel(ci * CHUNK, chunk))
            .collect()
    );
    let mut m = 0.0f64;
    for p in partials {
        if p.is_nan() {
            return f64::NAN;
        }
        if p > m {
            m = p;
        }
    }
    m
}

/// Maximum of a per-element quantity; 0 for empty input. NaN propagates so
/// the blow-up guard can see non-finite states.
pub fn max_elems<T, F>(exec: Exec, data: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(usize, &T) -> f64 + Sync,
{
    let partials = chunk_partials(exec, data, &|base: usize, chunk: &[T]| {
        let mut m = 0.0f64;
        for (i, v) in chunk.iter().enumerate() {
            let x = f(base + i, v);
            if x.is_nan() {
                return f64::NAN;
            }
            if x > m {
                m = x;
            }
        }
        m
    });
    let mut m = 0.0f64;
    for p in partials {
        if p.is_nan() {
            return f64::NAN;
        }
        if p > m {
            m = p;
        }
    }
    m
}
