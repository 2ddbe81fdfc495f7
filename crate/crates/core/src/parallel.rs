//! Data-parallel cell loops, sequential when the `parallel` feature is off.
//!
//! Per-cell work (projectors, element matrices, step right-hand sides) is a
//! pure function of immutable mesh data, so it parallelizes embarrassingly.
//! Results are always collected in cell order; any scatter-add into global
//! structures happens sequentially afterwards, which keeps assembled matrices
//! bit-reproducible regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Runs `f` inside a rayon pool of `workers` threads (0 = rayon default).
/// Without the `parallel` feature the pool size is ignored.
#[cfg(feature = "parallel")]
pub fn with_workers<T: Send, F: FnOnce() -> T + Send>(workers: usize, f: F) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T, F: FnOnce() -> T>(_workers: usize, f: F) -> T {
    f()
}
