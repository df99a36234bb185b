//! Thin data-parallel shim: rayon when the `parallel` feature is on,
//! a sequential fallback otherwise. All call sites produce identical,
//! deterministically ordered results either way.

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Sums `f` over `0..n` with a deterministic tree reduction order under
/// rayon and plain left-to-right order sequentially; both are exact for the
/// integer counters this is used with and agree to rounding for floats.
#[cfg(feature = "parallel")]
pub fn sum_complex<F: Fn(usize) -> num_complex::Complex64 + Sync + Send>(
    n: usize,
    f: F,
) -> num_complex::Complex64 {
    // collect-then-fold keeps the addition order independent of the thread
    // schedule, preserving byte-identical CLI output
    map_indexed(n, f)
        .into_iter()
        .fold(num_complex::Complex64::new(0.0, 0.0), |a, b| a + b)
}

#[cfg(not(feature = "parallel"))]
pub fn sum_complex<F: Fn(usize) -> num_complex::Complex64>(
    n: usize,
    f: F,
) -> num_complex::Complex64 {
    (0..n).map(f).fold(num_complex::Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// Configures the global thread pool from the SCHOTTKY_THREADS environment
/// variable; a no-op for the sequential build or if the pool already exists.
pub fn configure_threads_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("SCHOTTKY_THREADS") {
            if let Ok(n) = v.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
