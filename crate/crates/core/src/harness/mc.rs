//! Parallel Monte Carlo over independent random streams.
//!
//! Replicate `i` always uses stream `i` of the seed, and only counts are
//! aggregated, so results do not depend on the number of workers.

use rayon::prelude::*;
use serde::Serialize;

use crate::concentration::tail_threshold;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::partition::crp_sample_stream;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "EWENS_LDP_THREADS";

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub hits: u64,
    pub reps: u64,
    pub ci_lower_95: f64,
    pub ci_upper_95: f64,
    pub seed: u64,
}

/// Wilson score interval for `hits` successes out of `reps`.
pub fn wilson_interval(hits: u64, reps: u64) -> (f64, f64) {
    if reps == 0 {
        return (0.0, 1.0);
    }
    let n = reps as f64;
    let p = hits as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lower = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if hits == reps { 1.0 } else { (center + half).min(1.0) };
    (lower, upper)
}

/// Workers from `EWENS_LDP_THREADS`, else the available cores.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::numeric(format!("could not start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Estimate of `P(K_n >= n x)` from `reps` samples, using [`worker_count`] workers.
pub fn mc_tail(params: &ModelParams, n: usize, x: f64, reps: u64, seed: u64) -> Result<McEstimate> {
    mc_tail_with_threads(params, n, x, reps, seed, worker_count())
}

pub fn mc_tail_with_threads(
    params: &ModelParams,
    n: usize,
    x: f64,
    reps: u64,
    seed: u64,
    threads: usize,
) -> Result<McEstimate> {
    if n == 0 || reps == 0 {
        return Err(Error::domain("n and reps must be at least 1"));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!("x = {x} must lie in (0, 1]")));
    }
    let k = tail_threshold(n, x) as u64;
    let hits = with_pool(threads, || {
        (0..reps)
            .into_par_iter()
            .filter(|&i| crp_sample_stream(params, n, seed, i) >= k)
            .count() as u64
    })?;
    let (ci_lower_95, ci_upper_95) = wilson_interval(hits, reps);
    Ok(McEstimate {
        p_hat: hits as f64 / reps as f64,
        hits,
        reps,
        ci_lower_95,
        ci_upper_95,
        seed,
    })
}

/// Counts of `K_n = k` over `reps` samples; index `k - 1`.
pub fn mc_kn_histogram(params: &ModelParams, n: usize, reps: u64, seed: u64, threads: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    with_pool(threads, || {
        (0..reps)
            .into_par_iter()
            .fold(
                || vec![0u64; n],
                |mut acc, i| {
                    acc[crp_sample_stream(params, n, seed, i) as usize - 1] += 1;
                    acc
                },
            )
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentration::exact_tail;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100_000);
        assert_eq!(lo, 0.0);
        assert!((hi - Z_95 * Z_95 / (100_000.0 + Z_95 * Z_95)).abs() < 1e-15);
        let (lo, hi) = wilson_interval(10, 10);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.6);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        // reference values from statsmodels' proportion_confint(method="wilson")
        assert!((hi - 0.5961684696340044).abs() < 1e-12);
        let (lo, hi) = wilson_interval(3, 1000);
        assert!((lo - 0.0010207838811386195).abs() < 1e-12);
        assert!((hi - 0.008783014053503176).abs() < 1e-12);
    }

    #[test]
    fn small_x_is_certain() {
        let p = ModelParams::new(0.5, 0.0).unwrap();
        let e = mc_tail_with_threads(&p, 20, 0.01, 500, 9, 2).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert!(e.p_hat <= e.ci_upper_95);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let p = ModelParams::new(0.4, 0.7).unwrap();
        let a = mc_tail_with_threads(&p, 30, 0.3, 20_000, 123, 1).unwrap();
        let b = mc_tail_with_threads(&p, 30, 0.3, 20_000, 123, 8).unwrap();
        assert_eq!(a, b);
        let h1 = mc_kn_histogram(&p, 5, 5000, 4, 1).unwrap();
        let h8 = mc_kn_histogram(&p, 5, 5000, 4, 8).unwrap();
        assert_eq!(h1, h8);
        assert_eq!(h1.iter().sum::<u64>(), 5000);
    }

    #[test]
    fn estimate_near_exact_tail() {
        let p = ModelParams::new(0.5, 0.0).unwrap();
        let reps = 200_000;
        let e = mc_tail_with_threads(&p, 3, 2.0 / 3.0, reps, 77, 4).unwrap();
        let exact = exact_tail(&p, 3, 2.0 / 3.0).unwrap();
        let se = (exact * (1.0 - exact) / reps as f64).sqrt();
        assert!((e.p_hat - exact).abs() < 4.0 * se);
    }
}
