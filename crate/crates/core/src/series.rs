//! Summation of positive series given term logarithms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::LogSumAcc;

/// Truncation settings for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_tol: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::domain("series config needs rel_tol > 0 and max_terms >= 1"));
        }
        Ok(())
    }
}

/// Outcome of a log-domain summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSeriesSum {
    pub log_sum: f64,
    pub terms: usize,
}

/// Sums `exp(log_term(l))` for `l = start, start+1, ...`.
///
/// Terms may rise before they fall. Summation stops once the terms are
/// decreasing and the geometric tail estimate `term * r / (1 - r)` drops
/// below `rel_tol` times the running sum, where `r` is the larger of the
/// current term ratio and `limit_ratio` (the ratio's limit as `l -> inf`).
/// `-inf` terms (exact zeros) are allowed.
pub fn sum_log_series<F>(
    what: &'static str,
    start: usize,
    limit_ratio: f64,
    cfg: &SeriesConfig,
    mut log_term: F,
) -> Result<LogSeriesSum>
where
    F: FnMut(usize) -> f64,
{
    cfg.validate()?;
    let log_tol = cfg.rel_tol.ln();
    let mut acc = LogSumAcc::new();
    let mut prev = f64::NEG_INFINITY;
    for used in 0..cfg.max_terms {
        let l = start + used;
        let lt = log_term(l);
        if lt.is_nan() || lt == f64::INFINITY {
            return Err(Error::numeric(format!("{what}: non-finite term at index {l}")));
        }
        acc.add(lt);
        if prev.is_finite() && lt < prev {
            let ratio = (lt - prev).exp().max(limit_ratio);
            if ratio < 1.0 {
                let log_tail = lt + ratio.ln() - (-ratio).ln_1p();
                if log_tail < acc.value() + log_tol {
                    return Ok(LogSeriesSum {
                        log_sum: acc.value(),
                        terms: used + 1,
                    });
                }
            }
        }
        prev = lt;
    }
    Err(Error::NonConvergence {
        what,
        terms: cfg.max_terms,
    })
}
