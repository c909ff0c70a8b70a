//! Side-by-side comparison of Monte Carlo tails with the exact tail and the
//! analytic bounds.

use std::time::Instant;

use serde::Serialize;

use crate::concentration::bound_reports;
use crate::error::Result;
use crate::model::ModelParams;
use crate::series::SeriesConfig;

use super::mc::{mc_tail, McEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyRow {
    pub x: f64,
    pub mc: McEstimate,
    pub exact_tail: Option<f64>,
    pub paper_bound: f64,
    pub exact_chernoff: Option<f64>,
    /// Upper confidence limit above the exponential bound: the data do not
    /// confirm the bound at this resolution.
    pub violation: bool,
    /// Lower confidence limit above the exponential bound: the data
    /// contradict the bound.
    pub certified_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub alpha: f64,
    pub theta: f64,
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    #[serde(skip)]
    pub wall_time_secs: f64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violation).count()
    }

    pub fn certified_violations(&self) -> usize {
        self.rows.iter().filter(|r| r.certified_violation).count()
    }
}

/// One row per `x`: Monte Carlo estimate, exact tail (when `n` is in range),
/// exponential bound and optimised Chernoff bound.
pub fn verify_bound(params: &ModelParams, n: usize, xs: &[f64], reps: u64, seed: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let bounds = bound_reports(params, n, xs, true, &SeriesConfig::default())?;
    let rows = bounds
        .into_iter()
        .map(|b| {
            let mc = mc_tail(params, n, b.x, reps, seed)?;
            Ok(VerifyRow {
                x: b.x,
                mc,
                exact_tail: b.exact_tail,
                paper_bound: b.paper_bound,
                exact_chernoff: b.exact_chernoff,
                violation: mc.ci_upper_95 > b.paper_bound,
                certified_violation: mc.ci_lower_95 > b.paper_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        alpha: params.alpha(),
        theta: params.theta(),
        n,
        reps,
        seed,
        wall_time_secs: start.elapsed().as_secs_f64(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_small_reports() {
        let p = ModelParams::new(0.5, 0.0).unwrap();
        let r = verify_bound(&p, 50, &[], 100, 1).unwrap();
        assert!(r.rows.is_empty());
        let r = verify_bound(&p, 50, &[0.2, 0.5], 2000, 1).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.certified_violations(), 0);
        for row in &r.rows {
            let t = row.exact_tail.unwrap();
            assert!(t <= row.exact_chernoff.unwrap() && t <= row.paper_bound);
        }
    }
}
