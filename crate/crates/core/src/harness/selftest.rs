//! Quick invariant checks run by the `selftest` subcommand.

use serde::Serialize;

use crate::concentration::{exact_tail, paper_bound};
use crate::error::Result;
use crate::ldp::{rate_alpha, RateEvalConfig};
use crate::mgf::{mgf, mgf_series_theta0, mgf_series_theta0_deriv, MgfConfig, MgfMethod};
use crate::mittag::{ml_integral, ml_series, QuadratureConfig, SeriesConfig};
use crate::model::ModelParams;
use crate::partition::{enumerate_partitions, eppf_log_prob, exact_mgf_enumeration};
use crate::special::log_sum_exp;

use super::mc::mc_tail_with_threads;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

type CheckFn = fn() -> Result<(bool, String)>;

/// Runs every check in order.
pub fn run_selftest() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 8] = [
        ("eppf_normalization", eppf_normalization),
        ("mgf_series_vs_enumeration", series_vs_enumeration),
        ("mgf_engine_agreement", engine_agreement),
        ("mgf_recurrence", recurrence),
        ("mittag_leffler_values", mittag_leffler),
        ("rate_closed_form", rate_closed_form),
        ("tail_below_bound", tail_below_bound),
        ("monte_carlo_determinism", mc_determinism),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}

fn eppf_normalization() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &(a, th) in &[(0.25, -0.1), (0.5, 0.0), (0.75, 1.0)] {
        let p = ModelParams::new(a, th)?;
        for n in 1..=8 {
            let logs: Vec<f64> = enumerate_partitions(n)?.iter().map(|c| eppf_log_prob(&p, c)).collect();
            worst = worst.max((log_sum_exp(&logs).exp() - 1.0).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |sum - 1| = {worst:.3e}")))
}

fn series_vs_enumeration() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let cfg = MgfConfig::default();
    for &(a, th) in &[(0.3, 0.0), (0.5, 1.0), (0.7, -0.2)] {
        let p = ModelParams::new(a, th)?;
        for n in [2, 5, 8] {
            for &t in &[0.5, 2.0] {
                let s = mgf(&p, n, t, MgfMethod::Series, &cfg)?.value;
                worst = worst.max(rel(s, exact_mgf_enumeration(&p, n, t)?));
            }
        }
    }
    Ok((worst <= 1e-10, format!("max relative error = {worst:.3e}")))
}

fn engine_agreement() -> Result<(bool, String)> {
    let p = ModelParams::new(0.5, 0.0)?;
    let cfg = MgfConfig::default();
    let reference = mgf(&p, 6, 1.0, MgfMethod::Series, &cfg)?.value;
    let mut worst = 0.0f64;
    for m in [MgfMethod::MlIntegral, MgfMethod::Sharp, MgfMethod::GfCoeff, MgfMethod::Exact] {
        worst = worst.max(rel(mgf(&p, 6, 1.0, m, &cfg)?.value, reference));
    }
    Ok((worst <= 1e-6, format!("max relative spread = {worst:.3e}")))
}

fn recurrence() -> Result<(bool, String)> {
    let cfg = SeriesConfig::default();
    let mut worst = 0.0f64;
    for &a in &[0.3, 0.7] {
        for n in 1..12 {
            let t = 1.0f64;
            let m = mgf_series_theta0(a, n, t, &cfg)?.value;
            let d = mgf_series_theta0_deriv(a, n, t, &cfg)?;
            let next = mgf_series_theta0(a, n + 1, t, &cfg)?.value;
            worst = worst.max(rel(m + a / n as f64 * t.exp_m1() * d, next));
        }
    }
    Ok((worst <= 1e-9, format!("max relative residual = {worst:.3e}")))
}

fn mittag_leffler() -> Result<(bool, String)> {
    let cfg = SeriesConfig::default();
    let e = std::f64::consts::E;
    let half = (ml_series(0.5, 1.0, &cfg)? - e * (1.0 + libm::erf(1.0))).abs();
    let integral = rel(ml_integral(0.6, 2.0, &QuadratureConfig::default())?, ml_series(0.6, 2.0, &cfg)?);
    Ok((
        half <= 1e-10 && integral <= 1e-8,
        format!("E_1/2(1) error = {half:.3e}, integral vs series = {integral:.3e}"),
    ))
}

fn rate_closed_form() -> Result<(bool, String)> {
    let r = rate_alpha(0.5, 0.5, &RateEvalConfig::default())?;
    let t = 1.5f64.ln();
    let want = -0.5 * t + (2.0f64 / 1.5).ln();
    let err = (r.rate - want).abs().max((r.t_x - t).abs());
    Ok((err <= 1e-10, format!("I_1/2(1/2) = {:.10}, error = {err:.3e}", r.rate)))
}

fn tail_below_bound() -> Result<(bool, String)> {
    let mut bad = 0;
    let mut cells = 0;
    for &(a, th) in &[(0.3, 0.5), (0.5, 0.0), (0.7, -0.1)] {
        let p = ModelParams::new(a, th)?;
        for n in [10, 100] {
            for &x in &[0.2, 0.5, 0.8] {
                cells += 1;
                if exact_tail(&p, n, x)? > paper_bound(&p, n, x)? {
                    bad += 1;
                }
            }
        }
    }
    Ok((bad == 0, format!("{bad} of {cells} cells above the bound")))
}

fn mc_determinism() -> Result<(bool, String)> {
    let p = ModelParams::new(0.5, 1.0)?;
    let one = mc_tail_with_threads(&p, 40, 0.3, 4000, 17, 1)?;
    let many = mc_tail_with_threads(&p, 40, 0.3, 4000, 17, 4)?;
    Ok((one == many, format!("hits {} vs {}", one.hits, many.hits)))
}
