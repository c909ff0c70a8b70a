//! Upper-tail bounds for `K_n / n`: the explicit exponential bound
//! `P(K_n >= n x) <= P_n c_n / alpha * exp(-n I_alpha(x))`, the exact tail
//! from the law of `K_n`, and the optimised Chernoff bound from `m_n(t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ldp::{rate_alpha, RateEvalConfig};
use crate::mgf::{mgf_series_general, mgf_series_theta0};
use crate::model::{log_c_factor, log_p_prefactor, ModelParams};
use crate::partition::{kn_distribution, KnDistribution, KN_DISTRIBUTION_MAX_N};
use crate::series::SeriesConfig;

/// One row comparing the bounds at a level `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub x: f64,
    pub n: usize,
    pub paper_bound: f64,
    pub exact_tail: Option<f64>,
    pub exact_chernoff: Option<f64>,
}

fn check_x_open(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("x = {x} must lie in (0, 1)")))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `ln` of the exponential bound.
pub fn log_paper_bound(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    params.require_pitman()?;
    check_n(n)?;
    check_x_open(x)?;
    let rate = rate_alpha(params.alpha(), x, &RateEvalConfig::default())?.rate;
    Ok(log_p_prefactor(params, n as u64)? + log_c_factor(params, n as u64)? - params.alpha().ln()
        - n as f64 * rate)
}

/// `P_n(alpha, theta) c_n(alpha, theta) / alpha * exp(-n I_alpha(x))`. May exceed 1.
pub fn paper_bound(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    log_paper_bound(params, n, x).map(f64::exp)
}

/// Smallest integer `k >= n x`, treating `n x` within rounding of an integer
/// as that integer.
pub fn tail_threshold(n: usize, x: f64) -> usize {
    let nx = n as f64 * x;
    let nearest = nx.round();
    let k = if (nx - nearest).abs() <= 1e-9 * nx.max(1.0) {
        nearest
    } else {
        nx.ceil()
    };
    k.max(0.0) as usize
}

/// `P(K_n >= n x)` from the exact law of `K_n`.
pub fn exact_tail(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    check_n(n)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!("x = {x} must lie in (0, 1]")));
    }
    Ok(kn_distribution(params, n)?.tail(tail_threshold(n, x)))
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const CHERNOFF_LN_T_TOL: f64 = 1e-10;
const CHERNOFF_T_MIN: f64 = 1e-8;

fn log_mgf(params: &ModelParams, n: usize, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let r = if params.theta() == 0.0 {
        mgf_series_theta0(params.alpha(), n, t, cfg)?
    } else {
        mgf_series_general(params, n, t, cfg)?
    };
    Ok(r.log_value)
}

/// `inf_{t > 0} exp(-n x t) m_n(t)`.
///
/// `ln m_n(t) - n x t` is convex in `t`, so golden-section search over
/// `ln t` finds the minimum. The search range stops where the series would
/// need more than about half of `cfg.max_terms` terms; every `t` gives a
/// valid bound, so truncating the range only loosens the result.
pub fn exact_chernoff(params: &ModelParams, n: usize, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    params.require_pitman()?;
    check_n(n)?;
    check_x_open(x)?;
    cfg.validate()?;
    let nx = n as f64 * x;
    let objective = |ln_t: f64| -> Result<f64> {
        let t = ln_t.exp();
        Ok(log_mgf(params, n, t, cfg)? - nx * t)
    };
    let t_x = rate_alpha(params.alpha(), x, &RateEvalConfig::default())?.t_x;
    let t_cap = (0.5 * cfg.max_terms as f64 / (n as f64 + 40.0)).ln().clamp(1.0, 30.0);
    let t_hi = (2.0 * t_x + 1.0).clamp(1.0, t_cap);

    let (mut a, mut b) = (CHERNOFF_T_MIN.ln(), t_hi.ln());
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    let mut best = fc.min(fd);
    while b - a > CHERNOFF_LN_T_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = objective(c)?;
            best = best.min(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = objective(d)?;
            best = best.min(fd);
        }
    }
    best = best.min(objective(b)?);
    if t_x <= t_cap {
        best = best.min(objective(t_x.ln())?);
    }
    if !best.is_finite() {
        return Err(Error::numeric("Chernoff optimisation produced a non-finite value"));
    }
    Ok(best.exp().min(1.0))
}

/// Rows for each `x`, sharing one law of `K_n` across rows.
/// `exact_tail` is present when `n` is within the exact range; `exact_chernoff`
/// only when requested.
pub fn bound_reports(
    params: &ModelParams,
    n: usize,
    xs: &[f64],
    with_chernoff: bool,
    cfg: &SeriesConfig,
) -> Result<Vec<BoundReport>> {
    check_n(n)?;
    for &x in xs {
        check_x_open(x)?;
    }
    let law: Option<KnDistribution> = if n <= KN_DISTRIBUTION_MAX_N && !xs.is_empty() {
        Some(kn_distribution(params, n)?)
    } else {
        None
    };
    xs.iter()
        .map(|&x| {
            Ok(BoundReport {
                x,
                n,
                paper_bound: paper_bound(params, n, x)?,
                exact_tail: law.as_ref().map(|l| l.tail(tail_threshold(n, x))),
                exact_chernoff: if with_chernoff {
                    Some(exact_chernoff(params, n, x, cfg)?)
                } else {
                    None
                },
            })
        })
        .collect()
}

/// Single-row form of [`bound_reports`].
pub fn bound_report(
    params: &ModelParams,
    n: usize,
    x: f64,
    with_chernoff: bool,
    cfg: &SeriesConfig,
) -> Result<BoundReport> {
    Ok(bound_reports(params, n, &[x], with_chernoff, cfg)?[0])
}
