//! Model parameters and the gamma-ratio quantities built on them.
//!
//! Everything here is evaluated in log space. Rising factorials with a
//! possibly negative base never appear: wherever `theta/alpha` can be
//! negative the expressions are rewritten in terms of `theta/alpha + 1 > 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Parameters `(alpha, theta)` of the Ewens-Pitman model.
///
/// Valid when `0 <= alpha < 1` and `theta > -alpha`. `alpha = 0` is the
/// Ewens model, which additionally needs `theta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    alpha: f64,
    theta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha.is_finite() && theta.is_finite()) {
            return Err(Error::domain("alpha and theta must be finite"));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::domain(format!("alpha = {alpha} is outside [0, 1)")));
        }
        if theta <= -alpha {
            return Err(Error::domain(format!(
                "theta = {theta} must exceed -alpha = {}",
                -alpha
            )));
        }
        Ok(ModelParams { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `theta / alpha`, defined only for `alpha > 0`; always `> -1`.
    pub fn theta_alpha(&self) -> Option<f64> {
        (self.alpha > 0.0).then(|| self.theta / self.alpha)
    }

    /// Same parameters with `theta` replaced by zero.
    pub fn with_theta_zero(&self) -> Result<Self> {
        ModelParams::new(self.alpha, 0.0)
    }

    pub(crate) fn require_pitman(&self) -> Result<f64> {
        self.theta_alpha()
            .ok_or_else(|| Error::domain("this quantity requires alpha > 0"))
    }
}

/// Products up to this length are summed term by term instead of through
/// log-gamma differences.
const DIRECT_PRODUCT_MAX: u64 = 8;

/// `ln((a)^{(n)})` where `(a)^{(n)} = a (a+1) ... (a+n-1)` and `(a)^{(0)} = 1`.
pub fn log_rising(a: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!(
            "rising factorial base must be positive, got {a}"
        )));
    }
    if n <= DIRECT_PRODUCT_MAX {
        Ok((0..n).map(|i| (a + i as f64).ln()).sum())
    } else {
        Ok(ln_gamma(a + n as f64) - ln_gamma(a))
    }
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `ln a_n` with `a_n = Gamma(n) Gamma(theta+1) / Gamma(n+theta) = (n-1)! / (theta+1)^{(n-1)}`.
pub fn log_a_factor(params: &ModelParams, n: u64) -> Result<f64> {
    require_n(n)?;
    let log_fact = ln_gamma(n as f64);
    Ok(log_fact - log_rising(params.theta + 1.0, n - 1)?)
}

/// `ln c_n(alpha, theta)` with `c_n = a_n / Gamma(theta/alpha + 1)`.
pub fn log_c_factor(params: &ModelParams, n: u64) -> Result<f64> {
    let theta_alpha = params.require_pitman()?;
    Ok(log_a_factor(params, n)? - ln_gamma(theta_alpha + 1.0))
}

/// `c_n(alpha, theta) = Gamma(n) Gamma(theta+1) / (Gamma(theta/alpha+1) Gamma(n+theta))`.
pub fn c_factor(params: &ModelParams, n: u64) -> Result<f64> {
    log_c_factor(params, n).map(f64::exp)
}

/// `a_n = Gamma(n) Gamma(theta+1) / Gamma(n+theta)`.
pub fn a_factor(params: &ModelParams, n: u64) -> Result<f64> {
    log_a_factor(params, n).map(f64::exp)
}

/// Prefactor of the concentration bound: `(floor(theta/alpha) + n)^{theta/alpha}`
/// when `theta > 0` and `1` otherwise.
pub fn p_prefactor(params: &ModelParams, n: u64) -> Result<f64> {
    log_p_prefactor(params, n).map(f64::exp)
}

pub fn log_p_prefactor(params: &ModelParams, n: u64) -> Result<f64> {
    let theta_alpha = params.require_pitman()?;
    require_n(n)?;
    if params.theta > 0.0 {
        Ok(theta_alpha * (theta_alpha.floor() + n as f64).ln())
    } else {
        Ok(0.0)
    }
}

/// Change-of-measure weight `M_n` evaluated at `K_n = k`:
/// `a_n (theta/alpha + 1)^{(k-1)} / (k-1)!`.
pub fn martingale_weight(params: &ModelParams, n: u64, k: u64) -> Result<f64> {
    log_martingale_weight(params, n, k).map(f64::exp)
}

pub fn log_martingale_weight(params: &ModelParams, n: u64, k: u64) -> Result<f64> {
    let theta_alpha = params.require_pitman()?;
    require_n(n)?;
    if k == 0 || k > n {
        return Err(Error::domain(format!("k = {k} must lie in [1, {n}]")));
    }
    Ok(log_a_factor(params, n)? + log_rising(theta_alpha + 1.0, k - 1)?
        - ln_gamma(k as f64))
}
