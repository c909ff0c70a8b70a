//! Large-deviation quantities for `K_n / n`: the limit scaled log-MGF
//! `L_alpha(t) = -ln(1 - (1 - e^{-t})^{1/alpha})` (zero for `t <= 0`), its
//! Legendre transform `I_alpha`, and the Ewens (`alpha = 0`) rate `I_theta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::ln_one_minus_exp_neg;

/// Above this `x` the rate solver works in `s = e^{-t}`.
const NEAR_ONE: f64 = 0.999;

/// Pieces shared by `L`, `L'` and `L''` at `t > 0`.
struct LimitTerms {
    /// `ln(1 - e^{-t})`
    log_p: f64,
    /// `1 - (1 - e^{-t})^{1/alpha}`, i.e. `d(t)`
    d: f64,
}

fn limit_terms(alpha: f64, log_p: f64) -> LimitTerms {
    LimitTerms {
        log_p,
        d: -(log_p / alpha).exp_m1(),
    }
}

/// `L_alpha(t)`.
pub fn limit_log_mgf(alpha: f64, t: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    if t <= 0.0 {
        return 0.0;
    }
    -limit_terms(alpha, ln_one_minus_exp_neg(t)).d.ln()
}

/// `d(t) = 1 - ((e^t - 1)/e^t)^{1/alpha} = exp(-L_alpha(t))`; equals 1 for `t <= 0`.
pub fn d_factor(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    limit_terms(alpha, ln_one_minus_exp_neg(t)).d
}

fn deriv_from(alpha: f64, terms: &LimitTerms, s: f64) -> f64 {
    // (1/alpha) p^{1/alpha - 1} e^{-t} / d
    (terms.log_p * (1.0 / alpha - 1.0)).exp() * s / (alpha * terms.d)
}

/// `L_alpha'(t)`, strictly increasing from 0 to 1 on `(0, inf)`; 0 for `t <= 0`.
pub fn limit_log_mgf_deriv(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let terms = limit_terms(alpha, ln_one_minus_exp_neg(t));
    deriv_from(alpha, &terms, (-t).exp())
}

/// `L_alpha''(t) = L'(t) (L'(t) + (e^{-t}/alpha - 1) / (1 - e^{-t}))` for `t > 0`.
pub fn limit_log_mgf_second_deriv(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = (-t).exp();
    let d1 = limit_log_mgf_deriv(alpha, t);
    d1 * (d1 + (s / alpha - 1.0) / -(-t).exp_m1())
}

// L' as a function of s = e^{-t}
fn deriv_in_s(alpha: f64, s: f64) -> f64 {
    let terms = limit_terms(alpha, (-s).ln_1p());
    deriv_from(alpha, &terms, s)
}

/// Solver settings for the Legendre transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEvalConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RateEvalConfig {
    fn default() -> Self {
        RateEvalConfig {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// `I_alpha(x) = x t_x - L_alpha(t_x)` together with the maximiser `t_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateResult {
    pub x: f64,
    pub t_x: f64,
    pub rate: f64,
    pub iterations: usize,
}

/// Rate function `I_alpha(x) = sup_t { x t - L_alpha(t) }`.
///
/// For `x in (0, 1)` the supremum is attained at the unique root of
/// `L_alpha'(t) = x`. `x = 1` returns the limit `ln(1/alpha)` and `x > 1`
/// returns `+inf`; both report `t_x = +inf`.
pub fn rate_alpha(alpha: f64, x: f64, cfg: &RateEvalConfig) -> Result<RateResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("x = {x} must be non-negative")));
    }
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(Error::domain("rate solver config must be positive"));
    }
    let done = |t_x: f64, rate: f64, iterations| RateResult { x, t_x, rate, iterations };
    if x == 0.0 {
        return Ok(done(0.0, 0.0, 0));
    }
    if x == 1.0 {
        return Ok(done(f64::INFINITY, -alpha.ln(), 0));
    }
    if x > 1.0 {
        return Ok(done(f64::INFINITY, f64::INFINITY, 0));
    }
    let (t_x, iterations) = if x > NEAR_ONE {
        solve_in_s(alpha, x, cfg)?
    } else {
        solve_in_t(alpha, x, cfg)?
    };
    let rate = (x * t_x - limit_log_mgf(alpha, t_x)).max(0.0);
    Ok(done(t_x, rate, iterations))
}

/// Newton on `L'(t) = x` inside a maintained bracket, bisecting whenever a
/// step would leave it.
fn solve_in_t(alpha: f64, x: f64, cfg: &RateEvalConfig) -> Result<(f64, usize)> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut iter = 0;
    while limit_log_mgf_deriv(alpha, hi) < x {
        lo = hi;
        hi *= 2.0;
        iter += 1;
        if iter > cfg.max_iter || !hi.is_finite() {
            return Err(Error::numeric("rate solver could not bracket t_x"));
        }
    }
    let mut t = 0.5 * (lo + hi);
    while iter < cfg.max_iter {
        iter += 1;
        let f = limit_log_mgf_deriv(alpha, t) - x;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let slope = limit_log_mgf_second_deriv(alpha, t);
        let newton = t - f / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - t).abs();
        t = next;
        if step <= cfg.tol * t.max(1.0) || hi - lo <= cfg.tol * t.max(1.0) {
            return Ok((t, iter));
        }
    }
    Err(Error::numeric(format!(
        "rate solver did not converge within {} iterations",
        cfg.max_iter
    )))
}

/// Bisection in `ln s`, `s = e^{-t}`, for `x` close to one where `t_x` is large.
fn solve_in_s(alpha: f64, x: f64, cfg: &RateEvalConfig) -> Result<(f64, usize)> {
    // L' decreases in s; s -> 0 gives L' -> 1 > x, s = 1/2 gives a value < NEAR_ONE
    let mut ln_lo = f64::MIN_POSITIVE.ln();
    let mut ln_hi = 0.5f64.ln();
    let mut iter = 0;
    while iter < cfg.max_iter {
        iter += 1;
        let mid = 0.5 * (ln_lo + ln_hi);
        if deriv_in_s(alpha, mid.exp()) > x {
            ln_lo = mid;
        } else {
            ln_hi = mid;
        }
        let t = -0.5 * (ln_lo + ln_hi);
        if ln_hi - ln_lo <= cfg.tol * t.max(1.0) {
            return Ok((t, iter));
        }
    }
    Err(Error::numeric(format!(
        "rate solver did not converge within {} iterations",
        cfg.max_iter
    )))
}

/// Ewens rate `I_theta(x) = x ln(x/theta) - x + theta`, with `I_theta(0) = theta`.
pub fn rate_ewens(theta: f64, x: f64) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!("theta = {theta} must be positive")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("x = {x} must be non-negative")));
    }
    if x == 0.0 {
        return Ok(theta);
    }
    Ok(x * (x / theta).ln() - x + theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form Legendre transform at alpha = 1/2.
    fn half_alpha_oracle(x: f64) -> (f64, f64) {
        let t = ((2.0 - x) / (2.0 - 2.0 * x)).ln();
        let rate = (x - 1.0) * t + (2.0 / (2.0 - x)).ln();
        (t, rate)
    }

    #[test]
    fn limit_log_mgf_values() {
        for &a in &[0.2, 0.5, 0.9] {
            assert_eq!(limit_log_mgf(a, -3.0), 0.0);
            assert_eq!(limit_log_mgf(a, 0.0), 0.0);
        }
        let l2 = std::f64::consts::LN_2;
        assert!((limit_log_mgf(0.5, l2) + 0.75f64.ln()).abs() < 1e-15);
        assert!((d_factor(0.5, l2) - 0.75).abs() < 1e-15);
        for &a in &[0.3, 0.5, 0.9] {
            assert!(limit_log_mgf(a, 1e-10) < 1e-9);
            let t = 1.3;
            assert!((d_factor(a, t) - (-limit_log_mgf(a, t)).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_values() {
        let l2 = std::f64::consts::LN_2;
        assert!((limit_log_mgf_deriv(0.5, l2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((limit_log_mgf_deriv(0.5, 30.0) - 1.0).abs() < 1e-9);
        assert_eq!(limit_log_mgf_deriv(0.5, -1.0), 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &a in &[0.3, 0.5, 0.7] {
            for i in 0..=28 {
                let t = 0.2 + 0.1 * i as f64;
                let fd = (limit_log_mgf(a, t + h) - limit_log_mgf(a, t - h)) / (2.0 * h);
                assert!((fd - limit_log_mgf_deriv(a, t)).abs() <= 1e-6, "a={a} t={t}");
                let fd2 = (limit_log_mgf_deriv(a, t + h) - limit_log_mgf_deriv(a, t - h)) / (2.0 * h);
                assert!((fd2 - limit_log_mgf_second_deriv(a, t)).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn rate_closed_form_half() {
        let cfg = RateEvalConfig::default();
        let r = rate_alpha(0.5, 0.5, &cfg).unwrap();
        assert!((r.t_x - 1.5f64.ln()).abs() < 1e-11);
        assert!((r.rate - 0.0849495184).abs() < 1e-9);
        let r = rate_alpha(0.5, 2.0 / 3.0, &cfg).unwrap();
        assert!((r.t_x - std::f64::consts::LN_2).abs() < 1e-11);
        let want = (2.0 / 3.0) * std::f64::consts::LN_2 - (4.0f64 / 3.0).ln();
        assert!((r.rate - want).abs() < 1e-12);
        assert!((want - 0.174416).abs() < 1e-6);
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let (t, rate) = half_alpha_oracle(x);
            let r = rate_alpha(0.5, x, &cfg).unwrap();
            assert!((r.rate - rate).abs() < 1e-11, "x={x}");
            assert!((r.t_x - t).abs() < 1e-9 * t.max(1.0));
        }
        // s-parametrised branch
        let x = 1.0 - 1e-5;
        let (t, rate) = half_alpha_oracle(x);
        let r = rate_alpha(0.5, x, &cfg).unwrap();
        assert!((r.t_x - t).abs() < 1e-9 * t);
        assert!((r.rate - rate).abs() < 1e-10);
    }

    #[test]
    fn rate_shape() {
        let cfg = RateEvalConfig::default();
        for &a in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let rates: Vec<f64> = (1..=100)
                .map(|i| rate_alpha(a, i as f64 / 101.0, &cfg).unwrap().rate)
                .collect();
            for w in rates.windows(2) {
                assert!(w[1] >= w[0] - 1e-14, "a={a}");
            }
            for w in rates.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12, "a={a}");
            }
            assert!(rate_alpha(a, 1e-6, &cfg).unwrap().rate <= 1e-4);
            let top = rate_alpha(a, 1.0 - 1e-6, &cfg).unwrap().rate;
            assert!((top - (1.0 / a).ln()).abs() <= 1e-4, "a={a} {top}");
        }
    }

    #[test]
    fn rate_edge_cases() {
        let cfg = RateEvalConfig::default();
        let z = rate_alpha(0.4, 0.0, &cfg).unwrap();
        assert_eq!((z.t_x, z.rate), (0.0, 0.0));
        let one = rate_alpha(0.4, 1.0, &cfg).unwrap();
        assert!((one.rate - (1.0f64 / 0.4).ln()).abs() < 1e-15);
        assert_eq!(rate_alpha(0.4, 1.5, &cfg).unwrap().rate, f64::INFINITY);
        assert!(rate_alpha(0.4, -0.1, &cfg).unwrap_err().is_domain());
        assert!(rate_alpha(1.0, 0.5, &cfg).unwrap_err().is_domain());
        let starved = RateEvalConfig { tol: 1e-12, max_iter: 3 };
        assert!(rate_alpha(0.4, 0.5, &starved).is_err());
    }

    #[test]
    fn ewens_rate() {
        for &th in &[0.5, 1.0, 3.0] {
            assert!(rate_ewens(th, th).unwrap().abs() < 1e-15);
            assert_eq!(rate_ewens(th, 0.0).unwrap(), th);
        }
        assert!((rate_ewens(1.0, 2.0).unwrap() - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!(rate_ewens(1.0, -0.1).unwrap_err().is_domain());
        assert!(rate_ewens(0.0, 1.0).unwrap_err().is_domain());
    }
}
