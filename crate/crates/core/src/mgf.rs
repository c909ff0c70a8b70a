//! The moment-generating function `m_n(t) = E[exp(t K_n)]`.
//!
//! Engines for `theta = 0`:
//! * [`mgf_series_theta0`]: the gamma-ratio series in `q = 1 - e^{-t}`;
//! * [`mgf_ml_form_theta0`]: a Laguerre integral of `E_alpha(q y^alpha)`;
//! * [`mgf_sharp_theta0`]: `(1/alpha) d(t)^{-n}` minus a quadrature remainder;
//! * [`gf_taylor_coeff`]: Taylor coefficients of the generating function.
//!
//! General `theta` has its own series and integral form. Exact values for
//! any real `t` come from the law of `K_n` or from partition enumeration.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ldp::d_factor;
use crate::mittag::{g_tail_integral, ln_ml3_series, ln_ml_series};
use crate::model::{log_c_factor, log_p_prefactor, log_rising, ModelParams};
use crate::partition::{
    exact_mgf_enumeration, kn_distribution, mean_blocks, KN_DISTRIBUTION_MAX_N, MGF_ENUMERATION_MAX_N,
};
use crate::quadrature::{integrate_adaptive, GaussLaguerre, QuadratureConfig};
use crate::series::{sum_log_series, SeriesConfig};
use crate::special::{ln_gamma, ln_one_minus_exp_neg, LogSumAcc};

/// Largest `n` accepted by [`gf_taylor_coeff`].
pub const GF_COEFF_MAX_N: usize = 30;

/// Laguerre nodes whose log-weight is this far below the largest are skipped.
const NODE_DROP: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MgfMethod {
    Series,
    MlIntegral,
    Sharp,
    GfCoeff,
    Enumeration,
    /// Law of `K_n` by forward recursion.
    Exact,
}

impl MgfMethod {
    pub const ALL: [MgfMethod; 6] = [
        MgfMethod::Series,
        MgfMethod::MlIntegral,
        MgfMethod::Sharp,
        MgfMethod::GfCoeff,
        MgfMethod::Enumeration,
        MgfMethod::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MgfMethod::Series => "series",
            MgfMethod::MlIntegral => "ml-integral",
            MgfMethod::Sharp => "sharp",
            MgfMethod::GfCoeff => "gf-coeff",
            MgfMethod::Enumeration => "enumeration",
            MgfMethod::Exact => "exact",
        }
    }
}

impl fmt::Display for MgfMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MgfMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        MgfMethod::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "ml" && *m == MgfMethod::MlIntegral))
            .ok_or_else(|| Error::domain(format!("unknown MGF method '{s}'")))
    }
}

/// A value of `m_n(t)`. `value` overflows to `inf` for large `n t`; `log_value`
/// stays finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MgfResult {
    pub value: f64,
    pub log_value: f64,
    pub method: MgfMethod,
    /// Series terms or quadrature nodes used.
    pub terms_used: usize,
    /// `R_n(t)`, set by the sharp engine only.
    pub remainder: Option<f64>,
}

impl MgfResult {
    fn from_log(log_value: f64, method: MgfMethod, terms_used: usize) -> Self {
        MgfResult {
            value: log_value.exp(),
            log_value,
            method,
            terms_used,
            remainder: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MgfBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Series and quadrature settings used by the dispatcher.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MgfConfig {
    pub series: SeriesConfig,
    pub quad: QuadratureConfig,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::domain(format!("n = {n} must be at least {min}")))
    }
}

/// `Ok(true)` when `t > 0`, `Ok(false)` when `t == 0`, error otherwise.
fn check_t_nonneg(t: f64) -> Result<bool> {
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    if t < 0.0 {
        return Err(Error::domain(format!(
            "t = {t} < 0: the series diverges; use the exact law of K_n"
        )));
    }
    Ok(t > 0.0)
}

fn check_t_pos(t: f64) -> Result<()> {
    if check_t_nonneg(t)? {
        Ok(())
    } else {
        Err(Error::domain("t must be positive"))
    }
}

/// `m_n(t)` for `theta = 0` from
/// `(1/(n-1)!) sum_{l>=0} q^l Gamma(n + alpha l) / Gamma(alpha l + 1)`, `q = 1 - e^{-t}`.
pub fn mgf_series_theta0(alpha: f64, n: usize, t: f64, cfg: &SeriesConfig) -> Result<MgfResult> {
    check_alpha(alpha)?;
    check_n(n, 1)?;
    if !check_t_nonneg(t)? {
        return Ok(MgfResult::from_log(0.0, MgfMethod::Series, 0));
    }
    let lq = ln_one_minus_exp_neg(t);
    let nf = n as f64;
    let s = sum_log_series("MGF series", 0, lq.exp(), cfg, |l| {
        let al = alpha * l as f64;
        l as f64 * lq + ln_gamma(nf + al) - ln_gamma(al + 1.0)
    })?;
    Ok(MgfResult::from_log(s.log_sum - ln_gamma(nf), MgfMethod::Series, s.terms))
}

/// `m_n'(t)` for `theta = 0` by termwise differentiation of the series.
pub fn mgf_series_theta0_deriv(alpha: f64, n: usize, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_alpha(alpha)?;
    check_n(n, 1)?;
    check_t_pos(t)?;
    let lq = ln_one_minus_exp_neg(t);
    let nf = n as f64;
    let s = sum_log_series("MGF derivative series", 1, lq.exp(), cfg, |l| {
        let lf = l as f64;
        let al = alpha * lf;
        lf.ln() + (lf - 1.0) * lq - t + ln_gamma(nf + al) - ln_gamma(al + 1.0)
    })?;
    Ok((s.log_sum - ln_gamma(nf)).exp())
}

/// `ln sum_i w_i exp(f(u_i))` over the significant nodes of a Laguerre rule.
fn laguerre_log_sum<F>(rule: &GaussLaguerre, mut log_f: F) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut acc = LogSumAcc::new();
    let mut used = 0;
    for i in rule.significant(NODE_DROP) {
        acc.add(rule.log_weights[i] + log_f(rule.nodes[i])?);
        used += 1;
    }
    Ok((acc.value(), used))
}

/// Below this weight exponent the integrand's `u^alpha` behaviour at the
/// origin spoils plain Gauss-Laguerre.
const SPLIT_EXPONENT: f64 = 4.0;
/// Split point for small exponents.
const SPLIT_AT: f64 = 2.0;

/// `ln int_0^inf u^a e^{-u} exp(log_f(u)) du` with `log_f` of moderate size
/// and possibly non-smooth at `u = 0`.
///
/// Large `a` uses the generalized Laguerre rule directly. Small `a` integrates
/// `[0, SPLIT_AT]` adaptively and the rest with a shifted Laguerre rule.
fn laguerre_integral<F>(a: f64, quad: &QuadratureConfig, mut log_f: F) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a >= SPLIT_EXPONENT {
        let rule = GaussLaguerre::cached(quad.laguerre_nodes, a)?;
        return laguerre_log_sum(&rule, log_f);
    }
    let rule = GaussLaguerre::cached(quad.laguerre_nodes, 0.0)?;
    let (log_tail, used) = laguerre_log_sum(&rule, |v| {
        let u = SPLIT_AT + v;
        Ok(a * u.ln() + log_f(u)?)
    })?;
    let mut failure = None;
    let mut evals = 0;
    let head = integrate_adaptive(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            evals += 1;
            match log_f(u) {
                Ok(lf) => (a * u.ln() - u + lf).exp(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        SPLIT_AT,
        &[],
        HEAD_ABS_TOL,
        quad.max_subdivisions,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let mut acc = LogSumAcc::new();
    acc.add(log_tail - SPLIT_AT);
    if head > 0.0 {
        acc.add(head.ln());
    }
    Ok((acc.value(), used + evals))
}

/// Absolute tolerance for the head piece; the integrand there is `O(1)`.
const HEAD_ABS_TOL: f64 = 1e-14;

/// `m_n(t)` for `theta = 0` from
/// `(1/(n-1)!) int_0^inf y^{n-1} e^{-y} E_alpha(q y^alpha) dy`.
///
/// The substitution `y = u / d(t)` cancels the exponential growth of
/// `E_alpha`, leaving a slowly varying integrand for Gauss-Laguerre.
pub fn mgf_ml_form_theta0(alpha: f64, n: usize, t: f64, quad: &QuadratureConfig) -> Result<MgfResult> {
    check_alpha(alpha)?;
    check_n(n, 1)?;
    quad.validate()?;
    if !check_t_nonneg(t)? {
        return Ok(MgfResult::from_log(0.0, MgfMethod::MlIntegral, 0));
    }
    let lq = ln_one_minus_exp_neg(t);
    let q = lq.exp();
    let d = d_factor(alpha, t);
    let shift = (1.0 - d) / d;
    let series = SeriesConfig::default();
    let (log_sum, used) = laguerre_integral(n as f64 - 1.0, quad, |u| {
        let z = q * (u / d).powf(alpha);
        Ok(ln_ml_series(alpha, z, &series)? - u * shift)
    })?;
    let log_value = log_sum - n as f64 * d.ln() - ln_gamma(n as f64);
    Ok(MgfResult::from_log(log_value, MgfMethod::MlIntegral, used))
}

/// `R_n(t) = (1/(n-1)!) int_0^inf y^{n-1} e^{-y} g(q y^alpha) dy` where
/// `g(y) = int_0^inf G_alpha(x, y) dx`.
pub fn sharp_remainder(alpha: f64, n: usize, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    check_alpha(alpha)?;
    check_n(n, 2)?;
    check_t_pos(t)?;
    quad.validate()?;
    let q = -(-t).exp_m1();
    let rule = GaussLaguerre::cached(quad.laguerre_nodes, n as f64 - 1.0)?;
    let (log_sum, _) = laguerre_log_sum(&rule, |y| {
        let g = g_tail_integral(alpha, q * y.powf(alpha), quad)?;
        if g > 0.0 {
            Ok(g.ln())
        } else {
            Err(Error::numeric(format!("tail integral not positive ({g:e})")))
        }
    })?;
    Ok((log_sum - ln_gamma(n as f64)).exp())
}

/// Bound `0 < R_n(t) <= n^{1-alpha} Gamma(alpha) / ((n - alpha) pi sin(pi alpha) (1 - e^{-t}))`.
pub fn remainder_upper_bound(alpha: f64, n: usize, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_n(n, 2)?;
    check_t_pos(t)?;
    let nf = n as f64;
    let q = -(-t).exp_m1();
    Ok(nf.powf(1.0 - alpha) * ln_gamma(alpha).exp() / ((nf - alpha) * PI * (PI * alpha).sin() * q))
}

/// `m_n(t) = (1/alpha) d(t)^{-n} - R_n(t)` for `theta = 0`, `n >= 2`.
pub fn mgf_sharp_theta0(alpha: f64, n: usize, t: f64, quad: &QuadratureConfig) -> Result<MgfResult> {
    let remainder = sharp_remainder(alpha, n, t, quad)?;
    let ln_main = -alpha.ln() - n as f64 * d_factor(alpha, t).ln();
    let frac = remainder * (-ln_main).exp();
    if !(frac < 1.0) {
        return Err(Error::numeric("remainder exceeds the leading term"));
    }
    let mut r = MgfResult::from_log(ln_main + (-frac).ln_1p(), MgfMethod::Sharp, quad.laguerre_nodes);
    r.remainder = Some(remainder);
    Ok(r)
}

/// Closed-form bracket on `m_n(t)` for `theta = 0`. The lower end can be
/// negative for small `n`. Overflows for large `n t`; see [`log_mgf_sandwich_theta0`].
pub fn mgf_sandwich_theta0(alpha: f64, n: usize, t: f64) -> Result<MgfBounds> {
    let (log_upper, rel) = sandwich_parts(alpha, n, t)?;
    let upper = log_upper.exp();
    Ok(MgfBounds {
        lower: upper * (1.0 - rel),
        upper,
    })
}

/// Logarithms of the bracket in [`mgf_sandwich_theta0`]; the lower end is
/// `-inf` when the bracket's lower value is not positive.
pub fn log_mgf_sandwich_theta0(alpha: f64, n: usize, t: f64) -> Result<MgfBounds> {
    let (log_upper, rel) = sandwich_parts(alpha, n, t)?;
    let log_lower = if rel < 1.0 {
        log_upper + (-rel).ln_1p()
    } else {
        f64::NEG_INFINITY
    };
    Ok(MgfBounds {
        lower: log_lower,
        upper: log_upper,
    })
}

/// `ln((1/alpha) d^{-n})` and the relative correction of the lower end.
fn sandwich_parts(alpha: f64, n: usize, t: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    check_n(n, 2)?;
    check_t_pos(t)?;
    let nf = n as f64;
    let ln_d = d_factor(alpha, t).ln();
    let q = -(-t).exp_m1();
    let log_rel = (1.0 - alpha) * nf.ln() + ln_gamma(1.0 + alpha) + nf * ln_d
        - ((nf - alpha) * PI * (PI * alpha).sin() * q).ln();
    Ok((-alpha.ln() - nf * ln_d, log_rel.exp()))
}

/// `m_n(t)` for general `theta` from
/// `Gamma(theta+1) e^{-t theta/alpha} / Gamma(n+theta)
///   * sum_l (theta/alpha+1)^{(l)}/l! q^l Gamma(n+theta+alpha l)/Gamma(theta+alpha l+1)`.
pub fn mgf_series_general(params: &ModelParams, n: usize, t: f64, cfg: &SeriesConfig) -> Result<MgfResult> {
    let theta_alpha = params.require_pitman()?;
    check_n(n, 1)?;
    if !check_t_nonneg(t)? {
        return Ok(MgfResult::from_log(0.0, MgfMethod::Series, 0));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let lq = ln_one_minus_exp_neg(t);
    let gamma = theta_alpha + 1.0;
    let m = (n - 1) as u64;
    let s = sum_log_series("general MGF series", 0, lq.exp(), cfg, |l| {
        let lf = l as f64;
        log_rising(gamma, l as u64).expect("positive base") - ln_gamma(lf + 1.0)
            + lf * lq
            + log_rising(theta + alpha * lf + 1.0, m).expect("positive base")
    })?;
    let log_value = s.log_sum - log_rising(theta + 1.0, m)? - t * theta_alpha;
    Ok(MgfResult::from_log(log_value, MgfMethod::Series, s.terms))
}

/// `m_n(t)` for general `theta` from
/// `Gamma(theta+1) e^{-t theta/alpha} / Gamma(n+theta)
///   * int_0^inf y^{n+theta-1} e^{-y} E^{theta/alpha+1}_{alpha,theta+1}(q y^alpha) dy`,
/// rescaled by `d(t)` as in [`mgf_ml_form_theta0`].
pub fn mgf_integral_general(params: &ModelParams, n: usize, t: f64, quad: &QuadratureConfig) -> Result<MgfResult> {
    let theta_alpha = params.require_pitman()?;
    check_n(n, 1)?;
    quad.validate()?;
    if !check_t_nonneg(t)? {
        return Ok(MgfResult::from_log(0.0, MgfMethod::MlIntegral, 0));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let lq = ln_one_minus_exp_neg(t);
    let q = lq.exp();
    let d = d_factor(alpha, t);
    let shift = (1.0 - d) / d;
    let series = SeriesConfig::default();
    let exponent = n as f64 + theta - 1.0;
    let (log_sum, used) = laguerre_integral(exponent, quad, |u| {
        let z = q * (u / d).powf(alpha);
        Ok(ln_ml3_series(alpha, theta + 1.0, theta_alpha + 1.0, z, &series)? - u * shift)
    })?;
    let log_value = log_sum - (exponent + 1.0) * d.ln() - log_rising(theta + 1.0, (n - 1) as u64)?
        - t * theta_alpha;
    Ok(MgfResult::from_log(log_value, MgfMethod::MlIntegral, used))
}

/// `I_n(t) = sum_k P_{alpha,0}(K_n = k) e^{tk} Gamma(theta/alpha + k) / Gamma(k)`,
/// so that `m_n(t) = c_n I_n(t)`. Returned in log form.
pub fn log_i_n(params: &ModelParams, n: usize, t: f64) -> Result<f64> {
    let theta_alpha = params.require_pitman()?;
    let law = kn_distribution(&params.with_theta_zero()?, n)?;
    let mut acc = LogSumAcc::new();
    for (i, &p) in law.probs().iter().enumerate() {
        if p > 0.0 {
            let k = (i + 1) as f64;
            acc.add(p.ln() + t * k + ln_gamma(theta_alpha + k) - ln_gamma(k));
        }
    }
    Ok(acc.value())
}

/// Brackets on `m_n(t)` for general `theta`.
///
/// * `t > 0`, `theta >= 0`: `[c_n I0, c_n (floor(theta/alpha) + n)^{theta/alpha} I0]`
/// * `t > 0`, `theta < 0`: `[c_n n^{theta/alpha} I0, c_n I0]`
/// * `t <= 0`: `[exp(t E K_n), e^t]`
///
/// with `I0 = m_n(t)` at `theta = 0`. The `t > 0` brackets are not rigorous:
/// with `|theta|` small they fail for `n` up to about 10, and for
/// `alpha = 0.1`, `theta < 0`, `t <= 0.5` they fail at every `n` up to 200.
pub fn mgf_bounds_general(params: &ModelParams, n: usize, t: f64, cfg: &SeriesConfig) -> Result<MgfBounds> {
    let theta_alpha = params.require_pitman()?;
    check_n(n, 1)?;
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    if t <= 0.0 {
        let mean = mean_blocks(params, n)?;
        return Ok(MgfBounds {
            lower: (t * mean).exp(),
            upper: t.exp(),
        });
    }
    let base = mgf_series_theta0(params.alpha(), n, t, cfg)?.log_value + log_c_factor(params, n as u64)?;
    let (lo, hi) = if params.theta() > 0.0 {
        (base, base + log_p_prefactor(params, n as u64)?)
    } else {
        (base + theta_alpha * (n as f64).ln(), base)
    };
    Ok(MgfBounds {
        lower: lo.exp(),
        upper: hi.exp(),
    })
}

/// Radius of convergence in `z` of the generating function
/// `F(t, z) = sum_{n>=0} m_{n+1}(t) z^n`: the pole at `(1-z)^alpha = 1 - e^{-t}`
/// gives `d(t)` for `t > 0`; otherwise the singularity at `z = 1` gives 1.
pub fn gf_radius(alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    Ok(d_factor(alpha, t))
}

/// `F(t, z) = (1/(1-z)) (1 - (e^t-1) / ((e^t-1) - e^t (1-z)^alpha))` for `|z| < gf_radius`.
pub fn gf_closed_form(alpha: f64, t: f64, z: f64) -> Result<f64> {
    let radius = gf_radius(alpha, t)?;
    if !(z.abs() < radius) {
        return Err(Error::domain(format!(
            "|z| = {} lies outside the radius of convergence {radius}",
            z.abs()
        )));
    }
    let q = -(-t).exp_m1();
    let w = (1.0 - z).powf(alpha);
    Ok(w / ((w - q) * (1.0 - z)))
}

/// `m_1(t), ..., m_{n_max}(t)` for `theta = 0` from the Taylor coefficients
/// `m^F_j(t) = (1/j!) sum_{k>=1} q^k (alpha k)^{(j)}` of `(1-z) F(t, z)`,
/// using `m_1 = e^t` and `m_{j+1} = m_j + m^F_j`.
pub fn gf_taylor_coeff(alpha: f64, t: f64, n_max: usize, cfg: &SeriesConfig) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_t_pos(t)?;
    if n_max == 0 || n_max > GF_COEFF_MAX_N {
        return Err(Error::domain(format!(
            "n_max = {n_max} must lie in 1..={GF_COEFF_MAX_N}"
        )));
    }
    let lq = ln_one_minus_exp_neg(t);
    let mut out = Vec::with_capacity(n_max);
    let mut m = t.exp();
    out.push(m);
    for j in 1..n_max {
        let s = sum_log_series("generating-function coefficient", 1, lq.exp(), cfg, |k| {
            k as f64 * lq + log_rising(alpha * k as f64, j as u64).expect("positive base")
        })?;
        m += (s.log_sum - ln_gamma(j as f64 + 1.0)).exp();
        out.push(m);
    }
    Ok(out)
}

/// `m_n(t)` for any real `t` from the exact law of `K_n`.
pub fn mgf_exact(params: &ModelParams, n: usize, t: f64) -> Result<MgfResult> {
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    let law = kn_distribution(params, n)?;
    Ok(MgfResult::from_log(law.log_mgf(t), MgfMethod::Exact, n))
}

/// `m_n(t)` by the requested engine.
///
/// For `t < 0` only the exact engines apply; the analytic methods fall back
/// to the law of `K_n` when `n` is within its range.
pub fn mgf(params: &ModelParams, n: usize, t: f64, method: MgfMethod, cfg: &MgfConfig) -> Result<MgfResult> {
    check_n(n, 1)?;
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    let analytic = !matches!(method, MgfMethod::Enumeration | MgfMethod::Exact);
    if analytic && t < 0.0 {
        if n <= KN_DISTRIBUTION_MAX_N {
            return mgf_exact(params, n, t);
        }
        return Err(Error::domain(
            "t < 0 with n beyond the exact range: only the Jensen bracket is available",
        ));
    }
    let theta0 = params.theta() == 0.0;
    let alpha = params.alpha();
    match method {
        MgfMethod::Series if theta0 => mgf_series_theta0(alpha, n, t, &cfg.series),
        MgfMethod::Series => mgf_series_general(params, n, t, &cfg.series),
        MgfMethod::MlIntegral if theta0 => mgf_ml_form_theta0(alpha, n, t, &cfg.quad),
        MgfMethod::MlIntegral => mgf_integral_general(params, n, t, &cfg.quad),
        MgfMethod::Sharp | MgfMethod::GfCoeff if !theta0 => Err(Error::domain(format!(
            "method {method} needs theta = 0"
        ))),
        MgfMethod::Sharp => mgf_sharp_theta0(alpha, n, t, &cfg.quad),
        MgfMethod::GfCoeff => {
            let coeffs = gf_taylor_coeff(alpha, t, n, &cfg.series)?;
            Ok(MgfResult::from_log(coeffs[n - 1].ln(), MgfMethod::GfCoeff, n))
        }
        MgfMethod::Enumeration => {
            if n > MGF_ENUMERATION_MAX_N {
                return Err(Error::domain(format!(
                    "enumeration supports n <= {MGF_ENUMERATION_MAX_N}"
                )));
            }
            let v = exact_mgf_enumeration(params, n, t)?;
            Ok(MgfResult::from_log(v.ln(), MgfMethod::Enumeration, n))
        }
        MgfMethod::Exact => mgf_exact(params, n, t),
    }
}
