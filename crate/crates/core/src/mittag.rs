//! Mittag-Leffler functions on the real line.
//!
//! * `E_a(z) = sum_l z^l / Gamma(a l + 1)` by series ([`ml_series`]);
//! * the same function through `E_a(z) = exp(z^{1/a}) / a - int_0^inf G_a(x, z) dx`
//!   for `z > 0` ([`ml_integral`]), with the kernel [`ml_kernel_g`];
//! * the three-parameter function
//!   `E^g_{a,b}(z) = sum_l (g)^{(l)} z^l / (l! Gamma(a l + b))` ([`ml3_series`]).
//!
//! Series for `z >= 0` are summed in log space, so the `ln_*` variants stay
//! finite far beyond the overflow point of the plain values.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::log_rising;
use crate::quadrature::integrate_adaptive;
use crate::special::ln_gamma;

pub use crate::quadrature::QuadratureConfig;
pub use crate::series::SeriesConfig;
use crate::series::sum_log_series;

/// Largest acceptable ratio between the biggest term of an alternating
/// series and its sum.
const MAX_CANCELLATION: f64 = 1e8;

fn check_alpha_open(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}

/// Sums `sign(z)^l exp(log_mag(l))` for `z < 0`.
fn alternating_sum<F: FnMut(usize) -> f64>(what: &'static str, cfg: &SeriesConfig, mut log_mag: F) -> Result<f64> {
    cfg.validate()?;
    let mut sum = 0.0;
    let mut max_term = 0.0f64;
    let mut prev = f64::INFINITY;
    for l in 0..cfg.max_terms {
        let mag = log_mag(l).exp();
        let term = if l % 2 == 0 { mag } else { -mag };
        sum += term;
        max_term = max_term.max(mag);
        if mag < prev && mag <= cfg.rel_tol * sum.abs() {
            if max_term > MAX_CANCELLATION * sum.abs() {
                return Err(Error::numeric(format!(
                    "{what}: alternating series lost too many digits to cancellation"
                )));
            }
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::NonConvergence {
        what,
        terms: cfg.max_terms,
    })
}

/// `ln E_alpha(z)` for `z >= 0`, `alpha in (0, 1]`.
pub fn ln_ml_series(alpha: f64, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    if !(z >= 0.0) {
        return Err(Error::domain("ln_ml_series needs z >= 0"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let lz = z.ln();
    let s = sum_log_series("Mittag-Leffler series", 0, 0.0, cfg, |l| {
        l as f64 * lz - ln_gamma(alpha * l as f64 + 1.0)
    })?;
    Ok(s.log_sum)
}

/// One-parameter Mittag-Leffler function `E_alpha(z)`, `alpha in (0, 1]`.
pub fn ml_series(alpha: f64, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain("z must be finite"));
    }
    if z >= 0.0 {
        return ln_ml_series(alpha, z, cfg).map(f64::exp);
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    let lz = (-z).ln();
    alternating_sum("Mittag-Leffler series", cfg, |l| {
        l as f64 * lz - ln_gamma(alpha * l as f64 + 1.0)
    })
}

/// Kernel `G_alpha(x, y) = exp(-x^{1/alpha}) y sin(pi alpha) / (pi alpha (x^2 - 2xy cos(pi alpha) + y^2))`.
pub fn ml_kernel_g(alpha: f64, x: f64, y: f64) -> f64 {
    let (s, c) = (PI * alpha).sin_cos();
    let denom = x * x - 2.0 * x * y * c + y * y;
    (-x.powf(1.0 / alpha)).exp() * y * s / (PI * alpha * denom)
}

/// `exp(-x^{1/alpha})` underflows to zero beyond this value of `x^{1/alpha}`.
const STRETCHED_EXP_CUTOFF: f64 = 745.0;

/// `int_0^inf G_alpha(x, y) dx` for `y > 0`.
///
/// The integrand is bounded and smooth on `[0, inf)` apart from the mild
/// `x^{1/alpha}` behaviour at the origin, and vanishes in double precision
/// once `x^{1/alpha}` passes 745, so the range is truncated there and
/// integrated adaptively with breaks at the kernel's peak and at `y`.
pub fn g_tail_integral(alpha: f64, y: f64, quad: &QuadratureConfig) -> Result<f64> {
    check_alpha_open(alpha)?;
    quad.validate()?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("y = {y} must be positive")));
    }
    let upper = STRETCHED_EXP_CUTOFF.powf(alpha);
    let peak = y * (PI * alpha).cos().max(0.0);
    let breaks = [peak, y, 0.5 * y, 2.0 * y, 1.0];
    integrate_adaptive(
        |x| ml_kernel_g(alpha, x, y),
        0.0,
        upper,
        &breaks,
        quad.abs_tol,
        quad.max_subdivisions,
    )
}

/// `E_alpha(z)` for `z > 0` through its integral representation.
pub fn ml_integral(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
    check_alpha_open(alpha)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("ml_integral needs finite z > 0"));
    }
    let leading = z.powf(1.0 / alpha).exp() / alpha;
    Ok(leading - g_tail_integral(alpha, z, quad)?)
}

fn check_ml3(alpha: f64, beta: f64, gamma: f64) -> Result<()> {
    check_alpha_open(alpha)?;
    if !(beta > 0.0 && gamma > 0.0) {
        return Err(Error::domain("three-parameter Mittag-Leffler needs beta > 0, gamma > 0"));
    }
    Ok(())
}

/// `ln E^gamma_{alpha,beta}(z)` for `z >= 0`.
pub fn ln_ml3_series(alpha: f64, beta: f64, gamma: f64, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_ml3(alpha, beta, gamma)?;
    if !(z >= 0.0) {
        return Err(Error::domain("ln_ml3_series needs z >= 0"));
    }
    if z == 0.0 {
        return Ok(-ln_gamma(beta));
    }
    let lz = z.ln();
    let s = sum_log_series("three-parameter Mittag-Leffler series", 0, 0.0, cfg, |l| {
        ml3_log_term(alpha, beta, gamma, lz, l)
    })?;
    Ok(s.log_sum)
}

fn ml3_log_term(alpha: f64, beta: f64, gamma: f64, lz: f64, l: usize) -> f64 {
    let lf = l as f64;
    log_rising(gamma, l as u64).expect("gamma > 0") + lf * lz
        - ln_gamma(lf + 1.0)
        - ln_gamma(alpha * lf + beta)
}

/// Three-parameter Mittag-Leffler function `E^gamma_{alpha,beta}(z)`.
pub fn ml3_series(alpha: f64, beta: f64, gamma: f64, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain("z must be finite"));
    }
    if z >= 0.0 {
        return ln_ml3_series(alpha, beta, gamma, z, cfg).map(f64::exp);
    }
    check_ml3(alpha, beta, gamma)?;
    let lz = (-z).ln();
    alternating_sum("three-parameter Mittag-Leffler series", cfg, |l| {
        ml3_log_term(alpha, beta, gamma, lz, l)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn series_special_values() {
        let cfg = SeriesConfig::default();
        assert_eq!(ml_series(0.7, 0.0, &cfg).unwrap(), 1.0);
        assert!(rel(ml_series(1.0, 1.0, &cfg).unwrap(), E) < 1e-15);
        // E_{1/2}(z) = exp(z^2) erfc(-z)
        let want = E * (1.0 + libm::erf(1.0));
        assert!((ml_series(0.5, 1.0, &cfg).unwrap() - want).abs() < 1e-10);
        assert!((want - 5.00898).abs() < 1e-5);
        for &z in &[-2.0f64, -0.5, 0.3, 1.7] {
            let want = (z * z).exp() * libm::erfc(-z);
            assert!(rel(ml_series(0.5, z, &cfg).unwrap(), want) < 1e-12, "z={z}");
        }
        for &z in &[0.5, 1.0, 2.0, -1.5] {
            assert!(rel(ml_series(1.0, z, &cfg).unwrap(), f64::exp(z)) < 1e-14);
        }
    }

    #[test]
    fn series_errors() {
        let cfg = SeriesConfig::default();
        assert!(ml_series(0.0, 1.0, &cfg).unwrap_err().is_domain());
        assert!(ml_series(1.2, 1.0, &cfg).unwrap_err().is_domain());
        let tight = SeriesConfig { rel_tol: 1e-14, max_terms: 10 };
        assert!(matches!(ml_series(0.5, 30.0, &tight), Err(Error::NonConvergence { terms: 10, .. })));
        // deep alternating cancellation is refused rather than returned wrong
        assert!(ml_series(0.5, -40.0, &cfg).is_err());
    }

    #[test]
    fn log_series_beyond_overflow() {
        let cfg = SeriesConfig::default();
        // E_1(z) = e^z even where e^z overflows
        assert!(rel(ln_ml_series(1.0, 900.0, &cfg).unwrap(), 900.0) < 1e-13);
        // leading asymptotics exp(z^{1/a}) / a
        let a = 0.5;
        let z: f64 = 30.0;
        let lead = z.powf(1.0 / a) - a.ln();
        assert!((ln_ml_series(a, z, &cfg).unwrap() - lead).abs() < 1e-10);
    }

    #[test]
    fn kernel_values_and_bound() {
        let g = ml_kernel_g(0.5, 1.0, 1.0);
        assert!((g - (2.0 / PI) * (-1.0f64).exp() / 2.0).abs() < 1e-15);
        assert!((g - 0.117099).abs() < 1e-6);
        let g2 = ml_kernel_g(0.5, 2.0, 1.0);
        assert!((g2 - (2.0 / PI) * (-4.0f64).exp() / 5.0).abs() < 1e-15);
        assert!((g2 - 0.002332).abs() < 1e-6);
    }

    #[test]
    fn kernel_positive_and_bounded_on_grid() {
        for &a in &[0.2, 0.45, 0.7, 0.95] {
            for i in 0..10 {
                for j in 0..10 {
                    let x = 0.05 + 0.4 * i as f64;
                    let y = 0.01 * 3f64.powi(j);
                    let g = ml_kernel_g(a, x, y);
                    let bound = (-x.powf(1.0 / a)).exp() / (PI * a * (PI * a).sin() * y);
                    assert!(g > 0.0 && g <= bound * (1.0 + 1e-12), "a={a} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn tail_integral_bound_and_decay() {
        let quad = QuadratureConfig::default();
        let a = 0.5;
        let bound = |y: f64| ln_gamma(a).exp() / (PI * (PI * a).sin() * y);
        let v10 = g_tail_integral(a, 10.0, &quad).unwrap();
        assert!(v10 > 0.0 && v10 <= bound(10.0));
        assert!((bound(10.0) - 0.056419).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for &y in &[1.0, 10.0, 100.0, 1000.0] {
            let v = g_tail_integral(a, y, &quad).unwrap();
            assert!(v < prev && v <= bound(y));
            prev = v;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn tail_integral_matches_series_deficit() {
        let quad = QuadratureConfig::default();
        let series = ml_series(0.5, 1.0, &SeriesConfig::default()).unwrap();
        let want = 2.0 * E - series;
        assert!((g_tail_integral(0.5, 1.0, &quad).unwrap() - want).abs() < 1e-9);
        assert!((want - 0.427584).abs() < 1e-6);
        // y -> 0 limit of the tail integral is (1 - a) / a
        for &a in &[0.3, 0.6] {
            let v = g_tail_integral(a, 1e-6, &quad).unwrap();
            assert!((v - (1.0 - a) / a).abs() < 1e-5);
        }
        assert!(g_tail_integral(0.5, 0.0, &quad).unwrap_err().is_domain());
    }

    #[test]
    fn integral_matches_series() {
        let quad = QuadratureConfig::default();
        let cfg = SeriesConfig::default();
        let want = E * (1.0 + libm::erf(1.0));
        assert!(rel(ml_integral(0.5, 1.0, &quad).unwrap(), want) < 1e-9);
        for &(a, z) in &[(0.3, 0.5), (0.7, 4.0), (0.9, 0.1), (0.3, 5.0)] {
            let s = ml_series(a, z, &cfg).unwrap();
            assert!(rel(ml_integral(a, z, &quad).unwrap(), s) < 1e-8, "a={a} z={z}");
        }
        assert!(ml_integral(0.5, -1.0, &quad).unwrap_err().is_domain());
        assert!(ml_integral(1.0, 1.0, &quad).unwrap_err().is_domain());
    }

    #[test]
    fn three_parameter_series() {
        let cfg = SeriesConfig::default();
        for &(a, z) in &[(0.3, 0.7), (0.5, 2.0), (0.8, -0.6)] {
            let one = ml_series(a, z, &cfg).unwrap();
            assert!(rel(ml3_series(a, 1.0, 1.0, z, &cfg).unwrap(), one) < 1e-13);
        }
        for &b in &[0.5, 1.0, 2.5] {
            let v = ml3_series(0.4, b, 1.7, 0.0, &cfg).unwrap();
            assert!(rel(v, 1.0 / libm::tgamma(b)) < 1e-14);
        }
        // plain 200-term partial sum with direct gamma evaluations
        let (a, b, g, z) = (0.5, 1.5, 2.0, 0.3f64);
        let mut brute = 0.0;
        let mut rising = 1.0;
        let mut fact = 1.0;
        for l in 0..200 {
            if l > 0 {
                rising *= g + (l - 1) as f64;
                fact *= l as f64;
            }
            let term = rising * z.powi(l) / (fact * libm::tgamma(a * l as f64 + b));
            if !term.is_finite() {
                break;
            }
            brute += term;
        }
        assert!(rel(ml3_series(a, b, g, z, &cfg).unwrap(), brute) < 1e-13);
        assert!(ml3_series(0.5, 0.0, 1.0, 0.2, &cfg).is_err());
        assert!(ml3_series(0.5, 1.0, -1.0, 0.2, &cfg).is_err());
    }
}
