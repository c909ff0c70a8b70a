//! Quadrature rules: generalized Gauss-Laguerre tables and adaptive
//! Gauss-Kronrod integration on finite intervals.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Settings shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub laguerre_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_subdivisions: 2000,
            laguerre_nodes: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || self.max_subdivisions == 0 || self.laguerre_nodes == 0 {
            return Err(Error::domain("quadrature config entries must be positive"));
        }
        Ok(())
    }
}

/// Nodes and log-weights of the `n`-point rule for `int_0^inf x^a e^{-x} f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub exponent: f64,
    pub nodes: Vec<f64>,
    pub log_weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the
    /// generalized Laguerre polynomials.
    pub fn new(n: usize, exponent: f64) -> Result<Self> {
        if n == 0 || !(exponent > -1.0) {
            return Err(Error::domain(format!(
                "Gauss-Laguerre needs n >= 1 and exponent > -1 (got n={n}, a={exponent})"
            )));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            jacobi[(i, i)] = 2.0 * i as f64 + exponent + 1.0;
            if i + 1 < n {
                let b = ((i as f64 + 1.0) * (i as f64 + 1.0 + exponent)).sqrt();
                jacobi[(i, i + 1)] = b;
                jacobi[(i + 1, i)] = b;
            }
        }
        let eig = SymmetricEigen::new(jacobi);
        let log_mu0 = ln_gamma(exponent + 1.0);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let v0 = eig.eigenvectors[(0, j)];
                (eig.eigenvalues[j], log_mu0 + 2.0 * v0.abs().ln())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(GaussLaguerre {
            exponent,
            nodes: pairs.iter().map(|p| p.0).collect(),
            log_weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Cached rule; tables are built once per `(n, exponent)` and shared.
    pub fn cached(n: usize, exponent: f64) -> Result<Arc<GaussLaguerre>> {
        type Cache = Mutex<HashMap<(usize, u64), Arc<GaussLaguerre>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let key = (n, exponent.to_bits());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&key) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(GaussLaguerre::new(n, exponent)?);
        cache
            .lock()
            .expect("quadrature cache poisoned")
            .insert(key, rule.clone());
        Ok(rule)
    }

    /// Node indices whose weight exceeds `exp(-drop)` times the largest weight.
    pub fn significant(&self, drop: f64) -> impl Iterator<Item = usize> + '_ {
        let max = self
            .log_weights
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.nodes.len()).filter(move |&i| self.log_weights[i] > max - drop)
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn gauss_kronrod_21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive 21-point Gauss-Kronrod integration over `[a, b]`,
/// starting from the given interior breakpoints. Fails if `abs_tol` is not
/// reached within `max_subdivisions` bisections.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    if !(a < b) {
        return Ok(0.0);
    }
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().cloned().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let (value, error) = gauss_kronrod_21(&mut f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Piece { a: w[0], b: w[1], value, error });
    }
    let mut splits = 0;
    while total_err > abs_tol {
        if splits >= max_subdivisions {
            return Err(Error::numeric(format!(
                "adaptive quadrature reached {max_subdivisions} subdivisions with error estimate {total_err:e}"
            )));
        }
        let worst = heap.pop().expect("at least one interval");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::numeric("adaptive quadrature interval underflow"));
        }
        let (v1, e1) = gauss_kronrod_21(&mut f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
        splits += 1;
        if splits % 64 == 0 {
            // refresh the running sums to shed accumulated rounding
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    if !total.is_finite() {
        return Err(Error::numeric("adaptive quadrature produced a non-finite value"));
    }
    Ok(total)
}
