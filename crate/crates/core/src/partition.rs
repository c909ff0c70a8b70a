//! The Ewens-Pitman partition model: partition probabilities, exhaustive
//! enumeration for small `n`, the exact law of the block count `K_n` and
//! samplers for it.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{log_rising, ModelParams};
use crate::rng::stream_rng;
use crate::special::{ln_gamma, LogSumAcc};

/// Largest `n` accepted by [`enumerate_partitions`].
pub const ENUMERATION_MAX_N: usize = 25;
/// Largest `n` accepted by [`exact_mgf_enumeration`].
pub const MGF_ENUMERATION_MAX_N: usize = 12;
/// Largest `n` accepted by [`kn_distribution`] (quadratic cost).
pub const KN_DISTRIBUTION_MAX_N: usize = 100_000;

/// Multiplicity vector `(k_1, ..., k_n)` of a partition of `n`:
/// `k_i` is the number of blocks of size `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartitionCounts {
    counts: Vec<u32>,
}

impl PartitionCounts {
    /// Validates `sum_i i * k_i = n` where `n = counts.len()`.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        let n = counts.len();
        if n == 0 {
            return Err(Error::domain("a partition needs n >= 1"));
        }
        let total: u64 = counts
            .iter()
            .enumerate()
            .map(|(i, &k)| (i as u64 + 1) * k as u64)
            .sum();
        if total != n as u64 {
            return Err(Error::domain(format!(
                "multiplicities describe {total} elements, expected {n}"
            )));
        }
        Ok(PartitionCounts { counts })
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// `K = sum_i k_i`.
    pub fn num_blocks(&self) -> usize {
        self.counts.iter().map(|&k| k as usize).sum()
    }

    /// `k_r`, the number of blocks of size `r` (1-based).
    pub fn blocks_of_size(&self, r: usize) -> u32 {
        if r == 0 || r > self.counts.len() {
            0
        } else {
            self.counts[r - 1]
        }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Log-probability of a multiplicity vector under the Ewens-Pitman model.
///
/// Uses the cancelled form `theta (theta+alpha) ... (theta+(K-1)alpha) / (theta)^{(n)}`
/// with the leading `theta` divided out, so every base stays positive for
/// `theta in (-alpha, 0]` as well. With `alpha = 0` the block weights reduce
/// to the Ewens sampling formula.
pub fn eppf_log_prob(params: &ModelParams, counts: &PartitionCounts) -> f64 {
    let n = counts.n() as u64;
    let k = counts.num_blocks() as u64;
    let (alpha, theta) = (params.alpha(), params.theta());

    // prod_{j=1}^{K-1} (theta + j alpha)
    let block_creation = match params.theta_alpha() {
        Some(ta) => (k - 1) as f64 * alpha.ln() + rising(ta + 1.0, k - 1),
        None => (k - 1) as f64 * theta.ln(),
    };
    let mut lp = ln_gamma(n as f64 + 1.0) + block_creation - rising(theta + 1.0, n - 1);
    for (i, &ki) in counts.counts().iter().enumerate() {
        if ki == 0 {
            continue;
        }
        let size = i as u64 + 1;
        let block_weight = rising(1.0 - alpha, size - 1) - ln_gamma(size as f64 + 1.0);
        lp += ki as f64 * block_weight - ln_gamma(ki as f64 + 1.0);
    }
    lp
}

// every base passed here is strictly positive by construction
fn rising(a: f64, n: u64) -> f64 {
    log_rising(a, n).expect("positive rising-factorial base")
}

/// All integer partitions of `n` as multiplicity vectors, in reverse
/// lexicographic order of their parts (`n` first, all singletons last).
pub fn enumerate_partitions(n: usize) -> Result<Vec<PartitionCounts>> {
    if n == 0 || n > ENUMERATION_MAX_N {
        return Err(Error::domain(format!(
            "enumeration supports 1 <= n <= {ENUMERATION_MAX_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut counts = vec![0u32; n];
    fill_partitions(n, n, &mut counts, &mut out);
    Ok(out)
}

fn fill_partitions(remaining: usize, max_part: usize, counts: &mut Vec<u32>, out: &mut Vec<PartitionCounts>) {
    if remaining == 0 {
        out.push(PartitionCounts {
            counts: counts.clone(),
        });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        counts[part - 1] += 1;
        fill_partitions(remaining - part, part, counts, out);
        counts[part - 1] -= 1;
    }
}

/// Exact law of `K_n`: `probs()[k-1] = P(K_n = k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnDistribution {
    probs: Vec<f64>,
}

impl KnDistribution {
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(K_n = k)`, zero outside `1..=n`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k == 0 || k > self.probs.len() {
            0.0
        } else {
            self.probs[k - 1]
        }
    }

    /// `P(K_n >= k)`.
    pub fn tail(&self, k: usize) -> f64 {
        if k <= 1 {
            return 1.0;
        }
        // summed from the far end so tiny tails keep their relative accuracy
        self.probs.iter().skip(k - 1).rev().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    /// `ln E[exp(t K_n)]`, valid for any real `t`.
    pub fn log_mgf(&self, t: f64) -> f64 {
        let mut acc = LogSumAcc::new();
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                acc.add(p.ln() + t * (i + 1) as f64);
            }
        }
        acc.value()
    }
}

/// Probability that element `m + 1` opens a new block given `k` blocks
/// among the first `m`: `(theta + alpha k) / (theta + m)`.
#[inline]
fn new_block_prob(alpha: f64, theta: f64, m: usize, k: usize) -> f64 {
    (theta + alpha * k as f64) / (theta + m as f64)
}

/// Exact distribution of `K_n` by forward recursion over the sequential
/// construction. `O(n^2)` time, `O(n)` memory.
pub fn kn_distribution(params: &ModelParams, n: usize) -> Result<KnDistribution> {
    if n == 0 || n > KN_DISTRIBUTION_MAX_N {
        return Err(Error::domain(format!(
            "kn_distribution supports 1 <= n <= {KN_DISTRIBUTION_MAX_N}, got {n}"
        )));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let mut probs = vec![0.0f64; n];
    probs[0] = 1.0;
    for m in 1..n {
        let denom = theta + m as f64;
        // index j holds P(K_m = j + 1); update in place from the top
        for j in (1..=m).rev() {
            let stay = (m as f64 - alpha * (j + 1) as f64) / denom;
            let jump = new_block_prob(alpha, theta, m, j);
            probs[j] = probs[j] * stay.max(0.0) + probs[j - 1] * jump;
        }
        probs[0] *= (m as f64 - alpha) / denom;
    }
    Ok(KnDistribution { probs })
}

/// `E[K_n]` through the linear recursion `E_{m+1} = E_m (1 + alpha/(theta+m)) + theta/(theta+m)`.
pub fn mean_blocks(params: &ModelParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let mut mean = 1.0;
    for m in 1..n {
        let denom = theta + m as f64;
        mean += (theta + alpha * mean) / denom;
    }
    Ok(mean)
}

/// One simulated value of `K_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleResult {
    pub k_n: u64,
    /// Block multiplicities; the samplers only track `K_n`, so this is `None`.
    pub counts: Option<PartitionCounts>,
    pub seed: u64,
}

/// Runs the block-count chain with the supplied generator.
pub fn simulate_kn<R: Rng + ?Sized>(params: &ModelParams, n: usize, rng: &mut R) -> u64 {
    let (alpha, theta) = (params.alpha(), params.theta());
    let mut k = 1usize;
    for m in 1..n {
        let u: f64 = rng.random();
        if u < new_block_prob(alpha, theta, m, k) {
            k += 1;
        }
    }
    k as u64
}

/// `K_n` for replicate `stream` under `seed`.
pub fn crp_sample_stream(params: &ModelParams, n: usize, seed: u64, stream: u64) -> u64 {
    simulate_kn(params, n, &mut stream_rng(seed, stream))
}

/// Samples `K_n` by the sequential construction. Deterministic in `seed`.
pub fn crp_sample(params: &ModelParams, n: usize, seed: u64) -> Result<SampleResult> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(SampleResult {
        k_n: crp_sample_stream(params, n, seed, 0),
        counts: None,
        seed,
    })
}

/// Ewens case: `K_n` as a sum of independent `Bernoulli(theta / (theta + i - 1))`.
pub fn ewens_bernoulli_sample(theta: f64, n: usize, seed: u64) -> Result<SampleResult> {
    ewens_bernoulli_stream(theta, n, seed, 0).map(|k_n| SampleResult {
        k_n,
        counts: None,
        seed,
    })
}

pub fn ewens_bernoulli_stream(theta: f64, n: usize, seed: u64, stream: u64) -> Result<u64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!("theta must be positive, got {theta}")));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let mut rng = stream_rng(seed, stream);
    let mut k = 0u64;
    for i in 1..=n {
        let u: f64 = rng.random();
        if u < theta / (theta + (i - 1) as f64) {
            k += 1;
        }
    }
    Ok(k)
}

/// `E[exp(t K_n)]` by summing over every partition of `n`.
pub fn exact_mgf_enumeration(params: &ModelParams, n: usize, t: f64) -> Result<f64> {
    if n == 0 || n > MGF_ENUMERATION_MAX_N {
        return Err(Error::domain(format!(
            "enumeration MGF supports 1 <= n <= {MGF_ENUMERATION_MAX_N}, got {n}"
        )));
    }
    let mut acc = LogSumAcc::new();
    for p in enumerate_partitions(n)? {
        acc.add(eppf_log_prob(params, &p) + t * p.num_blocks() as f64);
    }
    Ok(acc.value().exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, t: f64) -> ModelParams {
        ModelParams::new(a, t).unwrap()
    }

    /// p(n) through the number of partitions of n with parts at most k.
    fn partition_count(n: usize, k: usize) -> usize {
        if n == 0 {
            return 1;
        }
        if k == 0 {
            return 0;
        }
        if k > n {
            return partition_count(n, n);
        }
        partition_count(n, k - 1) + partition_count(n - k, k)
    }

    #[test]
    fn counts_validation() {
        assert!(PartitionCounts::new(vec![1, 1, 0]).is_ok());
        assert!(PartitionCounts::new(vec![1, 1]).is_err());
        assert!(PartitionCounts::new(vec![]).is_err());
        let c = PartitionCounts::new(vec![2, 0, 1, 0, 0]).unwrap();
        assert_eq!(c.num_blocks(), 3);
        assert_eq!(c.blocks_of_size(3), 1);
        assert_eq!(c.blocks_of_size(9), 0);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 3);
        assert_eq!(enumerate_partitions(5).unwrap().len(), 7);
        for n in 1..=ENUMERATION_MAX_N {
            let parts = enumerate_partitions(n).unwrap();
            assert_eq!(parts.len(), partition_count(n, n), "n = {n}");
            let unique: std::collections::HashSet<_> = parts.iter().collect();
            assert_eq!(unique.len(), parts.len());
        }
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(26).is_err());
        let order = enumerate_partitions(3).unwrap();
        assert_eq!(order[0].counts(), &[0, 0, 1]);
        assert_eq!(order[2].counts(), &[3, 0, 0]);
    }

    #[test]
    fn eppf_examples() {
        let single = PartitionCounts::new(vec![1]).unwrap();
        let pair = PartitionCounts::new(vec![0, 1]).unwrap();
        for &(a, t) in &[(0.25, -0.1), (0.5, 0.0), (0.75, 1.0), (0.0, 2.0)] {
            let p = params(a, t);
            assert!(eppf_log_prob(&p, &single).abs() < 1e-15);
            let expected = ((1.0 - a) / (1.0 + t)).ln();
            assert!((eppf_log_prob(&p, &pair) - expected).abs() < 1e-14);
        }
        let singletons = PartitionCounts::new(vec![3, 0, 0]).unwrap();
        assert!((eppf_log_prob(&params(0.5, 0.0), &singletons) - 0.25f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn eppf_normalizes() {
        for &a in &[0.0, 0.25, 0.5, 0.75] {
            for &t in &[-0.1, 0.0, 0.5, 1.0] {
                if t <= -a || (a == 0.0 && t <= 0.0) {
                    continue;
                }
                let p = params(a, t);
                for n in 1..=10 {
                    let total: f64 = enumerate_partitions(n)
                        .unwrap()
                        .iter()
                        .map(|c| eppf_log_prob(&p, c).exp())
                        .sum();
                    assert!((total - 1.0).abs() < 1e-10, "a={a} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn kn_distribution_examples() {
        let p = params(0.5, 0.0);
        assert_eq!(kn_distribution(&p, 1).unwrap().probs(), &[1.0]);
        let d2 = kn_distribution(&p, 2).unwrap();
        assert!((d2.pmf(1) - 0.5).abs() < 1e-15 && (d2.pmf(2) - 0.5).abs() < 1e-15);
        let d3 = kn_distribution(&p, 3).unwrap();
        for (got, want) in d3.probs().iter().zip([0.375, 0.375, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((d3.tail(2) - 0.625).abs() < 1e-15);
        assert!(kn_distribution(&p, 0).is_err());
        assert!(kn_distribution(&p, KN_DISTRIBUTION_MAX_N + 1).is_err());
    }

    #[test]
    fn kn_distribution_matches_enumeration() {
        for &(a, t) in &[(0.25, -0.1), (0.5, 0.0), (0.5, 1.0), (0.75, 0.5), (0.0, 1.5)] {
            let p = params(a, t);
            for n in 1..=10 {
                let mut marg = vec![0.0; n];
                for c in enumerate_partitions(n).unwrap() {
                    marg[c.num_blocks() - 1] += eppf_log_prob(&p, &c).exp();
                }
                let d = kn_distribution(&p, n).unwrap();
                for (x, y) in marg.iter().zip(d.probs()) {
                    assert!((x - y).abs() < 1e-12, "a={a} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn ewens_limit_is_bernoulli_sum() {
        for &theta in &[0.3, 1.0, 4.0] {
            let n = 60;
            // DP over independent Bernoulli(theta/(theta+i-1))
            let mut dp = vec![0.0f64; n + 1];
            dp[0] = 1.0;
            for i in 1..=n {
                let pr = theta / (theta + (i - 1) as f64);
                for k in (1..=i).rev() {
                    dp[k] = dp[k] * (1.0 - pr) + dp[k - 1] * pr;
                }
                dp[0] *= 1.0 - pr;
            }
            let d = kn_distribution(&params(0.0, theta), n).unwrap();
            for k in 1..=n {
                assert!((d.pmf(k) - dp[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_recursion_matches_distribution() {
        for &(a, t) in &[(0.3, -0.2), (0.5, 0.0), (0.0, 2.0), (0.8, 5.0)] {
            let p = params(a, t);
            let d = kn_distribution(&p, 300).unwrap();
            let m = mean_blocks(&p, 300).unwrap();
            assert!((d.mean() - m).abs() < 1e-10 * m);
        }
    }

    #[test]
    fn distribution_sums_to_one_at_large_n() {
        let d = kn_distribution(&params(0.6, 2.0), 5000).unwrap();
        let s: f64 = d.probs().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(d.probs().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn samplers_basic_contracts() {
        let p = params(0.5, 0.0);
        assert_eq!(crp_sample(&p, 1, 99).unwrap().k_n, 1);
        assert_eq!(crp_sample(&p, 50, 7).unwrap(), crp_sample(&p, 50, 7).unwrap());
        assert_eq!(ewens_bernoulli_sample(2.0, 1, 5).unwrap().k_n, 1);
        assert!(ewens_bernoulli_sample(0.0, 3, 5).unwrap_err().is_domain());
        for s in 0..200 {
            let k = crp_sample(&params(0.7, 3.0), 40, s).unwrap().k_n;
            assert!((1..=40).contains(&k));
            let k2 = ewens_bernoulli_sample(1.0, 2, s).unwrap().k_n;
            assert!(k2 == 1 || k2 == 2);
        }
    }

    #[test]
    fn ewens_sampler_mean() {
        let draws = 200_000u64;
        let total: u64 = (0..draws).map(|i| ewens_bernoulli_stream(1.0, 4, 11, i).unwrap()).sum();
        let mean = total as f64 / draws as f64;
        let exact = 25.0 / 12.0;
        let var: f64 = (1..=4).map(|i| {
            let p = 1.0 / i as f64;
            p * (1.0 - p)
        }).sum();
        assert!((mean - exact).abs() < 4.0 * (var / draws as f64).sqrt());
    }

    #[test]
    fn mgf_enumeration_examples() {
        let p = params(0.5, 0.0);
        assert!((exact_mgf_enumeration(&p, 7, 0.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((exact_mgf_enumeration(&p, 1, 0.8).unwrap() - 0.8f64.exp()).abs() < 1e-14);
        let e = std::f64::consts::E;
        let want = 0.5 * e * e + 0.5 * e;
        assert!((exact_mgf_enumeration(&p, 2, 1.0).unwrap() - want).abs() < 1e-13);
        assert!((want - 5.05367).abs() < 1e-5);
        assert!(exact_mgf_enumeration(&p, 13, 1.0).is_err());
    }
}
