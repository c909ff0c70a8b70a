use ewens_ldp_core::harness::wilson_interval;
use ewens_ldp_core::ldp::{rate_alpha, RateEvalConfig};
use ewens_ldp_core::mgf::{mgf_series_theta0, mgf_sandwich_theta0};
use ewens_ldp_core::model::log_rising;
use ewens_ldp_core::partition::{enumerate_partitions, eppf_log_prob, kn_distribution};
use ewens_ldp_core::series::SeriesConfig;
use ewens_ldp_core::special::log_sum_exp;
use ewens_ldp_core::ModelParams;
use proptest::prelude::*;

fn pitman() -> impl Strategy<Value = ModelParams> {
    (0.05f64..0.95, 0.0f64..1.0, 0.0f64..3.0).prop_map(|(a, u, th)| {
        // theta ranges over (-alpha, 3)
        let theta = if u < 0.3 { -a * (u / 0.3) * 0.95 } else { th };
        ModelParams::new(a, theta).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rising_factorial_composes(a in 0.01f64..50.0, m in 0u64..40, k in 0u64..40) {
        let whole = log_rising(a, m + k).unwrap();
        let split = log_rising(a, m).unwrap() + log_rising(a + m as f64, k).unwrap();
        prop_assert!((whole - split).abs() <= 1e-11 * whole.abs().max(1.0));
    }

    #[test]
    fn eppf_sums_to_one(p in pitman(), n in 1usize..=9) {
        let logs: Vec<f64> = enumerate_partitions(n).unwrap().iter().map(|c| eppf_log_prob(&p, c)).collect();
        prop_assert!(log_sum_exp(&logs).abs() < 1e-12);
    }

    #[test]
    fn kn_law_is_a_distribution(p in pitman(), n in 1usize..200) {
        let law = kn_distribution(&p, n).unwrap();
        prop_assert!(law.probs().iter().all(|&q| q >= 0.0));
        prop_assert!((law.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(law.mean() >= 1.0 - 1e-12 && law.mean() <= n as f64 + 1e-9);
    }

    #[test]
    fn rate_is_convex_and_increasing(a in 0.05f64..0.95, x in 0.02f64..0.97, h in 0.001f64..0.02) {
        let cfg = RateEvalConfig::default();
        let r = |x: f64| rate_alpha(a, x, &cfg).unwrap().rate;
        let (lo, mid, hi) = (r(x - h), r(x), r(x + h));
        prop_assert!(lo <= mid + 1e-14 && mid <= hi + 1e-14);
        prop_assert!(lo + hi - 2.0 * mid >= -1e-12);
        prop_assert!(mid <= (1.0 / a).ln());
    }

    #[test]
    fn series_inside_sandwich(a in 0.1f64..0.9, n in 20usize..300, t in 0.05f64..3.0) {
        let cfg = SeriesConfig { rel_tol: 1e-14, max_terms: 2_000_000 };
        let m = mgf_series_theta0(a, n, t, &cfg).unwrap().value;
        let b = mgf_sandwich_theta0(a, n, t).unwrap();
        prop_assume!(b.upper.is_finite());
        prop_assert!(m <= b.upper * (1.0 + 1e-12));
        prop_assert!(m >= b.lower - 1e-12 * b.upper);
    }

    #[test]
    fn wilson_brackets_estimate(reps in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let hits = ((reps as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(hits, reps);
        let p = hits as f64 / reps as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-15 && p <= hi + 1e-15 && hi <= 1.0);
    }
}
