//! Scalar helpers: log-gamma, stable `ln(1 - e^{-t})` and streaming log-sum-exp.

/// Natural log of the gamma function for positive arguments.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln(1 - e^{-t})` for `t > 0`, accurate both for tiny and large `t`.
pub fn ln_one_minus_exp_neg(t: f64) -> f64 {
    debug_assert!(t > 0.0);
    if t <= std::f64::consts::LN_2 {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    }
}

/// Log of a sum of exponentials, ignoring `-inf` entries.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let mut acc = LogSumAcc::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Streaming accumulator for `ln(sum exp(v_i))`.
#[derive(Debug, Clone, Copy)]
pub struct LogSumAcc {
    max: f64,
    scaled: f64,
}

impl Default for LogSumAcc {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumAcc {
    pub fn new() -> Self {
        LogSumAcc {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn add(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.max {
            self.scaled += (v - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}
