//! Log-domain magnitudes and accumulation.

use super::extended::CompensatedSum;
use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};
use std::ops::Mul;

/// Natural log of a non-negative magnitude; `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(pub f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_linear(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            LogValue::ZERO
        } else {
            LogValue(self.0 + rhs.0)
        }
    }
}

/// `ln Σ exp(vᵢ)` with max-shift and compensated accumulation.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("log_sum_exp of an empty sequence"));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return Ok(max);
    }
    let sum: CompensatedSum = values.iter().map(|&v| (v - max).exp()).collect();
    Ok(max + sum.value().ln())
}

/// Exact `C(n, k)` while it fits in 128 bits (always true for n ≤ 128).
fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 1..=k {
        // acc·(n−k+j) is divisible by j at every step
        acc = acc.checked_mul((n - k + j) as u128)? / j as u128;
    }
    Some(acc)
}

/// Exact `C(n, k)` as f64 (rounded once) where it fits in 128 bits.
pub fn binomial_f64(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!("binomial C({n}, {k}) has k > n")));
    }
    match binomial_u128(n, k) {
        Some(v) => Ok(v as f64),
        None => Ok(log_binomial(n, k)?.exp()),
    }
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!("binomial C({n}, {k}) has k > n")));
    }
    if k == 0 || k == n {
        return Ok(0.0);
    }
    if n <= 128 {
        if let Some(v) = binomial_u128(n, k) {
            return Ok((v as f64).ln());
        }
    }
    let (n, k) = (n as f64, k as f64);
    Ok(ln_gamma_unchecked(n + 1.0) - ln_gamma_unchecked(k + 1.0) - ln_gamma_unchecked(n - k + 1.0))
}
