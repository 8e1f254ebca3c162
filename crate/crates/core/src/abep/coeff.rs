//! Series constants of the ABEP expansion.
//!
//! For a noise slot with `M` modes the survival function is
//! `e^{-y} S_M(y)` with `S_M(y) = Σ_{k<M} y^k/k!`. Raising it to the power `q`
//! gives `S_M(y)^q = Σ_i (c_i^q / i!) y^i`, which defines the integer constants
//! `c_i^q = i! [y^i] S_M(y)^q` (the number of ways to spread `i` labelled
//! photons over `q` slots with fewer than `M` in each).
//!
//! Everything here depends only on `(M, q)`, so each pair is computed once in
//! extended-exponent double-double arithmetic and cached. Besides the table
//! itself the cache holds the fade-independent inner sums
//!
//! `B_n = Σ_{i=n}^{q(M−1)} C(i+M−1, n+M−1) c_i^q / (1+q)^{i+M}`,
//!
//! which reduce each ABEP evaluation to one pass over `n`.

use crate::error::{Error, Result};
use crate::numerics::ExtFloat;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Log-domain coefficients `ln c_i^q`, `i = 0..=q(M−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub noise_modes: u32,
    pub q: u32,
    pub log_c: Vec<f64>,
}

impl CoeffTable {
    pub fn len(&self) -> usize {
        self.log_c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_c.is_empty()
    }

    /// Linear coefficients (overflow to infinity for large tables).
    pub fn linear(&self) -> Vec<f64> {
        self.log_c.iter().map(|l| l.exp()).collect()
    }
}

/// A positive number held as `mantissa · 2^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mantissa: f64,
    pub exponent: i64,
}

#[derive(Debug)]
pub(crate) struct SeriesTerms {
    pub table: CoeffTable,
    /// Polynomial coefficients `[y^i] S_M(y)^q`, kept for the next power.
    poly: Vec<ExtFloat>,
    /// `B_n`, `n = 0..=q(M−1)`.
    pub inner: Vec<Scaled>,
}

type Cell = Arc<OnceLock<Arc<SeriesTerms>>>;

fn cache() -> &'static RwLock<HashMap<(u32, u32), Cell>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), Cell>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn validate(m: u32, q: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("noise mode count M must be >= 1"));
    }
    if q == 0 {
        return Err(Error::domain("series index q must be >= 1"));
    }
    Ok(())
}

/// Cached series constants for `(M, q)`.
///
/// Readers share the map lock; each entry is filled exactly once, other
/// callers for the same key block on that fill.
pub(crate) fn series_terms(m: u32, q: u32) -> Result<Arc<SeriesTerms>> {
    validate(m, q)?;
    let key = (m, q);
    let cell = {
        let map = cache().read().expect("coefficient cache poisoned");
        map.get(&key).cloned()
    };
    let cell = match cell {
        Some(c) => c,
        None => {
            let mut map = cache().write().expect("coefficient cache poisoned");
            map.entry(key).or_default().clone()
        }
    };
    if let Some(terms) = cell.get() {
        return Ok(terms.clone());
    }
    // the previous power is filled outside this cell's initializer so no
    // two cells are ever held at once
    let prev = if q > 1 {
        Some(series_terms(m, q - 1)?)
    } else {
        None
    };
    Ok(cell
        .get_or_init(|| Arc::new(build(m, q, prev.as_deref())))
        .clone())
}

/// Coefficient table `ln c_i^q` for `M` noise modes.
pub fn coeff_table(m: u32, q: u32) -> Result<CoeffTable> {
    Ok(series_terms(m, q)?.table.clone())
}

fn factorials(n: usize) -> (Vec<ExtFloat>, Vec<ExtFloat>) {
    let mut fact = Vec::with_capacity(n + 1);
    let mut inv = Vec::with_capacity(n + 1);
    fact.push(ExtFloat::one());
    inv.push(ExtFloat::one());
    for k in 1..=n {
        fact.push(fact[k - 1].mul_f64(k as f64));
        inv.push(inv[k - 1].div_f64(k as f64));
    }
    (fact, inv)
}

fn build(m: u32, q: u32, prev: Option<&SeriesTerms>) -> SeriesTerms {
    let mu = m as usize;
    let len = q as usize * (mu - 1) + 1;
    let (fact, inv_fact) = factorials(len + mu);

    // S_M^q = S_M^{q−1} · S_M
    let poly: Vec<ExtFloat> = match prev {
        None => inv_fact[..mu].to_vec(),
        Some(p) => {
            let mut out = vec![ExtFloat::ZERO; len];
            for (j, &a) in p.poly.iter().enumerate() {
                for (k, &b) in inv_fact[..mu].iter().enumerate() {
                    out[j + k] = out[j + k] + a * b;
                }
            }
            out
        }
    };
    debug_assert_eq!(poly.len(), len);

    let c: Vec<ExtFloat> = poly.iter().zip(&fact).map(|(&p, &f)| p * f).collect();
    let log_c = c.iter().map(|v| v.ln()).collect();

    // a_i = c_i (i+M−1)! / (1+q)^{i+M}, then B_n = Σ_i a_i / (i−n)! / (n+M−1)!
    let ratio = 1.0 + q as f64;
    let mut power = ExtFloat::one();
    for _ in 0..mu {
        power = power.div_f64(ratio);
    }
    let mut a = Vec::with_capacity(len);
    for i in 0..len {
        a.push(c[i] * fact[i + mu - 1] * power);
        power = power.div_f64(ratio);
    }
    let inner = (0..len)
        .map(|n| {
            let mut acc = ExtFloat::ZERO;
            for i in n..len {
                acc = acc + a[i] * inv_fact[i - n];
            }
            let (mantissa, exponent) = (acc * inv_fact[n + mu - 1]).to_parts();
            Scaled { mantissa, exponent }
        })
        .collect();

    SeriesTerms {
        table: CoeffTable {
            noise_modes: m,
            q,
            log_c,
        },
        poly,
        inner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(m: u32, q: u32) -> Vec<f64> {
        coeff_table(m, q).unwrap().linear()
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-13 * w.abs(), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn single_mode_is_constant() {
        for q in 1..6 {
            assert_eq!(coeff_table(1, q).unwrap().log_c, vec![0.0]);
        }
    }

    #[test]
    fn two_modes_squared() {
        // (1+y)^2 = 1 + 2y + y^2  ->  c_i = i!·[1, 2, 1]
        assert_close(&linear(2, 2), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn three_modes_squared() {
        // (1 + y + y²/2)² = 1 + 2y + 2y² + y³ + y⁴/4  ->  i!·(…) = [1, 2, 4, 6, 6]
        assert_close(&linear(3, 2), &[1.0, 2.0, 4.0, 6.0, 6.0]);
    }

    #[test]
    fn leading_entry_is_one() {
        for &(m, q) in &[(2, 7), (10, 3), (200, 2)] {
            let t = coeff_table(m, q).unwrap();
            assert_eq!(t.len(), (q * (m - 1) + 1) as usize);
            assert!(t.log_c[0].abs() < 1e-15);
            assert!(t.log_c.iter().all(|l| l.is_finite()));
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(matches!(coeff_table(0, 1), Err(Error::Domain(_))));
        assert!(matches!(coeff_table(2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_signal_inner_sum() {
        // with no signal, B_0 is the probability that q noise slots all beat a
        // noise-only slot: 1/(1+q)
        for &(m, q) in &[(1, 1), (2, 3), (10, 4), (200, 15)] {
            let b0 = series_terms(m, q).unwrap().inner[0];
            let v = b0.mantissa * 2f64.powi(b0.exponent as i32);
            assert!((v * (1.0 + q as f64) - 1.0).abs() < 1e-15, "M={m} q={q}: {v}");
        }
    }
}
