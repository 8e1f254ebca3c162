//! Oracles shared by the integration tests.
#![allow(dead_code)]

fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    (fa, fm, fb): (f64, f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, (fa, flm, fm), left, tol, depth - 1)
        + simpson(f, m, b, (fm, frm, fb), right, tol, depth - 1)
}

/// Adaptive Simpson over `panels` equal sub-intervals; each leaf is accepted
/// once its error estimate is below `rel` times the whole integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, rel: f64) -> f64 {
    let h = (b - a) / panels as f64;
    let coarse: Vec<_> = (0..panels)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let v = (f(lo), f(0.5 * (lo + hi)), f(hi));
            (lo, hi, v, (hi - lo) / 6.0 * (v.0 + 4.0 * v.1 + v.2))
        })
        .collect();
    let tol = rel * coarse.iter().map(|c| c.3.abs()).sum::<f64>();
    coarse
        .iter()
        .map(|&(lo, hi, v, whole)| simpson(&f, lo, hi, v, whole, tol, 24))
        .sum()
}

/// `ln k!` for `k = 0..=n` by direct summation.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Bit error probability of `Q`-ary PPM with `M` noise modes at signal load
/// `xi`, by quadrature over the signal-slot statistic.
///
/// The signal slot is a Poisson(`xi`) mixture of `Gamma(M + j, 1)` densities,
/// each noise slot has the Erlang tail `e^{−y} Σ_{k<M} y^k/k!`, and an error
/// occurs when any of the `Q − 1` noise slots is larger.
pub fn abep_quadrature(q: u32, m: u32, xi: f64) -> f64 {
    let spread = (m as f64 + 2.0 * xi).sqrt();
    let y_max = m as f64 + xi + 40.0 * spread + 60.0;
    let j_max = (xi + 40.0 * xi.sqrt() + 60.0) as usize;
    let lf = ln_factorials(j_max + m as usize + 2);
    let mu = m as usize;
    let density = |y: f64| -> f64 {
        if y == 0.0 {
            // only the j = 0, M = 1 component is non-zero at the origin
            return if m == 1 { (-xi).exp() } else { 0.0 };
        }
        let ln_y = y.ln();
        let mut logs = Vec::with_capacity(j_max + 1);
        for j in 0..=j_max {
            let ln_pois = if xi == 0.0 {
                if j == 0 { 0.0 } else { break }
            } else {
                -xi + j as f64 * xi.ln() - lf[j]
            };
            logs.push(ln_pois + (mu + j - 1) as f64 * ln_y - y - lf[mu + j - 1]);
        }
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max.exp() * logs.iter().map(|l| (l - max).exp()).sum::<f64>()
    };
    let error_given = |y: f64| -> f64 {
        // Erlang upper tail Q(M, y)
        let mut term = 1.0;
        let mut tail = 1.0;
        for k in 1..mu {
            term *= y / k as f64;
            tail += term;
        }
        let upper = (-y).exp() * tail;
        let ln_lower = (-upper).ln_1p();
        -((q - 1) as f64 * ln_lower).exp_m1()
    };
    let ps = integrate(|y| density(y) * error_given(y), 0.0, y_max, 400, 1e-15);
    q as f64 / (2.0 * (q - 1) as f64) * ps
}

/// Exact integer `c_i^q = i! [y^i] (Σ_{k<M} y^k/k!)^q` as natural logs.
pub fn ln_coefficients(m: u32, q: u32) -> Vec<f64> {
    use num_bigint::BigUint;
    use num_traits::{One, Zero};
    let len_max = (q * (m - 1)) as usize + 1;
    // binomials C(i, k) for k < M via Pascal rows
    let width = m as usize;
    let mut pascal = vec![vec![BigUint::one()]];
    for i in 1..len_max {
        let row = &pascal[i - 1];
        let mut next = vec![BigUint::one()];
        for k in 1..=i.min(width - 1) {
            let right = row.get(k).cloned().unwrap_or_else(BigUint::zero);
            next.push(&row[k - 1] + right);
        }
        pascal.push(next);
    }
    // q = 1: c_i = 1 for i < M
    let mut c = vec![BigUint::one(); m as usize];
    for qq in 2..=q {
        let len = (qq * (m - 1)) as usize + 1;
        let mut next = vec![BigUint::zero(); len];
        for (i, slot) in next.iter_mut().enumerate() {
            for k in 0..=i.min(m as usize - 1) {
                if i - k < c.len() {
                    *slot += &pascal[i][k] * &c[i - k];
                }
            }
        }
        c = next;
    }
    c.iter().map(big_ln).collect()
}

pub fn big_ln(v: &num_bigint::BigUint) -> f64 {
    use num_traits::ToPrimitive;
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
