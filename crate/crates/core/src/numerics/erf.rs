//! Error function.
//!
//! `|x| < 3`: the positive-term expansion
//! `erf(x) = 2/√π · e^{-x²} Σ 2^n x^{2n+1} / (1·3·…·(2n+1))`, free of the
//! cancellation that limits the alternating Maclaurin series.
//! `|x| ≥ 3`: `1 − erfc(x)` with the Laplace continued fraction for `erfc`.

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut denom = 1.0;
    loop {
        denom += 2.0;
        term *= 2.0 * x2 / denom;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// `erfc(x)` for `x ≥ 2` via `e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`.
fn erfc_fraction(x: f64) -> f64 {
    let mut f = x;
    for k in (1..=60).rev() {
        f = x + (k as f64 / 2.0) / f;
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < 3.0 {
        erf_series(ax)
    } else if ax < 6.5 {
        1.0 - erfc_fraction(ax)
    } else {
        1.0
    };
    v.copysign(x)
}

/// Complementary error function, accurate in the tail.
pub fn erfc(x: f64) -> f64 {
    // the fraction is at full precision from x = 2 on
    if x >= 2.0 {
        erfc_fraction(x)
    } else {
        1.0 - erf(x)
    }
}
