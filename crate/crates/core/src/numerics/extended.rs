//! Extended-precision arithmetic used where f64 round-off would be amplified.
//!
//! [`DoubleDouble`] carries an unevaluated sum `hi + lo` (about 106 bits of
//! significand). [`ExtFloat`] pairs a double-double significand with a free
//! binary exponent, so factorial-sized and vanishingly small non-negative
//! quantities can be multiplied and summed without logarithms.

use std::ops::{Add, Div, Mul};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Scale by `2^k`, exact as long as the result stays normal.
pub fn ldexp(mut x: f64, mut k: i64) -> f64 {
    const STEP: i64 = 1000;
    let big = f64::from_bits(((1023 + STEP) as u64) << 52);
    let small = f64::from_bits(((1023 - STEP) as u64) << 52);
    while k > STEP {
        x *= big;
        k -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -STEP {
        x *= small;
        k += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::from_bits(((1023 + k) as u64) << 52)
}

/// Split a finite non-zero `x` into `(m, k)` with `x = m·2^k`, `0.5 ≤ |m| < 1`.
pub fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal
        let (m, k) = frexp(x * 2f64.powi(64));
        return (m, k - 64);
    }
    let k = biased - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let q2 = (s + (e - p2 + self.lo)) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    fn scale(self, k: i64) -> Self {
        Self {
            hi: ldexp(self.hi, k),
            lo: ldexp(self.lo, k),
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// Non-negative double-double significand with an unbounded binary exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    mant: DoubleDouble,
    exp: i64,
}

impl ExtFloat {
    pub const ZERO: Self = Self {
        mant: DoubleDouble::ZERO,
        exp: 0,
    };

    pub fn one() -> Self {
        Self::from_f64(1.0)
    }

    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x >= 0.0 && x.is_finite());
        Self {
            mant: DoubleDouble::new(x),
            exp: 0,
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        if self.mant.hi == 0.0 {
            return Self::ZERO;
        }
        let (_, k) = frexp(self.mant.hi);
        Self {
            mant: self.mant.scale(-k),
            exp: self.exp + k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.hi == 0.0
    }

    pub fn mul_f64(self, b: f64) -> Self {
        Self {
            mant: self.mant.mul_f64(b),
            exp: self.exp,
        }
        .normalized()
    }

    pub fn div_f64(self, b: f64) -> Self {
        Self {
            mant: self.mant.div_f64(b),
            exp: self.exp,
        }
        .normalized()
    }

    /// Natural logarithm; `-inf` for zero.
    pub fn ln(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.hi.ln() + (self.mant.lo / self.mant.hi).ln_1p() + self.exp as f64 * std::f64::consts::LN_2
    }

    /// Round to an f64 significand in `[0.5, 1)` and a binary exponent.
    pub fn to_parts(self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let m = self.mant.to_f64();
        let (m, k) = frexp(m);
        (m, self.exp + k)
    }

    /// Nearest f64, saturating to 0 or infinity out of range.
    pub fn to_f64(self) -> f64 {
        let (m, e) = self.to_parts();
        ldexp(m, e)
    }
}

impl Mul for ExtFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self {
            mant: self.mant * rhs.mant,
            exp: self.exp + rhs.exp,
        }
        .normalized()
    }
}

impl Div<f64> for ExtFloat {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.div_f64(rhs)
    }
}

impl Add for ExtFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = big.exp - small.exp;
        if shift > 120 {
            return big;
        }
        Self {
            mant: big.mant + small.mant.scale(-shift),
            exp: big.exp,
        }
        .normalized()
    }
}

/// Compensated (double-double) accumulator for sums of mixed-sign f64 terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    acc: DoubleDouble,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        self.acc = self.acc + DoubleDouble::new(x);
    }

    pub fn add_dd(&mut self, x: DoubleDouble) {
        self.acc = self.acc + x;
    }

    pub fn value(&self) -> f64 {
        self.acc.to_f64()
    }

    pub fn value_dd(&self) -> DoubleDouble {
        self.acc
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
