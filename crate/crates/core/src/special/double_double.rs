//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64` with
//! `|lo| ≤ ulp(hi)/2`, giving about 32 significant digits.
//!
//! Used where an alternating binomial expansion cancels far below its terms,
//! e.g. outage and BER expansions at high SNR whose value is 10⁻¹⁰ of the
//! largest term.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: DoubleDouble = DoubleDouble { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
const PI_DD: DoubleDouble = DoubleDouble { hi: PI, lo: 1.224_646_799_147_353_2e-16 };

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn pi() -> Self {
        PI_DD
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Multiplication by a power of two, exact unless it under/overflows.
    fn scale(self, factor: f64) -> Self {
        Self { hi: self.hi * factor, lo: self.lo * factor }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::ZERO } else { Self::new(f64::NAN) };
        }
        // one Newton step from the double-precision root doubles the digits
        let q = self.hi.sqrt();
        let residual = self - Self::from_product(q, q);
        Self::from_sum(q, residual.hi / (2.0 * q))
    }

    pub fn powi(self, n: u32) -> Self {
        let mut result = Self::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        result
    }

    pub fn exp(self) -> Self {
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        if self.hi > 709.0 {
            return Self::new(f64::INFINITY);
        }
        // x = k ln2 + r, |r| ≤ ln2/2; e^r − 1 from Taylor at r/1024, then
        // ten doublings of (1+s)² − 1 = 2s + s², which keep relative accuracy
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Self::new(k)).scale(1.0 / 1024.0);
        let mut term = r;
        let mut s = r;
        for n in 2..30 {
            term = term * r / Self::new(n as f64);
            s = s + term;
            if term.hi.abs() <= 1e-34 * s.hi.abs() {
                break;
            }
        }
        for _ in 0..10 {
            s = s * 2.0 + s * s;
        }
        let sum = s + 1.0;
        // 2^k split in two so that k near ±1022 stays representable
        let half = (k / 2.0).trunc();
        sum.scale(2f64.powi(half as i32)).scale(2f64.powi((k - half) as i32))
    }

    /// Natural logarithm of a positive value.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::new(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        // Newton on e^y = x: y ← y + x e^{−y} − 1
        let y = Self::new(self.hi.ln());
        y + self * (-y).exp() - Self::ONE
    }

    /// `self^p` for positive `self`.
    pub fn powf(self, p: Self) -> Self {
        (p * self.ln()).exp()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self - other * Self::new(q1);
        let q2 = r.hi / other.hi;
        let r = r - other * Self::new(q2);
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::new(q3)
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    fn add(self, other: f64) -> Self {
        self + Self::new(other)
    }
}

impl Sub<f64> for DoubleDouble {
    type Output = Self;
    fn sub(self, other: f64) -> Self {
        self - Self::new(other)
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    fn mul(self, other: f64) -> Self {
        self * Self::new(other)
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    fn div(self, other: f64) -> Self {
        self / Self::new(other)
    }
}

impl std::iter::Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}
