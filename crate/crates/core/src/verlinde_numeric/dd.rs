//! Double-double floating point: an unevaluated sum `hi + lo` of two `f64`s
//! with `|lo| ≤ ulp(hi)/2`, giving roughly 106 bits of significand.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

/// π to double-double precision.
pub const PI: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
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

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// `p / q`, correctly rounded to double-double for `|p|, |q| < 2⁵³`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        DoubleDouble::from_f64(p as f64) / DoubleDouble::from_f64(q as f64)
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

    pub fn recip(self) -> Self {
        DoubleDouble::ONE / self
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(self, k: i64) -> Self {
        let mut e = k.unsigned_abs();
        let mut base = self;
        let mut acc = DoubleDouble::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        if k < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Nearest integer to the represented value.
    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi is already integral; the fraction lives in lo.
            let (s, e) = quick_two_sum(hi, self.lo.round());
            DoubleDouble { hi: s, lo: e }
        } else if (hi - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // Tie in hi broken by the sign of lo.
            let hi = if self.lo > 0.0 { self.hi.ceil() } else { self.hi.floor() };
            DoubleDouble { hi, lo: 0.0 }
        } else {
            DoubleDouble { hi, lo: 0.0 }
        }
    }

    /// `sin(π·p/q)` with the argument reduced exactly in integers.
    pub fn sin_pi_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let (mut p, mut q) = (p as i128, q as i128);
        if q < 0 {
            p = -p;
            q = -q;
        }
        // sin(πt) has period 2 and sin(π(t+1)) = −sin(πt).
        let mut r = p.rem_euclid(2 * q);
        let mut negate = false;
        if r >= q {
            r -= q;
            negate = true;
        }
        // Now t = r/q ∈ [0, 1); fold onto [0, 1/2] via sin(π(1−t)) = sin(πt).
        if 2 * r > q {
            r = q - r;
        }
        let x = PI * DoubleDouble::from_ratio(r as i64, q as i64);
        let s = sin_taylor(x);
        if negate {
            -s
        } else {
            s
        }
    }
}

/// Maclaurin series for `sin x`, adequate for `0 ≤ x ≤ π/2`.
fn sin_taylor(x: DoubleDouble) -> DoubleDouble {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 1i64;
    loop {
        term = -(term * x2) / DoubleDouble::from_f64(((2 * k) * (2 * k + 1)) as f64);
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(f64::MIN_POSITIVE) || k > 60 {
            return sum;
        }
        k += 1;
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;
    fn add(self, rhs: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> DoubleDouble {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = DoubleDouble;
    fn sub(self, rhs: DoubleDouble) -> DoubleDouble {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;
    fn mul(self, rhs: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = DoubleDouble;
    fn div(self, rhs: DoubleDouble) -> DoubleDouble {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DoubleDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DoubleDouble::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}
