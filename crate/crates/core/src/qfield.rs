//! Exact arithmetic in ℚ(√5) and the integer sequences that feed it.
//!
//! Elements are stored in the basis {1, √5} with canonical reduced rational
//! coefficients, so two values are equal exactly when their coefficient pairs
//! are equal. Nothing in this module touches floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Rational coefficient. `BigRational` keeps itself in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("division by zero in Q(sqrt 5)")]
    DivisionByZero,
    #[error("value {0} is not an integer")]
    NonIntegral(Box<Q5>),
}

/// The real number `a + b·√5`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q5 {
    a: Rat,
    b: Rat,
}

impl Q5 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Q5 { a, b }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Q5::new(Rat::from_integer(n.into()), Rat::zero())
    }

    /// `p/q + (r/s)·√5` from machine integers. Panics if a denominator is zero.
    pub fn from_ratios(p: i64, q: i64, r: i64, s: i64) -> Self {
        Q5::new(
            Rat::new(BigInt::from(p), BigInt::from(q)),
            Rat::new(BigInt::from(r), BigInt::from(s)),
        )
    }

    pub fn zero() -> Self {
        Q5::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Q5::from_integer(1)
    }

    pub fn sqrt5() -> Self {
        Q5::new(Rat::zero(), Rat::one())
    }

    /// The golden ratio (1 + √5)/2.
    pub fn phi() -> Self {
        Q5::from_ratios(1, 2, 1, 2)
    }

    /// The conjugate root (1 − √5)/2.
    pub fn phi_bar() -> Self {
        Q5::from_ratios(1, 2, -1, 2)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &Rat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `a − b√5`, the nontrivial automorphism of the field.
    pub fn conj(&self) -> Self {
        Q5::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `x · conj(x) = a² − 5b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    /// `x⁻¹ = conj(x) / (a² − 5b²)`. The norm vanishes only at zero since √5
    /// is irrational.
    pub fn inv(&self) -> Result<Self, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Q5::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Q5) -> Result<Self, ArithmeticError> {
        Ok(self * &rhs.inv()?)
    }

    /// Exact `k`-th power by binary exponentiation; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Result<Self, ArithmeticError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Q5::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Returns `n` when the value is exactly the integer `n`.
    pub fn to_integer(&self) -> Result<BigInt, ArithmeticError> {
        if self.b.is_zero() && self.a.is_integer() {
            Ok(self.a.to_integer())
        } else {
            Err(ArithmeticError::NonIntegral(Box::new(self.clone())))
        }
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 5f64.sqrt()
    }
}

impl Default for Q5 {
    fn default() -> Self {
        Q5::zero()
    }
}

impl From<i64> for Q5 {
    fn from(n: i64) -> Self {
        Q5::from_integer(n)
    }
}

impl From<BigInt> for Q5 {
    fn from(n: BigInt) -> Self {
        Q5::from_integer(n)
    }
}

impl fmt::Debug for Q5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q5({} + ({})√5)", self.a, self.b)
    }
}

impl fmt::Display for Q5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})√5", self.b),
            (false, false) => write!(f, "{} + ({})√5", self.a, self.b),
        }
    }
}

impl<'a> Add<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn add(self, rhs: &Q5) -> Q5 {
        Q5::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn sub(self, rhs: &Q5) -> Q5 {
        Q5::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Q5> for &'a Q5 {
    type Output = Q5;
    fn mul(self, rhs: &Q5) -> Q5 {
        let five = Rat::from_integer(BigInt::from(5));
        Q5::new(
            &self.a * &rhs.a + five * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Q5> for Q5 {
            type Output = Q5;
            fn $method(self, rhs: Q5) -> Q5 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Q5> for Q5 {
            type Output = Q5;
            fn $method(self, rhs: &Q5) -> Q5 {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-self.a, -self.b)
    }
}

fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Option<Rat> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if q.is_zero() {
        return None;
    }
    Some(Rat::new(p, q))
}

#[derive(Serialize, Deserialize)]
struct Q5Repr {
    a: String,
    b: String,
}

/// Serialized as `{"a": "p/q", "b": "r/s"}`.
impl Serialize for Q5 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Q5Repr {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Q5 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = Q5Repr::deserialize(deserializer)?;
        let a = parse_rat(&repr.a).ok_or_else(|| D::Error::custom(format!("bad rational {:?}", repr.a)))?;
        let b = parse_rat(&repr.b).ok_or_else(|| D::Error::custom(format!("bad rational {:?}", repr.b)))?;
        Ok(Q5::new(a, b))
    }
}

/// `(F_k, F_{k+1})` by fast doubling over the bits of `k`.
fn fib_pair(k: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    if k == 0 {
        return (a, b);
    }
    let bits = 64 - k.leading_zeros();
    for shift in (0..bits).rev() {
        // F(2m) = F(m)(2F(m+1) − F(m)), F(2m+1) = F(m)² + F(m+1)²
        let two_b_minus_a: BigInt = (&b << 1usize) - &a;
        let c = &a * &two_b_minus_a;
        let d = &a * &a + &b * &b;
        if (k >> shift) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// Fibonacci number `F_k` for any integer `k`, with `F_{−k} = (−1)^{k+1} F_k`.
pub fn fib(k: i64) -> BigInt {
    let m = k.unsigned_abs();
    let f = fib_pair(m).0;
    if k < 0 && m.is_even() {
        -f
    } else {
        f
    }
}

/// Binomial coefficient, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // acc = C(n−k+i−1, i−1) here, so the division below is exact.
        acc *= BigUint::from(n - k + i);
        acc /= BigUint::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_fib(k: u32) -> BigInt {
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        for _ in 0..k {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        a
    }

    fn z(n: i64) -> Q5 {
        Q5::from_integer(n)
    }

    #[test]
    fn golden_ratio_products_and_sums() {
        let (phi, phib) = (Q5::phi(), Q5::phi_bar());
        assert_eq!(&phi * &phib, z(-1));
        assert_eq!(&phi + &phib, z(1));
        assert_eq!(&phi * &phi, Q5::from_ratios(3, 2, 1, 2));
        assert_eq!(phi.pow(2).unwrap(), &phi + &z(1));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Q5::phi().conj(), Q5::phi_bar());
        assert_eq!(z(7).conj(), z(7));
        let x = Q5::from_ratios(-3, 7, 11, 4);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn powers() {
        let phi_plus_two = &Q5::phi() + &z(2);
        assert_eq!(phi_plus_two.pow(1).unwrap(), Q5::from_ratios(5, 2, 1, 2));
        assert_eq!(Q5::from_ratios(9, 4, -1, 3).pow(0).unwrap(), z(1));
        assert_eq!(Q5::zero().pow(0).unwrap(), z(1));
        assert_eq!(Q5::zero().pow(-1), Err(ArithmeticError::DivisionByZero));
        let inv = phi_plus_two.pow(-1).unwrap();
        assert_eq!(&inv * &phi_plus_two, z(1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Q5::zero().inv(), Err(ArithmeticError::DivisionByZero));
    }

    #[test]
    fn integer_extraction() {
        assert_eq!((&Q5::phi() + &Q5::phi_bar()).to_integer().unwrap(), BigInt::from(1));
        match Q5::phi().to_integer() {
            Err(ArithmeticError::NonIntegral(v)) => {
                assert_eq!(v.rational_part(), &Rat::new(1.into(), 2.into()));
                assert_eq!(v.sqrt5_part(), &Rat::new(1.into(), 2.into()));
            }
            other => panic!("expected non-integral, got {other:?}"),
        }
        assert!(Q5::from_ratios(1, 2, 0, 1).to_integer().is_err());
        let p = (&Q5::phi() + &z(2)).pow(1).unwrap();
        let q = (&Q5::phi_bar() + &z(2)).pow(1).unwrap();
        assert_eq!((&p + &q).to_integer().unwrap(), BigInt::from(5));
    }

    #[test]
    fn fibonacci_small_values() {
        assert_eq!(fib(0), BigInt::from(0));
        assert_eq!(fib(1), BigInt::from(1));
        assert_eq!(fib(-1), BigInt::from(1));
        assert_eq!(fib(-2), BigInt::from(-1));
        assert_eq!(fib(10), BigInt::from(55));
    }

    #[test]
    fn fast_doubling_matches_iteration() {
        for k in 0..400u32 {
            assert_eq!(fib(k as i64), naive_fib(k), "k = {k}");
        }
    }

    #[test]
    fn recurrence_with_sign_extension() {
        for k in -200i64..=200 {
            assert_eq!(fib(k), fib(k - 1) + fib(k - 2), "k = {k}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(2, 1), BigUint::from(2u32));
        assert_eq!(binom(5, 2), BigUint::from(10u32));
        assert_eq!(binom(3, 4), BigUint::zero());
        for g in 0..20 {
            assert_eq!(binom(g, 0), BigUint::one());
        }
    }

    #[test]
    fn pascal_identity() {
        for n in 1..=100u64 {
            for k in 1..=n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k), "({n}, {k})");
            }
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(Q5::phi()).unwrap();
        assert_eq!(v, serde_json::json!({"a": "1/2", "b": "1/2"}));
        let back: Q5 = serde_json::from_value(v).unwrap();
        assert_eq!(back, Q5::phi());
        let seven: Q5 = serde_json::from_str(r#"{"a":"7","b":"0/1"}"#).unwrap();
        assert_eq!(seven, z(7));
    }
}
