//! Golden-ratio closed forms for the g₂ level-1 ranks and the two Fibonacci
//! summations they equal.
//!
//! The three expressions are evaluated independently; they share only
//! [`fib`] and [`binom`].

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::qfield::{binom, fib, ArithmeticError, Q5};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("genus {g} is below the minimum {min}")]
    GenusOutOfRange { g: u32, min: u32 },
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// `φⁿ(φ+2)^{g−1} + φ̄ⁿ(φ̄+2)^{g−1}` as an element of ℚ(√5), before integer
/// extraction. At `g = 0` the inverse of `φ+2` is used.
pub fn closed_value(g: u32, n: u32) -> Q5 {
    let two = Q5::from_integer(2);
    let term = |root: Q5| -> Q5 {
        let handle = &root + &two;
        // (φ+2)(φ̄+2) = 5, so neither base is zero.
        let handles = handle.pow(i64::from(g) - 1).expect("phi + 2 is a unit");
        &root.pow(i64::from(n)).expect("nonnegative power") * &handles
    };
    &term(Q5::phi()) + &term(Q5::phi_bar())
}

/// Rank from the closed form. Defined for every `g ≥ 0`; the theorem's range
/// is `g ≥ 2`.
pub fn closed_rank(g: u32, n: u32) -> Result<BigInt, ClosedFormError> {
    Ok(closed_value(g, n).to_integer()?)
}

/// `((5+√5)/2)^{g−1} + ((5−√5)/2)^{g−1}`, the `n = 0` rank.
pub fn gregoire_rank(g: u32) -> Result<BigInt, ClosedFormError> {
    if g < 1 {
        return Err(ClosedFormError::GenusOutOfRange { g, min: 1 });
    }
    let plus = Q5::from_ratios(5, 2, 1, 2);
    let minus = Q5::from_ratios(5, 2, -1, 2);
    let e = i64::from(g) - 1;
    let value = &plus.pow(e)? + &minus.pow(e)?;
    Ok(value.to_integer()?)
}

/// Clutching sum `Σ_{i=0}^{g} C(g,i)·F_{2i+n−1}`.
pub fn sum_clutch(g: u32, n: u32) -> BigInt {
    (0..=g).fold(BigInt::zero(), |acc, i| {
        let index = 2 * i64::from(i) + i64::from(n) - 1;
        acc + BigInt::from(binom(u64::from(g), u64::from(i))) * fib(index)
    })
}

/// Elliptic-tail sum `Σ_{i=0}^{g} C(g,i)·2^{g−i}·F_{i+n−1}`.
pub fn sum_tails(g: u32, n: u32) -> BigInt {
    (0..=g).fold(BigInt::zero(), |acc, i| {
        let index = i64::from(i) + i64::from(n) - 1;
        let weight = binom(u64::from(g), u64::from(i)) << ((g - i) as usize);
        acc + BigInt::from(weight) * fib(index)
    })
}

fn decimal<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// All three rank expressions for one `(g, n)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub g: u32,
    pub n: u32,
    #[serde(serialize_with = "decimal")]
    pub sum_clutch: BigInt,
    #[serde(serialize_with = "decimal")]
    pub closed: BigInt,
    #[serde(serialize_with = "decimal")]
    pub sum_tails: BigInt,
    pub agree: bool,
    /// Set when `g < 2`, outside the theorem's stated range.
    #[serde(skip_serializing_if = "is_false")]
    pub extension: bool,
}

impl RankReport {
    pub const CSV_HEADER: &'static str = "g,n,sum_clutch,closed,sum_tails,agree";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.g, self.n, self.sum_clutch, self.closed, self.sum_tails, self.agree
        )
    }
}

/// Evaluates a cell at any genus, flagging `g < 2` as an extension.
pub fn verify_cell(g: u32, n: u32) -> Result<RankReport, ClosedFormError> {
    let sum_clutch = sum_clutch(g, n);
    let closed = closed_rank(g, n)?;
    let sum_tails = sum_tails(g, n);
    let agree = sum_clutch == closed && closed == sum_tails;
    Ok(RankReport { g, n, sum_clutch, closed, sum_tails, agree, extension: g < 2 })
}

/// Evaluates a cell in the theorem's range `g ≥ 2`.
pub fn verify_theorem(g: u32, n: u32) -> Result<RankReport, ClosedFormError> {
    if g < 2 {
        return Err(ClosedFormError::GenusOutOfRange { g, min: 2 });
    }
    verify_cell(g, n)
}

/// [`closed_rank`] as an unsigned integer, for comparison with engine ranks.
pub fn closed_rank_unsigned(g: u32, n: u32) -> Result<BigUint, ClosedFormError> {
    let r = closed_rank(g, n)?;
    Ok(r.to_biguint().expect("ranks are nonnegative"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn closed_small_values() {
        assert_eq!(closed_rank(1, 1).unwrap(), b(1));
        assert_eq!(closed_rank(1, 0).unwrap(), b(2));
        assert_eq!(closed_rank(2, 0).unwrap(), b(5));
        assert_eq!(closed_rank(3, 0).unwrap(), b(15));
    }

    #[test]
    fn genus_zero_extension_gives_fibonacci() {
        for n in 3..=30 {
            assert_eq!(closed_rank(0, n).unwrap(), fib(i64::from(n) - 1), "n = {n}");
        }
    }

    #[test]
    fn gregoire_values() {
        assert_eq!(gregoire_rank(1).unwrap(), b(2));
        assert_eq!(gregoire_rank(2).unwrap(), b(5));
        assert_eq!(gregoire_rank(0), Err(ClosedFormError::GenusOutOfRange { g: 0, min: 1 }));
        for g in 1..=50 {
            assert_eq!(gregoire_rank(g).unwrap(), closed_rank(g, 0).unwrap(), "g = {g}");
        }
    }

    #[test]
    fn sums_by_hand() {
        // F₋₁ + 2F₁ + F₃ and F₀ + 2F₂ + F₄
        assert_eq!(sum_clutch(2, 0), b(5));
        assert_eq!(sum_clutch(2, 1), b(5));
        // 4F₋₁ + 4F₀ + F₁, 8F₋₁ + 12F₀ + 6F₁ + F₂, 4F₀ + 4F₁ + F₂
        assert_eq!(sum_tails(2, 0), b(5));
        assert_eq!(sum_tails(3, 0), b(15));
        assert_eq!(sum_tails(2, 1), b(5));
        for m in 0..=30 {
            assert_eq!(sum_clutch(0, m + 1), fib(i64::from(m)));
        }
    }

    #[test]
    fn reports() {
        for (g, n, v) in [(2, 0, 5), (3, 0, 15), (2, 1, 5)] {
            let r = verify_theorem(g, n).unwrap();
            assert_eq!((r.sum_clutch.clone(), r.closed.clone(), r.sum_tails.clone()), (b(v), b(v), b(v)));
            assert!(r.agree && !r.extension);
        }
        assert!(verify_theorem(1, 0).is_err());
        assert!(verify_cell(1, 3).unwrap().extension);
    }

    #[test]
    fn report_formats() {
        let r = verify_theorem(2, 0).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"g":2,"n":0,"sum_clutch":"5","closed":"5","sum_tails":"5","agree":true}"#
        );
        assert_eq!(r.csv_row(), "2,0,5,5,5,true");
    }

    #[test]
    fn middle_expression_is_conjugation_fixed() {
        for g in 0..=12 {
            for n in 0..=12 {
                let v = closed_value(g, n);
                assert_eq!(v.conj(), v);
                assert!(v.is_rational());
            }
        }
    }
}
