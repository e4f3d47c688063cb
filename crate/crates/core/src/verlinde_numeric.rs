//! Trigonometric Verlinde sum for g₂, evaluated in double-double precision.
//!
//! Root data lives in exact rational coordinates on the simple-root basis
//! `{α₁ (short), α₂ (long)}`; only the sines are floating point. The sum is
//! evaluated under two readings of the sine-product exponent and
//! [`calibrate_exponent`] picks the one that reproduces the exact closed form.

pub mod dd;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::gregoire_rank;
pub use dd::DoubleDouble;

type Rat = BigRational;
type Vec2 = [Rat; 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerlindeError {
    #[error("root data invariant violated: {0}")]
    RootData(String),
    #[error("genus must be at least 1")]
    GenusZero,
    #[error("level must be at least 1")]
    LevelZero,
    #[error("no exponent variant reproduces the exact ranks")]
    NoMatch,
    #[error("both exponent variants reproduce the exact ranks")]
    Ambiguous,
}

/// Which exponent the sine product carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentVariant {
    /// Exponent 1.
    Printed,
    /// Exponent `2 − 2g`.
    Standard,
}

impl ExponentVariant {
    pub const ALL: [ExponentVariant; 2] = [ExponentVariant::Printed, ExponentVariant::Standard];

    pub fn exponent(self, g: u32) -> i64 {
        match self {
            ExponentVariant::Printed => 1,
            ExponentVariant::Standard => 2 - 2 * i64::from(g),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExponentVariant::Printed => "printed",
            ExponentVariant::Standard => "standard",
        }
    }
}

impl fmt::Display for ExponentVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

fn vec2(a: i64, b: i64) -> Vec2 {
    [rat(a, 1), rat(b, 1)]
}

/// Root data of g₂ with the inner product normalized so that long roots have
/// squared length 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G2RootData {
    pub rank: usize,
    /// Positive roots in simple-root coordinates.
    pub positive_roots: Vec<Vec2>,
    pub fundamental_weights: [Vec2; 2],
    pub rho: Vec2,
    /// Gram matrix of the simple roots.
    pub gram: [[Rat; 2]; 2],
    pub dual_coxeter: u32,
    pub index_p_mod_q: u32,
    pub index_q_mod_qlg: u32,
    /// Comarks on the fundamental weights, `⟨ω_i, θ⟩`.
    pub comarks: [u32; 2],
}

impl G2RootData {
    pub fn standard() -> Self {
        G2RootData {
            rank: 2,
            positive_roots: vec![vec2(1, 0), vec2(0, 1), vec2(1, 1), vec2(2, 1), vec2(3, 1), vec2(3, 2)],
            fundamental_weights: [vec2(2, 1), vec2(3, 2)],
            rho: vec2(5, 3),
            gram: [[rat(2, 3), rat(-1, 1)], [rat(-1, 1), rat(2, 1)]],
            dual_coxeter: 4,
            index_p_mod_q: 1,
            index_q_mod_qlg: 3,
            comarks: [1, 2],
        }
    }

    pub fn inner(&self, x: &Vec2, y: &Vec2) -> Rat {
        let mut acc = Rat::zero();
        for (xi, row) in x.iter().zip(&self.gram) {
            for (gij, yj) in row.iter().zip(y) {
                acc += xi * gij * yj;
            }
        }
        acc
    }

    /// The positive root of greatest height.
    pub fn highest_root(&self) -> Vec2 {
        self.positive_roots
            .iter()
            .max_by(|a, b| (&a[0] + &a[1]).cmp(&(&b[0] + &b[1])))
            .cloned()
            .expect("positive roots are nonempty")
    }

    /// `a·ω₁ + b·ω₂` in root coordinates.
    pub fn weight(&self, w: LevelWeight) -> Vec2 {
        let [w1, w2] = &self.fundamental_weights;
        let (a, b) = (rat(i64::from(w.a), 1), rat(i64::from(w.b), 1));
        [&a * &w1[0] + &b * &w2[0], &a * &w1[1] + &b * &w2[1]]
    }

    /// Exact checks of the stored constants.
    pub fn check_invariants(&self) -> Result<(), VerlindeError> {
        let fail = |m: String| Err(VerlindeError::RootData(m));
        let mut sum = [Rat::zero(), Rat::zero()];
        for r in &self.positive_roots {
            sum[0] += &r[0];
            sum[1] += &r[1];
        }
        let half = rat(1, 2);
        if [&sum[0] * &half, &sum[1] * &half] != self.rho {
            return fail(format!("rho {:?} is not half the sum of positive roots", self.rho));
        }
        let theta = self.highest_root();
        if self.inner(&theta, &theta) != rat(2, 1) {
            return fail("highest root does not have squared length 2".into());
        }
        if 1 + self.comarks.iter().sum::<u32>() != self.dual_coxeter {
            return fail("1 + sum of comarks differs from the dual Coxeter number".into());
        }
        let simple = [vec2(1, 0), vec2(0, 1)];
        for (i, w) in self.fundamental_weights.iter().enumerate() {
            if self.inner(w, &theta) != rat(i64::from(self.comarks[i]), 1) {
                return fail(format!("comark {i} does not match <omega_{}, theta>", i + 1));
            }
            for (j, alpha) in simple.iter().enumerate() {
                let coroot_pairing = self.inner(w, alpha) * rat(2, 1) / self.inner(alpha, alpha);
                let want = if i == j { Rat::one() } else { Rat::zero() };
                if coroot_pairing != want {
                    return fail(format!("omega_{} is not dual to the simple coroot {}", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

/// A dominant weight `a·ω₁ + b·ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LevelWeight {
    pub a: u32,
    pub b: u32,
}

impl LevelWeight {
    pub fn level(self, root: &G2RootData) -> u32 {
        root.comarks[0] * self.a + root.comarks[1] * self.b
    }
}

/// Dominant weights of level at most `level`, ordered by `(a, b)`.
pub fn g2_weights_at_level(level: u32) -> Vec<LevelWeight> {
    weights_at_level(&G2RootData::standard(), level)
}

fn weights_at_level(root: &G2RootData, level: u32) -> Vec<LevelWeight> {
    let mut out = Vec::new();
    for a in 0..=level {
        for b in 0..=level {
            let w = LevelWeight { a, b };
            if w.level(root) <= level {
                out.push(w);
            }
        }
    }
    out
}

/// One evaluation of the Verlinde sum.
#[derive(Debug, Clone, PartialEq)]
pub struct VerlindeValue {
    pub variant: ExponentVariant,
    pub value: DoubleDouble,
    /// `None` when the sum is not finite.
    pub nearest: Option<BigInt>,
    /// `|value − nearest|`, infinite when the sum is not finite.
    pub residual: f64,
}

impl VerlindeValue {
    pub fn relative_error(&self, exact: &BigInt) -> f64 {
        let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
        let diff = (self.value - DoubleDouble::from_f64(exact_f)).abs().to_f64();
        diff / exact_f.abs().max(1.0)
    }
}

pub fn verlinde_trig_rank(g: u32, level: u32, variant: ExponentVariant) -> Result<VerlindeValue, VerlindeError> {
    verlinde_trig_rank_with(&G2RootData::standard(), g, level, variant)
}

/// Evaluates the sum for arbitrary (possibly corrupted) root data; the terms
/// are accumulated in weight order.
pub fn verlinde_trig_rank_with(
    root: &G2RootData,
    g: u32,
    level: u32,
    variant: ExponentVariant,
) -> Result<VerlindeValue, VerlindeError> {
    if g == 0 {
        return Err(VerlindeError::GenusZero);
    }
    if level == 0 {
        return Err(VerlindeError::LevelZero);
    }
    let shifted_level = i64::from(level + root.dual_coxeter);
    let base = shifted_level.pow(root.rank as u32)
        * i64::from(root.index_p_mod_q)
        * i64::from(root.index_q_mod_qlg);
    let prefactor = DoubleDouble::from_f64(base as f64).powi(i64::from(g) - 1);

    let exponent = variant.exponent(g);
    let mut sum = DoubleDouble::ZERO;
    for w in weights_at_level(root, level) {
        let shifted = {
            let mu = root.weight(w);
            [&mu[0] + &root.rho[0], &mu[1] + &root.rho[1]]
        };
        let mut product = DoubleDouble::ONE;
        for alpha in &root.positive_roots {
            let t = root.inner(alpha, &shifted) / rat(shifted_level, 1);
            let (p, q) = (t.numer().to_i64().expect("small angle"), t.denom().to_i64().expect("small angle"));
            product = product * DoubleDouble::from_f64(2.0) * DoubleDouble::sin_pi_ratio(p, q);
        }
        sum = sum + product.powi(exponent);
    }
    let value = prefactor * sum;

    if !value.is_finite() {
        return Ok(VerlindeValue { variant, value, nearest: None, residual: f64::INFINITY });
    }
    let rounded = value.round();
    let nearest = BigInt::from_f64(rounded.hi).map(|hi| hi + BigInt::from_f64(rounded.lo).unwrap_or_default());
    let residual = (value - rounded).abs().to_f64();
    Ok(VerlindeValue { variant, value, nearest, residual })
}

/// Relative tolerance for matching the exact closed form.
pub const CALIBRATION_TOLERANCE: f64 = 1e-6;

pub fn calibrate_exponent() -> Result<ExponentVariant, VerlindeError> {
    calibrate_exponent_with(&G2RootData::standard(), 2..=6)
}

/// Returns the unique variant whose level-1 values match the exact ranks for
/// every genus in `genera`.
pub fn calibrate_exponent_with(
    root: &G2RootData,
    genera: std::ops::RangeInclusive<u32>,
) -> Result<ExponentVariant, VerlindeError> {
    let mut matching = Vec::new();
    for variant in ExponentVariant::ALL {
        let mut all = true;
        for g in genera.clone() {
            let exact = gregoire_rank(g).expect("g >= 1");
            let v = verlinde_trig_rank_with(root, g, 1, variant)?;
            let err = v.relative_error(&exact);
            if err.is_nan() || err >= CALIBRATION_TOLERANCE {
                all = false;
                break;
            }
        }
        if all {
            matching.push(variant);
        }
    }
    match matching.as_slice() {
        [one] => Ok(*one),
        [] => Err(VerlindeError::NoMatch),
        _ => Err(VerlindeError::Ambiguous),
    }
}

/// Decimal rendering of a double-double value to about 30 significant digits.
pub fn format_dd(x: DoubleDouble) -> String {
    if !x.is_finite() {
        return format!("{}", x.to_f64());
    }
    if x.hi < 0.0 {
        return format!("-{}", format_dd(-x));
    }
    // Split off the integer part exactly, then print the fraction.
    let int_part = x.round();
    let mut frac = x - int_part;
    let mut int = BigInt::from_f64(int_part.hi).unwrap_or_default() + BigInt::from_f64(int_part.lo).unwrap_or_default();
    if frac.hi < 0.0 {
        int -= 1;
        frac = frac + DoubleDouble::ONE;
    }
    let mut digits = String::new();
    let ten = DoubleDouble::from_f64(10.0);
    for _ in 0..20 {
        frac = frac * ten;
        let d = frac.hi.floor().clamp(0.0, 9.0);
        frac = frac - DoubleDouble::from_f64(d);
        digits.push(char::from(b'0' + d as u8));
    }
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{digits}")
    }
}
