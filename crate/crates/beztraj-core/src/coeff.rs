//! Coefficient rings for Bezier curves.
//!
//! A curve is generic over its coefficient ring: binary64 floats for
//! simulation, exact big rationals for symbolic checks, and multivariate
//! polynomials ([`crate::sympoly::PolyExpr`]) for the symbolic pipeline
//! where control points of derived curves become closed-form polynomials
//! in the free output control points.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the symbolic paths.
pub type Rat = BigRational;

/// Maximum supported Bezier degree for binomial tables.
pub const MAX_DEGREE: usize = 64;

/// Ring of Bezier control-point coefficients.
///
/// `mul_rat` is the bridge used by the curve operators: degree elevation,
/// multiplication and differentiation only ever rescale coefficients by
/// exact rational constants (binomial ratios and powers of the horizon).
pub trait Coeff: Clone + PartialEq {
    /// Additive identity; named to avoid clashing with `num_traits::Zero`.
    fn coeff_zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiply by an exact rational constant.
    fn mul_rat(&self, r: &Rat) -> Self;
    fn coeff_is_zero(&self) -> bool;
}

impl Coeff for f64 {
    fn coeff_zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self * rat_to_f64(r)
    }
    fn coeff_is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Coeff for Rat {
    fn coeff_zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self * r
    }
    fn coeff_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Exact rational from integer parts.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite binary64 number.
///
/// Every finite `f64` is a dyadic rational, so this conversion is lossless;
/// it is how decimal config values enter the exact pipeline.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Nearest binary64 value of a rational.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Magnitudes beyond f64 range only arise from pathological inputs.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Binomial coefficient C(n, k) in exact integers via Pascal's triangle.
///
/// Degrees are capped at [`MAX_DEGREE`]; all cases of interest stay far
/// below the cap and C(64, 32) still fits in u128.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if n > MAX_DEGREE || k > n {
        return if k > n && n <= MAX_DEGREE { Some(0) } else { None };
    }
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    Some(row[k])
}

/// C(n,i)·C(r,j-i)/C(n+r,j) as an exact rational, the degree-elevation and
/// product weight.
pub fn binomial_ratio(n: usize, i: usize, r: usize, ji: usize, j: usize) -> Option<Rat> {
    let a = binomial(n, i)?;
    let b = binomial(r, ji)?;
    let c = binomial(n + r, j)?;
    Some(Rat::new(
        BigInt::from(a) * BigInt::from(b),
        BigInt::from(c),
    ))
}
