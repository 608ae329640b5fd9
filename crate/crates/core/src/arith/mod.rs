//! Exact integer, rational and univariate polynomial arithmetic.
//!
//! Integers and rationals are `num-bigint` / `num-rational` values; the
//! polynomial algebra (resultants, rational roots, exact linear solves) lives
//! in the submodules.

mod linalg;
mod poly;
mod resultant;
mod roots;

pub use linalg::{integer_kernel, solve_exact, KernelResult, LinalgError};
pub use poly::IntPoly;
pub use resultant::{homogeneous_resultant, resultant, resultant_with_degrees};
pub use roots::{rational_roots, rational_roots_with_multiplicity, RootSet};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;
/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Builds the canonical representative of `num / den`.
pub fn rat_normalize(num: Integer, den: Integer) -> Result<Rational, ArithError> {
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    // BigRational::new reduces and moves the sign to the numerator.
    Ok(BigRational::new(num, den))
}

/// Natural logarithm of `|x|`, accurate for integers of any size. `ln 0` is
/// reported as `-inf`.
pub fn ln_abs(x: &Integer) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp) = top_bits(x);
    mantissa.ln() + exp as f64 * std::f64::consts::LN_2
}

/// `ln |a| - ln |b|` without cancellation loss when both are huge.
pub fn ln_ratio(a: &Integer, b: &Integer) -> f64 {
    let (ma, ea) = top_bits(a);
    let (mb, eb) = top_bits(b);
    (ma / mb).ln() + (ea - eb) as f64 * std::f64::consts::LN_2
}

// |x| = mantissa * 2^exp with mantissa in [2^52, 2^53).
fn top_bits(x: &Integer) -> (f64, i64) {
    let mag = x.magnitude();
    let bits = mag.bits() as i64;
    if bits <= 53 {
        return (mag.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 53;
    let top = (mag >> (shift as usize)).to_f64().unwrap_or(0.0);
    (top, shift)
}

/// Weil height of a rational: `ln max(|num|, |den|)`, with `h(0) = 0`.
pub fn rational_height(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().abs();
    let den = r.denom().abs();
    ln_abs(if num > den { &num } else { &den })
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm(values: &[Rational]) -> Integer {
    values.iter().fold(Integer::one(), |acc, v| acc.lcm(v.denom()))
}

/// Exact fraction string: `"a/b"`, or `"a"` when the denominator is 1.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().ok()?;
            let d: Integer = d.trim().parse().ok()?;
            rat_normalize(n, d).ok()
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
