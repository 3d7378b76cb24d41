//! Scalar abstractions.
//!
//! The numeric core (radial functions, quadrature, the fixed-point solver)
//! needs transcendental functions and is written against [`Real`], which
//! `f32` and `f64` satisfy. The operator algebra only needs exact field
//! operations and is written against [`Field`], which additionally admits
//! arbitrary-precision rationals ([`Exact`]).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational scalar used by the operator-algebra checks.
pub type Exact = num_rational::BigRational;

/// Floating-point scalar accepted by the numeric core.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent finite `f64` values at all, which no `Float` does.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal representable in Real")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in Real")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
}

/// Scalar field for the operator algebra: floats or exact rationals.
///
/// Implemented for a closed set of types so that each can state how exactly
/// it compares.
pub trait Field: Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Send + Sync {
    /// Absolute slack allowed when an identity is checked at unit scale:
    /// zero for exact types, a few ulps for floats.
    fn comparison_tolerance() -> Self;
}

impl Field for f64 {
    fn comparison_tolerance() -> Self {
        64.0 * f64::EPSILON
    }
}

impl Field for f32 {
    fn comparison_tolerance() -> Self {
        64.0 * f32::EPSILON
    }
}

impl Field for Exact {
    fn comparison_tolerance() -> Self {
        <Exact as num_traits::Zero>::zero()
    }
}

impl Field for num_rational::Rational64 {
    fn comparison_tolerance() -> Self {
        <num_rational::Rational64 as num_traits::Zero>::zero()
    }
}

/// Converts an `f64` into any [`Field`]. For rationals the conversion is exact
/// in the binary sense; use [`exact_decimal`] for decimal literals.
pub fn field_from_f64<T: Field>(x: f64) -> Option<T> {
    T::from_f64(x)
}

/// Parses a decimal literal such as `"0.3"` or `"-1.25e-2"` into an exact
/// rational, so that `"0.3"` becomes `3/10` rather than the nearest binary
/// fraction.
pub fn exact_decimal(text: &str) -> Option<Exact> {
    use num_bigint::BigInt;
    use num_traits::Zero;

    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Exact::from_integer(numer);
    let factor = Exact::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ratio(n: i64, d: i64) -> Exact {
        Exact::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(exact_decimal("0.3"), Some(ratio(3, 10)));
        assert_eq!(exact_decimal("-1.25e-2"), Some(ratio(-1, 80)));
        assert_eq!(exact_decimal("2"), Some(ratio(2, 1)));
        assert_eq!(exact_decimal(".5"), Some(ratio(1, 2)));
        assert_eq!(exact_decimal("1e3"), Some(ratio(1000, 1)));
        assert_eq!(exact_decimal("abc"), None);
        assert_eq!(exact_decimal("."), None);
    }

    #[test]
    fn lit_round_trips() {
        assert_eq!(<f64 as Real>::lit(0.25), 0.25);
        assert_eq!(<f32 as Real>::lit(0.25), 0.25f32);
    }
}
