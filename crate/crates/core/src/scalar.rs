//! Probability arithmetic.
//!
//! Every probability-level computation is generic over [`Scalar`]. The default
//! instance is [`BigRational`], which makes the classical identities exact
//! equalities; `f64` is available for large or externally supplied models and
//! compares with a tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Tolerance used by float mode for mass and stochasticity checks.
pub const FLOAT_TOL: f64 = 1e-12;

/// Tolerance used by float mode when comparing an interference coefficient with 1.
pub const BOUNDARY_TOL: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and equality needs no tolerance.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses `"p/q"`, integers and decimals (with optional exponent).
    fn parse_weight(text: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Square root as a float. Perfect squares of exact values are returned
    /// without rounding beyond the final conversion.
    fn sqrt_f64(&self) -> f64;

    /// Equality, exact for exact types and within `tol` otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn to_json(&self) -> serde_json::Value;

    fn is_positive_tol(&self) -> bool {
        !self.approx_eq(&Self::zero(), FLOAT_TOL) && self.is_positive()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }

    fn parse_weight(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_f64(&self) -> f64 {
        if self.is_negative() {
            return f64::NAN;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            ToPrimitive::to_f64(&BigRational::new(rn, rd)).unwrap_or(f64::NAN)
        } else {
            Scalar::to_f64(self).sqrt()
        }
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (n.trim().parse::<f64>().ok()?, d.trim().parse::<f64>().ok()?);
                (d != 0.0).then(|| n / d)
            }
            None => text.parse().ok(),
        }
        .filter(|w: &f64| w.is_finite())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_f64(&self) -> f64 {
        self.sqrt()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Exact one-half, third, etc. as a rational.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    <BigRational as Scalar>::from_ratio(numer, denom)
}

/// Sums a sequence of scalars.
pub fn sum<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v.clone())
}

pub(crate) fn is_one<S: Scalar>(value: &S) -> bool {
    value.approx_eq(&S::one(), FLOAT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/4"), Some(ratio(1, 4)));
        assert_eq!(parse_rational(" 3 / 12 "), Some(ratio(1, 4)));
        assert_eq!(parse_rational("0.04"), Some(ratio(1, 25)));
        assert_eq!(parse_rational("-2.5e-1"), Some(ratio(-1, 4)));
        assert_eq!(parse_rational("1E2"), Some(ratio(100, 1)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("7"), Some(ratio(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn float_weights() {
        assert_eq!(f64::parse_weight("1/4"), Some(0.25));
        assert_eq!(f64::parse_weight("0.45"), Some(0.45));
        assert_eq!(f64::parse_weight("inf"), None);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(ratio(9, 100).sqrt_f64(), 0.3);
        assert_eq!(ratio(25, 9).sqrt_f64(), 5.0 / 3.0);
        assert_eq!(<BigRational as num_traits::One>::one().sqrt_f64(), 1.0);
        assert!((ratio(1, 8).sqrt_f64() - 2f64.sqrt() / 4.0).abs() < 1e-16);
    }
}
