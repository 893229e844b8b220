//! Scalar abstraction shared by the float and exact code paths.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Field element used by every matrix and polynomial in the crate.
///
/// `EXACT` selects the exact code paths (zero tests, Faddeev–LeVerrier,
/// Sturm counts). Float types take the tolerance-based paths instead.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static
{
    const EXACT: bool;

    fn as_f64(&self) -> f64;

    /// Exact for rationals (binary expansion of the double), rounding for floats.
    fn from_float(x: f64) -> Self;

    /// Square root when it exists in the type: any nonnegative float, or a
    /// rational whose numerator and denominator are perfect squares.
    fn sqrt(&self) -> Option<Self>;

    /// Unit roundoff; zero for exact types.
    fn epsilon() -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 fits") / Self::from_i64(den).expect("i64 fits")
    }

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 fits")
    }

    /// Strictly positive. `Signed::is_positive` counts `+0.0` as positive for floats.
    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }

    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.as_f64().abs() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn as_f64(&self) -> f64 {
        *self
    }

    fn from_float(x: f64) -> Self {
        x
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn as_f64(&self) -> f64 {
        *self as f64
    }

    fn from_float(x: f64) -> Self {
        x as f32
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f32::sqrt(*self))
    }

    fn epsilon() -> f64 {
        f32::EPSILON as f64
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_float(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn sqrt(&self) -> Option<Self> {
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn epsilon() -> f64 {
        0.0
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal into a rational.
/// Decimals are read as written (`0.1` is one tenth), not via binary floats.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_only_for_squares() {
        let q = BigRational::from_ratio(9, 16);
        assert_eq!(Scalar::sqrt(&q), Some(BigRational::from_ratio(3, 4)));
        assert_eq!(Scalar::sqrt(&BigRational::from_ratio(2, 1)), None);
        assert_eq!(Scalar::sqrt(&BigRational::from_ratio(-4, 1)), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4"), Some(BigRational::from_ratio(3, 4)));
        assert_eq!(parse_rational("0.1"), Some(BigRational::from_ratio(1, 10)));
        assert_eq!(parse_rational("-2.5e-1"), Some(BigRational::from_ratio(-1, 4)));
        assert_eq!(parse_rational("7"), Some(BigRational::from_ratio(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn negligible() {
        assert!(1e-13f64.is_negligible(1e-12));
        assert!(!BigRational::from_ratio(1, 1_000_000_000).is_negligible(1.0));
    }
}
