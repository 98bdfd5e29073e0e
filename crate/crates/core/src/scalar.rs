//! Probability scalars.
//!
//! Enumeration-based evaluators count favourable outcomes with integers and
//! only convert to a probability at the end, so they can produce either an
//! exact rational or a float through the same code path.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Probability: Clone + PartialOrd + Num + Debug + Display {
    /// `num / den`; `den` must be nonzero.
    fn ratio(num: u64, den: u64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Probability for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Probability for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Parses `n/d`, an integer, or a decimal such as `0.25` into an exact
/// probability in `[0, 1]`.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Syntax(format!("`{text}` is not a probability in [0, 1]"));
    let value = if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = text.split_once('.') {
        if int.starts_with('-') || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(text.parse().map_err(|_| bad())?)
    };
    if value < BigRational::zero() || value > BigRational::one() {
        return Err(bad());
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_probability("1/3").unwrap(), BigRational::ratio(1, 3));
        assert_eq!(parse_probability("0.25").unwrap(), BigRational::ratio(1, 4));
        assert_eq!(parse_probability(".5").unwrap(), BigRational::ratio(1, 2));
        assert_eq!(parse_probability("1").unwrap(), BigRational::one());
        assert_eq!(parse_probability("0").unwrap(), BigRational::zero());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_probability("3/2").is_err());
        assert!(parse_probability("-0.1").is_err());
        assert!(parse_probability("1/0").is_err());
        assert!(parse_probability("abc").is_err());
    }

    #[test]
    fn float_and_exact_agree() {
        let exact = BigRational::ratio(2, 7);
        assert!((Probability::to_f64(&exact) - f64::ratio(2, 7)).abs() < 1e-15);
    }
}
