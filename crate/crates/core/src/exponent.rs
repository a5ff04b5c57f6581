//! Exact rational exponents `c = num/den` with `1 < c < 2`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

/// A reduced fraction `num/den` strictly between 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalExponent {
    num: u32,
    den: u32,
}

pub fn make_exponent(num: u64, den: u64) -> Result<RationalExponent> {
    RationalExponent::new(num, den)
}

impl RationalExponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (n, d) = if g == 0 { (num, den) } else { (num / g, den / g) };
        // den < num < 2·den
        if n <= d || n >= 2 * d {
            return Err(Error::OutOfRange { num: n, den: d });
        }
        let num = u32::try_from(n).map_err(|_| Error::Overflow(format!("numerator {n}")))?;
        let den = u32::try_from(d).map_err(|_| Error::Overflow(format!("denominator {d}")))?;
        Ok(Self { num, den })
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn value<T: Real>(&self) -> T {
        T::of_u64(self.num as u64) / T::of_u64(self.den as u64)
    }

    /// `1 - 1/c = (num - den)/num`, the exponent of the density weight.
    pub fn weight_exponent<T: Real>(&self) -> T {
        T::of_u64((self.num - self.den) as u64) / T::of_u64(self.num as u64)
    }

    /// The density weight `c·m^(1-1/c)` attached to a member `m` of `ℕ^c`.
    pub fn density_weight<T: Real>(&self, m: u64) -> T {
        self.value::<T>() * T::of_u64(m).powf(self.weight_exponent())
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RationalExponent {
    type Err = Error;

    /// Parses `"num/den"`. Decimal notation is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ExponentSyntax(s.to_string());
        let (n, d) = s.trim().split_once('/').ok_or_else(bad)?;
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(n.trim()) || !all_digits(d.trim()) {
            return Err(bad());
        }
        let num: u64 = n.trim().parse().map_err(|_| bad())?;
        let den: u64 = d.trim().parse().map_err(|_| bad())?;
        Self::new(num, den)
    }
}

impl TryFrom<String> for RationalExponent {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RationalExponent> for String {
    fn from(c: RationalExponent) -> String {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_validates() {
        let c = make_exponent(11, 10).unwrap();
        assert_eq!((c.num(), c.den()), (11, 10));
        let c = make_exponent(3, 2).unwrap();
        assert_eq!((c.num(), c.den()), (3, 2));
        let c = make_exponent(22, 20).unwrap();
        assert_eq!((c.num(), c.den()), (11, 10));
        assert!(matches!(make_exponent(4, 2), Err(Error::OutOfRange { num: 2, den: 1 })));
        assert!(matches!(make_exponent(1, 1), Err(Error::OutOfRange { .. })));
        assert!(matches!(make_exponent(9, 10), Err(Error::OutOfRange { .. })));
        assert!(matches!(make_exponent(3, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn parses_fractions_only() {
        assert_eq!("73/64".parse::<RationalExponent>().unwrap().to_string(), "73/64");
        assert!("1.1".parse::<RationalExponent>().is_err());
        assert!("11/10.0".parse::<RationalExponent>().is_err());
        assert!("-11/10".parse::<RationalExponent>().is_err());
        assert!(matches!("2/1".parse::<RationalExponent>(), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn weight_exponent_is_one_minus_inverse() {
        let c = make_exponent(11, 10).unwrap();
        assert!((c.weight_exponent::<f64>() - (1.0 - 10.0 / 11.0)).abs() < 1e-15);
    }
}
