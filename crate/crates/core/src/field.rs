//! Coefficient fields: the rationals and the field with two elements.
//!
//! Elements of either field are carried as `BigRational`. Over GF(2) the
//! canonical representatives are `0` and `1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientField {
    #[serde(rename = "q")]
    Rationals,
    Gf2,
}

impl CoefficientField {
    pub fn characteristic(self) -> u32 {
        match self {
            CoefficientField::Rationals => 0,
            CoefficientField::Gf2 => 2,
        }
    }

    /// Maps a rational to its canonical representative in this field.
    ///
    /// Over GF(2) the denominator must be odd; an even denominator means a
    /// division by an element that vanishes mod 2 slipped through upstream.
    pub fn reduce(self, x: BigRational) -> BigRational {
        match self {
            CoefficientField::Rationals => x,
            CoefficientField::Gf2 => {
                assert!(
                    x.denom().is_odd(),
                    "rational {x} has no image in GF(2)"
                );
                if x.numer().is_odd() {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
        }
    }

    /// Whether the rational `x` can be mapped into this field.
    pub fn admits(self, x: &BigRational) -> bool {
        match self {
            CoefficientField::Rationals => true,
            CoefficientField::Gf2 => x.denom().is_odd(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(self, k: T) -> BigRational {
        self.reduce(BigRational::from_integer(k.into()))
    }

    /// Whether the integer `k` is invertible in this field.
    pub fn is_unit_int(self, k: i64) -> bool {
        match self {
            CoefficientField::Rationals => k != 0,
            CoefficientField::Gf2 => k.rem_euclid(2) == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoefficientField::Rationals => "q",
            CoefficientField::Gf2 => "gf2",
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoefficientField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "rationals" | "qq" => Ok(CoefficientField::Rationals),
            "gf2" | "f2" | "z2" => Ok(CoefficientField::Gf2),
            other => Err(format!("unknown coefficient field `{other}` (expected q or gf2)")),
        }
    }
}

/// Formats a rational as `p` or `p/q`.
pub(crate) fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_reduction() {
        let f = CoefficientField::Gf2;
        assert_eq!(f.from_int(5), BigRational::one());
        assert_eq!(f.from_int(-4), BigRational::zero());
        assert_eq!(f.reduce(BigRational::new(3.into(), 5.into())), BigRational::one());
        let one = f.from_int(1);
        assert!(f.reduce(&one + &one).is_zero());
    }

    #[test]
    #[should_panic]
    fn gf2_rejects_even_denominator() {
        CoefficientField::Gf2.reduce(BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn units() {
        assert!(CoefficientField::Rationals.is_unit_int(-3));
        assert!(!CoefficientField::Rationals.is_unit_int(0));
        assert!(CoefficientField::Gf2.is_unit_int(-3));
        assert!(!CoefficientField::Gf2.is_unit_int(4));
    }

    #[test]
    fn rational_text() {
        let x = parse_rational("-3/6").unwrap();
        assert_eq!(fmt_rational(&x), "-1/2");
        assert_eq!(fmt_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_none());
        assert_eq!("GF2".parse::<CoefficientField>(), Ok(CoefficientField::Gf2));
    }
}
