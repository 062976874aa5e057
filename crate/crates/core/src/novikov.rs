//! Exact arithmetic in the one-variable Novikov field.
//!
//! A [`NovikovScalar`] is a ratio `t^v * P(t) / Q(t)` where `P` and `Q` are
//! ordinary polynomials with nonzero constant terms, `gcd(P, Q) = 1`, and `Q`
//! is monic. This representation is unique, so structural equality is value
//! equality. The variable `t` stands for the class of a line `[P^1]` and is a
//! unit, which is why all of its powers are pulled into the `t^v` prefix.
//!
//! Text format: a Laurent polynomial is written as `c0*t^e0 + c1*t^e1 + ...`
//! with ascending exponents, the `t^0` term written as a bare coefficient and
//! rationals as `p/q`. A genuine rational function is written `(num)/(den)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{fmt_rational, parse_rational, CoefficientField};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    field: CoefficientField,
    val: i64,
    num: Poly,
    den: Poly,
}

/// Grading bookkeeping: `t` has cohomological degree `2N`, where `N` is the
/// minimal Chern number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GradingContext {
    pub min_chern: i64,
}

impl GradingContext {
    pub fn new(min_chern: i64) -> Self {
        GradingContext { min_chern }
    }

    pub fn t_degree(&self) -> i64 {
        2 * self.min_chern
    }
}

impl NovikovScalar {
    pub fn zero(field: CoefficientField) -> Self {
        NovikovScalar {
            field,
            val: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::monomial(field, BigRational::one(), 0)
    }

    /// The variable `t`.
    pub fn t(field: CoefficientField) -> Self {
        Self::monomial(field, BigRational::one(), 1)
    }

    pub fn from_int<T: Into<BigInt>>(field: CoefficientField, k: T) -> Self {
        Self::monomial(field, BigRational::from_integer(k.into()), 0)
    }

    pub fn from_rational(field: CoefficientField, c: BigRational) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `c * t^exp`.
    pub fn monomial(field: CoefficientField, c: BigRational, exp: i64) -> Self {
        let c = field.reduce(c);
        if c.is_zero() {
            return Self::zero(field);
        }
        NovikovScalar {
            field,
            val: exp,
            num: Poly::from_coeffs(field, vec![c]),
            den: Poly::one(),
        }
    }

    /// Builds a Laurent polynomial from `(coefficient, exponent)` terms.
    /// Repeated exponents are summed.
    pub fn laurent<I>(field: CoefficientField, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, i64)>,
    {
        terms
            .into_iter()
            .map(|(c, e)| Self::monomial(field, c, e))
            .fold(Self::zero(field), |acc, x| &acc + &x)
    }

    /// Builds the ratio `numerator / denominator` of two Laurent polynomials.
    pub fn ratio(numerator: &Self, denominator: &Self) -> Result<Self> {
        numerator.try_div(denominator)
    }

    fn canonical(field: CoefficientField, val: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(field);
        }
        assert!(!den.is_zero(), "zero denominator");
        let kn = num.low_order();
        let kd = den.low_order();
        let val = val + kn as i64 - kd as i64;
        let mut num = num.shift_down(kn);
        let mut den = den.shift_down(kd);
        if !den.is_one() {
            let g = num.gcd(&den, field);
            if !g.is_one() {
                num = num.div_rem(&g, field).0;
                den = den.div_rem(&g, field).0;
            }
            let lead = den.lead().unwrap().clone();
            if !lead.is_one() {
                let inv = lead.recip();
                num = num.scale(&inv, field);
                den = den.scale(&inv, field);
            }
        }
        NovikovScalar { field, val, num, den }
    }

    /// `(v, P, Q)` with value `t^v P / Q`.
    pub(crate) fn parts(&self) -> (i64, &Poly, &Poly) {
        (self.val, &self.num, &self.den)
    }

    pub(crate) fn from_parts(field: CoefficientField, val: i64, num: Poly, den: Poly) -> Self {
        Self::canonical(field, val, num, den)
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Whether the value is a Laurent polynomial (trivial denominator).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// `Some((c, d))` when the value is the single monomial `c * t^d`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.is_laurent() && self.num.coeffs().len() == 1 {
            Some((self.num.coeffs()[0].clone(), self.val))
        } else {
            None
        }
    }

    /// The constant value, when the scalar lies in the coefficient field.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    /// Numerator terms `(coefficient, exponent)` in ascending exponent order,
    /// including the `t^v` shift.
    pub fn numerator_terms(&self) -> Vec<(BigRational, i64)> {
        laurent_terms(&self.num, self.val)
    }

    pub fn denominator_terms(&self) -> Vec<(BigRational, i64)> {
        laurent_terms(&self.den, 0)
    }

    /// Cohomological degree `2 N d` of a monomial `c * t^d`; `None` for zero
    /// and for inhomogeneous values.
    pub fn monomial_degree(&self, ctx: GradingContext) -> Option<i64> {
        self.as_monomial().map(|(_, d)| ctx.t_degree() * d)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field, other.field))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let v = self.val.min(other.val);
        let a = self.num.shift_up((self.val - v) as usize);
        let b = other.num.shift_up((other.val - v) as usize);
        if self.den == other.den {
            return Ok(Self::canonical(f, v, a.add(&b, f), self.den.clone()));
        }
        let num = a.mul(&other.den, f).add(&b.mul(&self.den, f), f);
        let den = self.den.mul(&other.den, f);
        Ok(Self::canonical(f, v, num, den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f));
        }
        Ok(Self::canonical(
            f,
            self.val + other.val,
            self.num.mul(&other.num, f),
            self.den.mul(&other.den, f),
        ))
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            self.field,
            -self.val,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        self.try_mul(&other.invert()?)
    }

    fn neg_ref(&self) -> Self {
        NovikovScalar {
            field: self.field,
            val: self.val,
            num: self.num.neg(self.field),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Rebuilds the canonical form from the stored parts. Always a no-op on
    /// values produced by this module.
    pub fn recanonicalize(&self) -> Self {
        Self::canonical(self.field, self.val, self.num.clone(), self.den.clone())
    }

    /// Parses the text format emitted by `Display`.
    pub fn parse(s: &str, field: CoefficientField) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let (num, rest) = rest.split_once(')').ok_or_else(err)?;
            let rest = rest.trim_start().strip_prefix('/').ok_or_else(err)?.trim();
            let den = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(err)?;
            let num = parse_laurent(num, field).ok_or_else(err)?;
            let den = parse_laurent(den, field).ok_or_else(err)?;
            return num.try_div(&den).map_err(|_| err());
        }
        parse_laurent(s, field).ok_or_else(err)
    }
}

fn laurent_terms(p: &Poly, shift: i64) -> Vec<(BigRational, i64)> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (c.clone(), shift + i as i64))
        .collect()
}

fn fmt_laurent(terms: &[(BigRational, i64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(c, e)| {
            if *e == 0 {
                fmt_rational(c)
            } else {
                format!("{}*t^{}", fmt_rational(c), e)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_laurent(s: &str, field: CoefficientField) -> Option<NovikovScalar> {
    let mut acc = NovikovScalar::zero(field);
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return None;
        }
        let (c, e) = match term.split_once('*') {
            Some((c, rest)) => {
                let e = rest.trim().strip_prefix("t^")?.trim().parse::<i64>().ok()?;
                (parse_rational(c)?, e)
            }
            None => (parse_rational(term)?, 0),
        };
        if !field.admits(&c) {
            return None;
        }
        acc = &acc + &NovikovScalar::monomial(field, c, e);
    }
    Some(acc)
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_laurent(&self.numerator_terms());
        if self.is_laurent() {
            f.write_str(&num)
        } else {
            write!(f, "({})/({})", num, fmt_laurent(&self.denominator_terms()))
        }
    }
}

impl Serialize for NovikovScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

// The operator impls panic on a field mismatch; use the `try_*` methods when
// the operands come from untrusted input.

impl Add for &NovikovScalar {
    type Output = NovikovScalar;
    fn add(self, rhs: &NovikovScalar) -> NovikovScalar {
        self.try_add(rhs).expect("Novikov addition")
    }
}

impl Sub for &NovikovScalar {
    type Output = NovikovScalar;
    fn sub(self, rhs: &NovikovScalar) -> NovikovScalar {
        self.try_sub(rhs).expect("Novikov subtraction")
    }
}

impl Mul for &NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, rhs: &NovikovScalar) -> NovikovScalar {
        self.try_mul(rhs).expect("Novikov multiplication")
    }
}

impl Neg for &NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        self.neg_ref()
    }
}

impl Add for NovikovScalar {
    type Output = NovikovScalar;
    fn add(self, rhs: NovikovScalar) -> NovikovScalar {
        &self + &rhs
    }
}

impl Sub for NovikovScalar {
    type Output = NovikovScalar;
    fn sub(self, rhs: NovikovScalar) -> NovikovScalar {
        &self - &rhs
    }
}

impl Mul for NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, rhs: NovikovScalar) -> NovikovScalar {
        &self * &rhs
    }
}

impl Neg for NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use CoefficientField::{Gf2, Rationals as Q};

    fn int(k: i64) -> BigRational {
        BigRational::from_integer(k.into())
    }

    fn one_plus_t(f: CoefficientField) -> NovikovScalar {
        NovikovScalar::laurent(f, [(int(1), 0), (int(1), 1)])
    }

    #[test]
    fn addition_examples() {
        let t = NovikovScalar::t(Q);
        assert_eq!(&t + &t, NovikovScalar::monomial(Q, int(2), 1));
        let t2 = NovikovScalar::t(Gf2);
        assert!((&t2 + &t2).is_zero());

        let d = one_plus_t(Q);
        let a = NovikovScalar::one(Q).try_div(&d).unwrap();
        let b = NovikovScalar::t(Q).try_div(&d).unwrap();
        assert!((&a + &b).is_one());
    }

    #[test]
    fn multiplication_examples() {
        let tinv = NovikovScalar::monomial(Q, int(1), -1);
        let t2 = NovikovScalar::monomial(Q, int(1), 2);
        assert_eq!(&tinv * &t2, NovikovScalar::t(Q));

        let n = NovikovScalar::from_int(Q, 2);
        assert_eq!(n.pow(2).unwrap(), NovikovScalar::from_int(Q, 4));

        let d = one_plus_t(Q);
        assert!((&d * &d.invert().unwrap()).is_one());
    }

    #[test]
    fn inversion_examples() {
        let t2 = NovikovScalar::monomial(Q, int(1), 2);
        assert_eq!(t2.invert().unwrap(), NovikovScalar::monomial(Q, int(1), -2));
        let m3 = NovikovScalar::from_int(Q, -3);
        assert_eq!(
            m3.invert().unwrap(),
            NovikovScalar::from_rational(Q, BigRational::new((-1).into(), 3.into()))
        );
        assert_eq!(NovikovScalar::zero(Q).invert(), Err(Error::DivisionByZero));
        let inv = one_plus_t(Q).invert().unwrap();
        assert_eq!(inv.to_string(), "(1)/(1 + 1*t^1)");
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = NovikovScalar::t(Q);
        let b = NovikovScalar::t(Gf2);
        assert_eq!(a.try_add(&b), Err(Error::FieldMismatch(Q, Gf2)));
        assert_eq!(a.try_mul(&b), Err(Error::FieldMismatch(Q, Gf2)));
    }

    #[test]
    fn monomial_degrees() {
        let ctx = GradingContext::new(3);
        assert_eq!(NovikovScalar::monomial(Q, int(5), 2).monomial_degree(ctx), Some(12));
        assert_eq!(one_plus_t(Q).monomial_degree(ctx), None);
        assert_eq!(NovikovScalar::zero(Q).monomial_degree(ctx), None);
        // O(-1) -> P^m: N = m, and t carries the degree of omega^{m+1} / omega.
        let m = 4;
        let ctx = GradingContext::new(m);
        assert_eq!(NovikovScalar::t(Q).monomial_degree(ctx), Some(2 * m));
    }

    #[test]
    fn canonical_form_pulls_t_out_of_denominator() {
        // t / (t + t^2) = 1 / (1 + t)
        let num = NovikovScalar::t(Q);
        let den = NovikovScalar::laurent(Q, [(int(1), 1), (int(1), 2)]);
        let x = num.try_div(&den).unwrap();
        assert_eq!(x, one_plus_t(Q).invert().unwrap());
        // (2 + 2t) / (4 + 4t) = 1/2
        let x = NovikovScalar::laurent(Q, [(int(2), 0), (int(2), 1)])
            .try_div(&NovikovScalar::laurent(Q, [(int(4), 0), (int(4), 1)]))
            .unwrap();
        assert_eq!(x.to_string(), "1/2");
    }

    #[test]
    fn text_round_trip() {
        let x = NovikovScalar::laurent(Q, [(int(-3), -1), (BigRational::new(1.into(), 2.into()), 0), (int(4), 3)]);
        assert_eq!(x.to_string(), "-3*t^-1 + 1/2 + 4*t^3");
        assert_eq!(NovikovScalar::parse(&x.to_string(), Q).unwrap(), x);
        let y = x.try_div(&one_plus_t(Q)).unwrap();
        assert_eq!(NovikovScalar::parse(&y.to_string(), Q).unwrap(), y);
        assert!(NovikovScalar::parse("1/2*t^1", Gf2).is_err());
        assert!(NovikovScalar::parse("t^^2", Q).is_err());
        assert_eq!(NovikovScalar::parse("0", Q).unwrap(), NovikovScalar::zero(Q));
    }
}
