//! Dense univariate polynomials in `t` over a [`CoefficientField`].
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the empty vector is the zero polynomial. Every operation takes the field
//! explicitly and reduces its output coefficients into it.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::CoefficientField;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_coeffs(field: CoefficientField, coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly {
            coeffs: coeffs.into_iter().map(|c| field.reduce(c)).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Number of leading zero coefficients, i.e. the `t`-adic valuation.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `t^k`; the caller guarantees `k <= low_order()`.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly {
            coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn add(&self, other: &Poly, field: CoefficientField) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| field.reduce(self.coeff(i) + other.coeff(i)))
            .collect();
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn neg(&self, field: CoefficientField) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.reduce(-c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational, field: CoefficientField) -> Poly {
        let mut p = Poly {
            coeffs: self.coeffs.iter().map(|x| field.reduce(x * c)).collect(),
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly, field: CoefficientField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(field, coeffs)
    }

    /// Exact quotient; panics in debug builds if `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Poly, field: CoefficientField) -> Poly {
        let (q, r) = self.div_rem(divisor, field);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly, field: CoefficientField) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let inv_lead = field.reduce(divisor.lead().unwrap().recip());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = field.reduce(&rem[top] * &inv_lead);
            if !c.is_zero() {
                let shift = top - dd;
                for (k, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] = field.reduce(&rem[shift + k] - &c * d);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        let mut q = Poly { coeffs: quot };
        q.trim();
        let mut r = Poly { coeffs: rem };
        r.trim();
        (q, r)
    }

    pub fn monic(&self, field: CoefficientField) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip(), field),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, field: CoefficientField) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            // monic remainders keep rational coefficients small
            let (_, r) = a.div_rem(&b, field);
            a = b;
            b = r.monic(field);
        }
        a.monic(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Poly {
        Poly::from_coeffs(
            CoefficientField::Rationals,
            v.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    #[test]
    fn division_identity() {
        let f = CoefficientField::Rationals;
        let a = q(&[1, 0, -2, 3, 5]);
        let b = q(&[2, 1, 1]);
        let (qq, r) = a.div_rem(&b, f);
        assert_eq!(qq.mul(&b, f).add(&r, f), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = CoefficientField::Rationals;
        let common = q(&[1, 1]);
        let a = common.mul(&q(&[2, 0, 1]), f);
        let b = common.mul(&q(&[-3, 1]), f);
        assert_eq!(a.gcd(&b, f), common);
    }

    #[test]
    fn gf2_squares_collapse() {
        let f = CoefficientField::Gf2;
        let one_plus_t = Poly::from_coeffs(f, vec![BigRational::one(), BigRational::one()]);
        let sq = one_plus_t.mul(&one_plus_t, f);
        assert_eq!(
            sq,
            Poly::from_coeffs(f, vec![BigRational::one(), BigRational::zero(), BigRational::one()])
        );
    }
}
