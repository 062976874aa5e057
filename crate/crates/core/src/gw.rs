//! Closed-form Gromov–Witten data for `O(-n) -> P^m`.
//!
//! The degree-one section counts sit on the subdiagonal of the continuation
//! matrix and equal `A_a = n^2 * tau_{a,n}`, where `tau_{a,n}` is the
//! coefficient of `x^a` in `prod_{A+B=n, A,B>=1} (A x + B)`. Higher-degree
//! counts have no closed form and are deliberately not produced here.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoefficientField;

/// The coefficients `tau_{0,n}, ..., tau_{n-1,n}`, reduced into `field`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauTable {
    pub n: u32,
    pub field: CoefficientField,
    #[serde(serialize_with = "serialize_bigints")]
    pub coeffs: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

fn reduce_int(field: CoefficientField, x: BigInt) -> BigInt {
    match field {
        CoefficientField::Rationals => x,
        CoefficientField::Gf2 => {
            if (x % 2u32).is_zero() {
                BigInt::zero()
            } else {
                BigInt::one()
            }
        }
    }
}

impl TauTable {
    pub fn get(&self, a: usize) -> Option<&BigInt> {
        self.coeffs.get(a)
    }

    pub fn sum(&self) -> BigInt {
        reduce_int(self.field, self.coeffs.iter().sum())
    }
}

/// Expands `prod_{A+B=n} (A x + B)` exactly; the product is empty for `n = 1`.
/// Over GF(2) the integer expansion is reduced mod 2.
pub fn tau_table(n: u32, field: CoefficientField) -> Result<TauTable> {
    if n == 0 {
        return Err(Error::OutOfRange("tau_{a,n} needs n >= 1".into()));
    }
    // ascending coefficients in x
    let mut poly = vec![BigInt::one()];
    for big_a in 1..n {
        let big_b = n - big_a;
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c * big_b;
            next[k + 1] += c * big_a;
        }
        poly = next;
    }
    Ok(TauTable {
        n,
        field,
        coeffs: poly.into_iter().map(|c| reduce_int(field, c)).collect(),
    })
}

fn check_monotone(m: u32, n: u32) -> Result<()> {
    if n >= 1 && m >= 1 && n < 1 + m {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "degree-one section counts are only known for the monotone range 1 <= n < 1+m, got (m, n) = ({m}, {n})"
        )))
    }
}

/// `A_a = n^2 tau_{a,n}`, the count of degree-one sections in row `N+a`,
/// column `1+a` of the continuation matrix.
pub fn subdiagonal_entry(m: u32, n: u32, a: u32, field: CoefficientField) -> Result<BigInt> {
    check_monotone(m, n)?;
    if a >= n {
        return Err(Error::OutOfRange(format!(
            "A_a needs 0 <= a <= n-1, got a = {a} for n = {n}"
        )));
    }
    let tau = tau_table(n, CoefficientField::Rationals)?;
    let value = BigInt::from(n) * BigInt::from(n) * &tau.coeffs[a as usize];
    Ok(reduce_int(field, value))
}

/// Genus-zero three-point invariant `GW_{0,3,1}(F_m, F_{a+1}, P^{n-a})` of the
/// total space, equal to `A_a / (-n) = -n tau_{a,n}`.
pub fn three_point_degree_one(m: u32, n: u32, a: u32, field: CoefficientField) -> Result<BigInt> {
    check_monotone(m, n)?;
    if a >= n {
        return Err(Error::OutOfRange(format!("a = {a} out of range for n = {n}")));
    }
    let tau = tau_table(n, CoefficientField::Rationals)?;
    Ok(reduce_int(field, -BigInt::from(n) * &tau.coeffs[a as usize]))
}

/// Complex rank `n d` of the obstruction bundle over degree-`d` sections.
pub fn obstruction_rank(n: u32, d: u32) -> u64 {
    n as u64 * d as u64
}

/// Degrees of the line-bundle summands of `u^* T^v E` for a section `u` of
/// degree `d`: `O(2d) + O(d)^{m-1} + O(-1-nd)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub degrees: Vec<i64>,
}

impl SplittingType {
    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn h0(&self) -> u64 {
        self.degrees.iter().map(|&d| h0_p1(d)).sum()
    }

    pub fn h1(&self) -> u64 {
        self.degrees.iter().map(|&d| h1_p1(d)).sum()
    }
}

pub fn splitting_type(m: u32, n: u32, d: u32) -> Result<SplittingType> {
    if m == 0 {
        return Err(Error::OutOfRange("splitting type needs m >= 1".into()));
    }
    let d = d as i64;
    let mut degrees = Vec::with_capacity(m as usize + 1);
    degrees.push(2 * d);
    degrees.extend(std::iter::repeat_n(d, m as usize - 1));
    degrees.push(-1 - n as i64 * d);
    Ok(SplittingType { degrees })
}

pub fn h0_p1(d: i64) -> u64 {
    (d + 1).max(0) as u64
}

pub fn h1_p1(d: i64) -> u64 {
    (-d - 1).max(0) as u64
}

pub fn chi_p1(d: i64) -> i64 {
    d + 1
}

/// Complex virtual dimension `m + N d` of degree-`d` sections.
pub fn virdim_sections(m: i64, n: i64, d: i64) -> i64 {
    m + (1 + m - n) * d
}

/// The section degree `d >= 0` contributing to entry `(i, j)` (1-indexed) of
/// the continuation matrix, from the dimension condition `N d = i - j + 1`.
///
/// The constant sections (`d = 0`) land exactly on `i = j - 1` for every `N`.
/// For `N = 0` no positive degree is singled out, so only `d = 0` is returned.
pub fn entry_position_condition(m: u32, n: u32, i: u32, j: u32) -> Option<u32> {
    let min_chern = 1 + m as i64 - n as i64;
    let gap = i as i64 - j as i64 + 1;
    if gap == 0 {
        return Some(0);
    }
    if min_chern == 0 || gap % min_chern != 0 {
        return None;
    }
    let d = gap / min_chern;
    (d > 0).then_some(d as u32)
}
