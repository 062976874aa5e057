//! Quantum cohomology as a quotient `Lambda[g] / (relation)` by one monic
//! relation in a single generator `g`.
//!
//! Two generators occur: `omega_Q`, the quantum hyperplane class, and
//! `c_Q = -n omega_Q`, the pull-back of `c_1(L)`. Presentations are never
//! converted implicitly; [`change_generator`] performs the substitution and
//! the monic renormalization.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::linalg::{BasisLabel, LambdaMatrix};
use crate::novikov::{GradingContext, NovikovScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    CQ,
    OmegaQ,
}

impl Generator {
    pub fn json_name(self) -> &'static str {
        match self {
            Generator::CQ => "c",
            Generator::OmegaQ => "omega",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::CQ => "c",
            Generator::OmegaQ => "ω",
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.json_name())
    }
}

/// `Lambda[g] / (g^s + b_{s-1} g^{s-1} + ... + b_0)`.
///
/// When `complete` is false the coefficients at the powers listed in
/// `unknown` are undetermined; they are stored as zero and the presentation
/// refuses ring arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    pub generator: Generator,
    field: CoefficientField,
    /// `b_0, ..., b_{s-1}, 1` (ascending).
    relation: Vec<NovikovScalar>,
    pub grading: Option<GradingContext>,
    pub unknown: Vec<usize>,
}

impl RingPresentation {
    /// From descending coefficients `1, b_{s-1}, ..., b_0` of a monic relation.
    pub fn monic(generator: Generator, descending: &[NovikovScalar]) -> Result<Self> {
        let lead = descending
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty relation".into()))?;
        if !lead.is_one() {
            return Err(Error::DimensionMismatch(format!("relation must be monic, leading coefficient {lead}")));
        }
        let field = lead.field();
        if let Some(x) = descending.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(field, x.field()));
        }
        Ok(RingPresentation {
            generator,
            field,
            relation: descending.iter().rev().cloned().collect(),
            grading: None,
            unknown: Vec::new(),
        })
    }

    /// `g^s + sum c_k g^k` from `(c_k, k)` pairs with `k < s`.
    pub fn from_terms(
        generator: Generator,
        field: CoefficientField,
        degree: usize,
        terms: &[(NovikovScalar, usize)],
    ) -> Result<Self> {
        let mut asc = vec![NovikovScalar::zero(field); degree + 1];
        asc[degree] = NovikovScalar::one(field);
        for (c, k) in terms {
            if *k >= degree {
                return Err(Error::DimensionMismatch(format!("term of power {k} in a relation of degree {degree}")));
            }
            asc[*k] = &asc[*k] + c;
        }
        let desc: Vec<_> = asc.into_iter().rev().collect();
        Self::monic(generator, &desc)
    }

    pub fn with_grading(mut self, grading: GradingContext) -> Self {
        self.grading = Some(grading);
        self
    }

    pub fn with_unknown(mut self, mut powers: Vec<usize>) -> Self {
        powers.sort_unstable();
        powers.dedup();
        for &k in &powers {
            self.relation[k] = NovikovScalar::zero(self.field);
        }
        self.unknown = powers;
        self
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    /// Degree of the relation, which is the rank of the ring.
    pub fn degree(&self) -> usize {
        self.relation.len() - 1
    }

    pub fn complete(&self) -> bool {
        self.unknown.is_empty()
    }

    /// Coefficient of `g^k` in the relation.
    pub fn coefficient(&self, k: usize) -> Option<&NovikovScalar> {
        self.relation.get(k)
    }

    /// Nonzero `(coefficient, power)` terms, descending by power.
    pub fn terms(&self) -> Vec<(NovikovScalar, usize)> {
        (0..=self.degree())
            .rev()
            .filter(|k| !self.relation[*k].is_zero())
            .map(|k| (self.relation[k].clone(), k))
            .collect()
    }

    /// Homogeneity of the relation: every nonzero `b_k g^k` has degree
    /// `2 s` with generator degree 2 and `t` of degree `2N`.
    pub fn is_homogeneous(&self) -> bool {
        let Some(ctx) = self.grading else {
            return true;
        };
        let s = self.degree() as i64;
        self.terms().iter().all(|(c, k)| match c.monomial_degree(ctx) {
            Some(deg) => deg + 2 * *k as i64 == 2 * s,
            None => false,
        })
    }

    fn require_complete(&self) -> Result<()> {
        if self.complete() {
            Ok(())
        } else {
            Err(Error::IncompletePresentation(self.unknown.clone()))
        }
    }

    /// Reduces a polynomial (ascending coefficients) modulo the relation.
    pub fn reduce(&self, raw: &[NovikovScalar]) -> Result<RingElement> {
        self.require_complete()?;
        let s = self.degree();
        let mut c: Vec<NovikovScalar> = raw.to_vec();
        if let Some(x) = c.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch(self.field, x.field()));
        }
        for top in (s..c.len()).rev() {
            let lead = std::mem::replace(&mut c[top], NovikovScalar::zero(self.field));
            if lead.is_zero() {
                continue;
            }
            // g^top = g^{top-s} g^s = -g^{top-s} sum_{k<s} b_k g^k
            for k in 0..s {
                let b = &self.relation[k];
                if !b.is_zero() {
                    let idx = top - s + k;
                    c[idx] = &c[idx] - &(&lead * b);
                }
            }
        }
        c.resize(s, NovikovScalar::zero(self.field));
        Ok(RingElement { coeffs: c })
    }

    pub fn generator_power(&self, k: usize) -> Result<RingElement> {
        let mut raw = vec![NovikovScalar::zero(self.field); k + 1];
        raw[k] = NovikovScalar::one(self.field);
        self.reduce(&raw)
    }

    pub fn one(&self) -> Result<RingElement> {
        self.generator_power(0)
    }

    pub fn scalar(&self, c: &NovikovScalar) -> Result<RingElement> {
        self.reduce(std::slice::from_ref(c))
    }

    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        let s = self.degree();
        if x.coeffs.len() != s || y.coeffs.len() != s {
            return Err(Error::PresentationMismatch);
        }
        if s == 0 {
            return self.reduce(&[]);
        }
        let mut raw = vec![NovikovScalar::zero(self.field); 2 * s - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] = &raw[i + j] + &(a * b);
                }
            }
        }
        self.reduce(&raw)
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        if x.coeffs.len() != self.degree() || y.coeffs.len() != self.degree() {
            return Err(Error::PresentationMismatch);
        }
        Ok(RingElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn power(&self, x: &RingElement, k: usize) -> Result<RingElement> {
        let mut acc = self.one()?;
        for _ in 0..k {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of `y -> x y` in the power basis `g^{s-1}, ..., g, 1`.
    pub fn multiplication_matrix(&self, x: &RingElement) -> Result<LambdaMatrix> {
        let s = self.degree();
        let basis: Vec<RingElement> = (0..s)
            .rev()
            .map(|k| self.generator_power(k))
            .collect::<Result<_>>()?;
        let mut m = self.multiplication_matrix_in_basis(x, &basis)?;
        m.basis = match self.generator {
            Generator::CQ => BasisLabel::CqPowers,
            Generator::OmegaQ => BasisLabel::OmegaPowers,
        };
        Ok(m)
    }

    /// Matrix of `y -> x y` in an arbitrary basis of the ring.
    pub fn multiplication_matrix_in_basis(&self, x: &RingElement, basis: &[RingElement]) -> Result<LambdaMatrix> {
        let s = self.degree();
        if basis.len() != s {
            return Err(Error::DimensionMismatch(format!("{} basis vectors for a ring of rank {s}", basis.len())));
        }
        // change of basis: column j holds the descending power coordinates of basis[j]
        let mut p = LambdaMatrix::zeros(self.field, s);
        for (j, b) in basis.iter().enumerate() {
            for (i, c) in b.descending().into_iter().enumerate() {
                p.set(i, j, c);
            }
        }
        let mut out = LambdaMatrix::zeros(self.field, s);
        for (j, b) in basis.iter().enumerate() {
            let image = self.multiply(x, b)?;
            let coords = p.solve(&image.descending())?;
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        if let Some(g) = self.grading {
            out = out.with_grading(g);
        }
        Ok(out)
    }

    pub fn is_nilpotent_element(&self, x: &RingElement) -> Result<bool> {
        self.require_complete()?;
        Ok(self.power(x, self.degree())?.is_zero())
    }

    /// Classical cup-product powers `omega^m, ..., omega, 1` inside a quantum
    /// ring with generator `omega_Q`.
    ///
    /// `corrections(j)` lists `(c, l)` with
    /// `omega_Q * omega^j = omega^{j+1} + sum c omega^l`, each `l <= j`.
    /// The recursion is checked against the classical vanishing of
    /// `omega^{m+1}`.
    pub fn classical_power_basis<F>(&self, corrections: F) -> Result<Vec<RingElement>>
    where
        F: Fn(usize) -> Vec<(NovikovScalar, usize)>,
    {
        if self.generator != Generator::OmegaQ {
            return Err(Error::PresentationMismatch);
        }
        let s = self.degree();
        let w = self.generator_power(1.min(s))?;
        let mut powers = vec![self.one()?];
        for j in 0..s {
            let mut next = self.multiply(&w, &powers[j])?;
            for (c, l) in corrections(j) {
                if l > j {
                    return Err(Error::DimensionMismatch(format!("correction to omega^{l} in omega * omega^{j}")));
                }
                let term = powers[l].scaled(&c);
                next = self.add(&next, &term.scaled(&-NovikovScalar::one(self.field)))?;
            }
            powers.push(next);
        }
        // powers[s] must be the classical omega^{m+1} = 0
        if !powers.pop().expect("nonempty").is_zero() {
            return Err(Error::PresentationMismatch);
        }
        powers.reverse();
        Ok(powers)
    }

    pub fn render(&self) -> String {
        let g = self.generator.symbol();
        let mut parts = Vec::new();
        for k in (0..=self.degree()).rev() {
            let unknown = self.unknown.contains(&k);
            let c = &self.relation[k];
            if c.is_zero() && !unknown {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => g.to_string(),
                _ => format!("{g}^{k}"),
            };
            let coeff = if unknown {
                "?".to_string()
            } else {
                c.to_string()
            };
            parts.push(match (c.is_one() && !unknown, k) {
                (true, 0) => "1".to_string(),
                (true, _) => power,
                (false, 0) => coeff,
                (false, _) if coeff.contains(" + ") => format!("({coeff})*{power}"),
                (false, _) => format!("{coeff}*{power}"),
            });
        }
        format!("Λ[{g}]/({})", parts.join(" + "))
    }
}

impl Serialize for RingPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            generator: Generator,
            relation: Terms<'a>,
            complete: bool,
            unknown_powers: &'a [usize],
            text: String,
        }
        struct Terms<'a>(&'a RingPresentation);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let terms = self.0.terms();
                let mut seq = s.serialize_seq(Some(terms.len()))?;
                for (c, k) in &terms {
                    seq.serialize_element(&(c.to_string(), k))?;
                }
                seq.end()
            }
        }
        Repr {
            generator: self.generator,
            relation: Terms(self),
            complete: self.complete(),
            unknown_powers: &self.unknown,
            text: self.render(),
        }
        .serialize(s)
    }
}

/// Reduced element `sum_k c_k g^k` with `k < s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    /// Ascending: `coeffs[k]` multiplies `g^k`.
    coeffs: Vec<NovikovScalar>,
}

impl RingElement {
    /// Coefficients of `g^{s-1}, ..., g^0`.
    pub fn descending(&self) -> Vec<NovikovScalar> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn coefficient(&self, k: usize) -> Option<&NovikovScalar> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NovikovScalar::is_zero)
    }

    pub fn scaled(&self, c: &NovikovScalar) -> RingElement {
        RingElement {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }
}

/// Substitutes `c = -n omega` into a `c_Q` presentation and divides by
/// `(-n)^s` so the relation stays monic.
pub fn change_generator(pres: &RingPresentation, n: u32) -> Result<RingPresentation> {
    if pres.generator != Generator::CQ {
        return Err(Error::PresentationMismatch);
    }
    let f = pres.field;
    if !f.is_unit_int(n as i64) {
        return Err(Error::NotInvertible(format!("-{n}")));
    }
    let minus_n = NovikovScalar::from_int(f, -(n as i64));
    let s = pres.degree();
    let top = minus_n.pow(s as i64)?;
    let mut asc = Vec::with_capacity(s + 1);
    for k in 0..=s {
        asc.push((&pres.relation[k] * &minus_n.pow(k as i64)?).try_div(&top)?);
    }
    let desc: Vec<_> = asc.into_iter().rev().collect();
    let mut out = RingPresentation::monic(Generator::OmegaQ, &desc)?.with_unknown(pres.unknown.clone());
    out.grading = pres.grading;
    Ok(out)
}
