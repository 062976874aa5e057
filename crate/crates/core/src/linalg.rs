//! Exact linear algebra over the Novikov field.
//!
//! Everything needed to pass from the continuation matrix `r` to symplectic
//! cohomology: characteristic polynomials (Berkowitz, division free), kernels
//! of powers by Gaussian elimination, and the size of the Jordan structure at
//! eigenvalue zero read off from the kernel dimensions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::novikov::{GradingContext, NovikovScalar};
use crate::poly::Poly;

/// What the columns of a matrix stand for. Column `j` (1-indexed) of a power
/// basis is `gen^{s-j}` for a matrix of size `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisLabel {
    /// Classical cup-product powers `omega^m, ..., omega, 1`.
    OmegaPowers,
    /// Quantum powers `c_Q^m, ..., c_Q, 1`.
    CqPowers,
    Abstract,
}

/// Square matrix over the Novikov field.
///
/// `unknown` marks entries whose true value is not determined; they are held
/// as zero in `entries`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMatrix {
    field: CoefficientField,
    entries: Vec<Vec<NovikovScalar>>,
    pub basis: BasisLabel,
    pub grading: Option<GradingContext>,
    pub unknown: BTreeSet<(usize, usize)>,
}

pub type Vector = Vec<NovikovScalar>;

impl LambdaMatrix {
    pub fn new(field: CoefficientField, entries: Vec<Vec<NovikovScalar>>) -> Result<Self> {
        let s = entries.len();
        for row in &entries {
            if row.len() != s {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {s} rows",
                    row.len()
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(field, x.field()));
                }
            }
        }
        Ok(LambdaMatrix {
            field,
            entries,
            basis: BasisLabel::Abstract,
            grading: None,
            unknown: BTreeSet::new(),
        })
    }

    pub fn zeros(field: CoefficientField, size: usize) -> Self {
        LambdaMatrix {
            field,
            entries: vec![vec![NovikovScalar::zero(field); size]; size],
            basis: BasisLabel::Abstract,
            grading: None,
            unknown: BTreeSet::new(),
        }
    }

    pub fn identity(field: CoefficientField, size: usize) -> Self {
        let mut m = Self::zeros(field, size);
        for i in 0..size {
            m.entries[i][i] = NovikovScalar::one(field);
        }
        m
    }

    pub fn with_basis(mut self, basis: BasisLabel) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_grading(mut self, grading: GradingContext) -> Self {
        self.grading = Some(grading);
        self
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// 0-indexed entry access.
    pub fn get(&self, i: usize, j: usize) -> &NovikovScalar {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: NovikovScalar) {
        assert_eq!(x.field(), self.field);
        self.entries[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<NovikovScalar>] {
        &self.entries
    }

    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(NovikovScalar::is_zero)
    }

    /// Entries only; metadata is not compared.
    pub fn same_entries(&self, other: &Self) -> bool {
        self.entries == other.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size(), "matrix size mismatch");
        let s = self.size();
        let f = self.field;
        let mut out = Self::zeros(f, s);
        for i in 0..s {
            for k in 0..s {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] = &out.entries[i][j] + &(a * b);
                    }
                }
            }
        }
        out.basis = self.basis;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (row, orow) in out.entries.iter_mut().zip(&other.entries) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x = &*x + y;
            }
        }
        out
    }

    pub fn scale(&self, c: &NovikovScalar) -> Self {
        let mut out = self.clone();
        for x in out.entries.iter_mut().flatten() {
            *x = &*x * c;
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.field, self.size()).with_basis(self.basis);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, v: &[NovikovScalar]) -> Vector {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(NovikovScalar::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Checks that every nonzero entry `(i, j)` (1-indexed) is a monomial
    /// `c t^d` with `N d = i - j + 1`. Meaningful for power bases only.
    pub fn homogeneity_violations(&self) -> Vec<(usize, usize)> {
        let Some(ctx) = self.grading else {
            return Vec::new();
        };
        let mut bad = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let gap = i as i64 - j as i64 + 1;
                match x.as_monomial() {
                    Some((_, d)) if ctx.min_chern * d == gap => {}
                    _ => bad.push((i + 1, j + 1)),
                }
            }
        }
        bad
    }

    /// Rows rescaled to polynomials in `t`: each row is multiplied by the
    /// product of its distinct denominators and a power of `t`, which changes
    /// neither the rank nor the kernel.
    fn polynomial_rows(&self) -> Vec<Vec<Poly>> {
        let f = self.field;
        self.entries
            .iter()
            .map(|row| {
                let mut dens: Vec<&Poly> = Vec::new();
                for x in row.iter().filter(|x| !x.is_zero()) {
                    let d = x.parts().2;
                    if !d.is_one() && !dens.contains(&d) {
                        dens.push(d);
                    }
                }
                let common = dens.iter().fold(Poly::one(), |acc, d| acc.mul(d, f));
                let v = row.iter().filter(|x| !x.is_zero()).map(|x| x.parts().0).min().unwrap_or(0);
                row.iter()
                    .map(|x| {
                        if x.is_zero() {
                            return Poly::zero();
                        }
                        let (val, num, den) = x.parts();
                        num.mul(&common.div_exact(den, f), f).shift_up((val - v) as usize)
                    })
                    .collect()
            })
            .collect()
    }

    /// Fraction-free (Bareiss) row echelon form over the polynomial ring;
    /// returns the echelon rows and the pivot columns.
    fn echelon(&self) -> (Vec<Vec<Poly>>, Vec<usize>) {
        let f = self.field;
        let s = self.size();
        let mut a = self.polynomial_rows();
        let mut pivots = Vec::new();
        let mut prev = Poly::one();
        let mut row = 0;
        for col in 0..s {
            if row == s {
                break;
            }
            let Some(p) = (row..s).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            for i in row + 1..s {
                for j in col + 1..s {
                    let x = a[row][col].mul(&a[i][j], f);
                    let y = a[i][col].mul(&a[row][j], f);
                    a[i][j] = x.add(&y.neg(f), f).div_exact(&prev, f);
                }
                a[i][col] = Poly::zero();
            }
            prev = a[row][col].clone();
            pivots.push(col);
            row += 1;
        }
        a.truncate(pivots.len());
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = self.field;
        let s = self.size();
        let (a, pivots) = self.echelon();
        let lift = |p: &Poly| NovikovScalar::from_parts(f, 0, p.clone(), Poly::one());
        (0..s)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![NovikovScalar::zero(f); s];
                v[free] = NovikovScalar::one(f);
                for (r, &pc) in pivots.iter().enumerate().rev() {
                    let mut acc = NovikovScalar::zero(f);
                    for j in pc + 1..s {
                        if !v[j].is_zero() && !a[r][j].is_zero() {
                            acc = &acc + &(&lift(&a[r][j]) * &v[j]);
                        }
                    }
                    v[pc] = (-&acc).try_div(&lift(&a[r][pc])).expect("nonzero pivot");
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[NovikovScalar]) -> Result<Vector> {
        let s = self.size();
        let mut aug: Vec<Vec<NovikovScalar>> = self
            .entries
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        for col in 0..s {
            let p = (col..s)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
            aug.swap(col, p);
            let inv = aug[col][col].invert()?;
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..s {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for c in col..=s {
                        let delta = &factor * &aug[col][c];
                        aug[r][c] = &aug[r][c] - &delta;
                    }
                }
            }
        }
        Ok(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }

    /// `dim ker M^k` for `k = 0, ..., size + 1`. Once two consecutive
    /// kernels agree the sequence is constant, so later powers are skipped.
    pub fn kernel_power_dims(&self) -> Vec<usize> {
        let s = self.size();
        let mut dims = Vec::with_capacity(s + 2);
        let mut p = Self::identity(self.field, s);
        while dims.len() < s + 2 {
            if let [.., x, y] = dims[..] {
                if x == y {
                    dims.push(y);
                    continue;
                }
            }
            dims.push(s - p.rank());
            p = p.mul(self);
        }
        dims
    }
}

/// `lambda^s + a_1 lambda^{s-1} + ... + a_s = det(lambda I - M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    /// `a_1, ..., a_s`.
    pub coeffs: Vec<NovikovScalar>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_i` for `1 <= i <= s`; `a_0 = 1`.
    pub fn a(&self, i: usize) -> NovikovScalar {
        match i {
            0 => NovikovScalar::one(self.field()),
            _ => self.coeffs[i - 1].clone(),
        }
    }

    fn field(&self) -> CoefficientField {
        self.coeffs
            .first()
            .map(NovikovScalar::field)
            .unwrap_or(CoefficientField::Rationals)
    }

    /// Evaluates the polynomial at a matrix.
    pub fn evaluate_at(&self, m: &LambdaMatrix) -> LambdaMatrix {
        // Horner: ((M + a_1) M + a_2) M + ...
        let f = m.field();
        let s = m.size();
        let mut acc = LambdaMatrix::identity(f, s);
        for a in &self.coeffs {
            acc = acc.mul(m).add(&LambdaMatrix::identity(f, s).scale(a));
        }
        acc
    }
}

/// Berkowitz's algorithm; uses only ring operations.
pub fn char_poly(m: &LambdaMatrix) -> CharPoly {
    let f = m.field();
    let s = m.size();
    let a = m.rows();
    // v holds the coefficients (descending) of the leading principal minor's
    // characteristic polynomial.
    let mut v = vec![NovikovScalar::one(f)];
    for r in 0..s {
        // column of the Toeplitz matrix: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
        let mut col = Vec::with_capacity(r + 2);
        col.push(NovikovScalar::one(f));
        col.push(-&a[r][r]);
        let mut w: Vector = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let dot = (0..r).fold(NovikovScalar::zero(f), |acc, k| &acc + &(&a[r][k] * &w[k]));
            col.push(-&dot);
            w = (0..r)
                .map(|i| (0..r).fold(NovikovScalar::zero(f), |acc, k| &acc + &(&a[i][k] * &w[k])))
                .collect();
        }
        let mut next = vec![NovikovScalar::zero(f); r + 2];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *out = &*out + &(&col[i - j] * vj);
                }
            }
        }
        v = next;
    }
    CharPoly {
        coeffs: v.into_iter().skip(1).collect(),
    }
}

/// `p(M) = 0` for the characteristic polynomial `p`.
pub fn satisfies_cayley_hamilton(m: &LambdaMatrix, cp: &CharPoly) -> bool {
    cp.evaluate_at(m).is_zero()
}

/// Smallest `k >= 0` with `ker M^{k+1} = ker M^k`.
pub fn stabilization_index(m: &LambdaMatrix) -> usize {
    let dims = m.kernel_power_dims();
    (0..dims.len() - 1)
        .find(|&k| dims[k + 1] == dims[k])
        .expect("kernel dimensions stabilize by the matrix size")
}

/// Basis of `ker M^k` for `k` the stabilization index: the generalized
/// eigenspace for eigenvalue zero.
pub fn stabilized_kernel(m: &LambdaMatrix) -> Vec<Vector> {
    m.pow(stabilization_index(m)).nullspace()
}

/// Sizes of the Jordan blocks for eigenvalue zero, descending.
pub fn jordan_zero_block_sizes(m: &LambdaMatrix) -> Vec<usize> {
    let dims = m.kernel_power_dims();
    // at_least[k] = number of blocks of size >= k
    let at_least: Vec<usize> = (1..dims.len()).map(|k| dims[k] - dims[k - 1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    sizes
}

pub fn image_power_rank(m: &LambdaMatrix, k: usize) -> usize {
    m.pow(k).rank()
}

/// `c^p + a_1 c^{p-1} + ... + a_p`, where `a_p` is the last nonzero
/// coefficient. `p = 0` is the zero ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShRelation {
    pub p: usize,
    /// `1, a_1, ..., a_p`: coefficients of `c^p, ..., c^0`.
    pub coeffs: Vec<NovikovScalar>,
}

impl ShRelation {
    pub fn is_zero_ring(&self) -> bool {
        self.p == 0
    }
}

pub fn sh_presentation_from_charpoly(cp: &CharPoly) -> ShRelation {
    let p = (1..=cp.degree()).rev().find(|&i| !cp.a(i).is_zero()).unwrap_or(0);
    ShRelation {
        p,
        coeffs: (0..=p).map(|i| cp.a(i)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use CoefficientField::Rationals as Q;

    fn int(k: i64) -> NovikovScalar {
        NovikovScalar::from_int(Q, k)
    }

    fn t() -> NovikovScalar {
        NovikovScalar::t(Q)
    }

    fn o1p1() -> LambdaMatrix {
        LambdaMatrix::new(Q, vec![vec![t(), int(-1)], vec![int(0), int(0)]]).unwrap()
    }

    fn jordan_block(s: usize) -> LambdaMatrix {
        let mut m = LambdaMatrix::zeros(Q, s);
        for i in 0..s - 1 {
            m.set(i, i + 1, int(1));
        }
        m
    }

    #[test]
    fn char_poly_examples() {
        let cp = char_poly(&o1p1());
        assert_eq!(cp.coeffs, vec![-&t(), int(0)]);
        let cp = char_poly(&LambdaMatrix::identity(Q, 3));
        assert_eq!(cp.coeffs, vec![int(-3), int(3), int(-1)]);
        assert!(satisfies_cayley_hamilton(&o1p1(), &char_poly(&o1p1())));
    }

    #[test]
    fn char_poly_with_rational_function_entries() {
        let one_plus_t = NovikovScalar::laurent(Q, [(BigRational::from_integer(1.into()), 0), (BigRational::from_integer(1.into()), 1)]);
        let inv = one_plus_t.invert().unwrap();
        let m = LambdaMatrix::new(
            Q,
            vec![
                vec![inv.clone(), t(), int(2)],
                vec![int(0), one_plus_t.clone(), NovikovScalar::monomial(Q, BigRational::from_integer(3.into()), -2)],
                vec![t(), int(-1), inv],
            ],
        )
        .unwrap();
        let cp = char_poly(&m);
        assert!(satisfies_cayley_hamilton(&m, &cp));
        // a_1 = -trace
        let trace = &(&m.get(0, 0).clone() + m.get(1, 1)) + m.get(2, 2);
        assert_eq!(cp.a(1), -&trace);
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(stabilization_index(&o1p1()), 1);
        assert_eq!(stabilization_index(&LambdaMatrix::identity(Q, 4)), 0);
        assert_eq!(stabilization_index(&jordan_block(3)), 3);
    }

    #[test]
    fn stabilized_kernel_examples() {
        let ker = stabilized_kernel(&o1p1());
        assert_eq!(ker.len(), 1);
        // proportional to (1, t)
        let v = &ker[0];
        let ratio = v[1].try_div(&v[0]).unwrap();
        assert_eq!(ratio, t());
        assert!(o1p1().apply(v).iter().all(NovikovScalar::is_zero));
        assert!(stabilized_kernel(&LambdaMatrix::identity(Q, 3)).is_empty());
        assert_eq!(stabilized_kernel(&jordan_block(4)).len(), 4);
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_zero_block_sizes(&LambdaMatrix::zeros(Q, 3)), vec![1, 1, 1]);
        assert_eq!(jordan_zero_block_sizes(&jordan_block(3)), vec![3]);
        assert_eq!(jordan_zero_block_sizes(&o1p1()), vec![1]);
        assert!(jordan_zero_block_sizes(&LambdaMatrix::identity(Q, 2)).is_empty());
        // blocks 2 + 1 and an invertible part
        let mut m = LambdaMatrix::zeros(Q, 4);
        m.set(0, 1, int(1));
        m.set(3, 3, t());
        assert_eq!(jordan_zero_block_sizes(&m), vec![2, 1]);
    }

    #[test]
    fn image_rank_examples() {
        assert_eq!(image_power_rank(&o1p1(), 1), 1);
        assert_eq!(image_power_rank(&o1p1(), 5), 1);
        assert_eq!(image_power_rank(&LambdaMatrix::identity(Q, 3), 7), 3);
        assert_eq!(image_power_rank(&jordan_block(3), 0), 3);
    }

    #[test]
    fn sh_relation_examples() {
        let rel = sh_presentation_from_charpoly(&char_poly(&o1p1()));
        assert_eq!(rel.p, 1);
        assert_eq!(rel.coeffs, vec![int(1), -&t()]);
        let rel = sh_presentation_from_charpoly(&char_poly(&jordan_block(4)));
        assert!(rel.is_zero_ring());
        assert_eq!(rel.coeffs, vec![int(1)]);
    }

    #[test]
    fn solve_round_trip() {
        let m = LambdaMatrix::new(Q, vec![vec![t(), int(1)], vec![int(2), int(-1)]]).unwrap();
        let b = vec![int(1), t()];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(jordan_block(2).solve(&b).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            LambdaMatrix::new(Q, vec![vec![int(1)], vec![int(1), int(2)]]),
            Err(Error::DimensionMismatch(_))
        ));
        let g = NovikovScalar::one(CoefficientField::Gf2);
        assert!(matches!(LambdaMatrix::new(Q, vec![vec![g]]), Err(Error::FieldMismatch(..))));
    }
}
