//! Intersection numbers on point blow-ups of rational surfaces and the
//! Riemann–Roch computation of the obstruction degree for `O(-1) -> P^1`.
//!
//! Only four facts about a point blow-up `R -> S` with exceptional curve `E`
//! are encoded: `pi^*D . pi^*D' = D . D'`, `E . pi^*D = 0`, `E . E = -1` and
//! `K_R = pi^*K_S + E`, together with `chi_top(R) = chi_top(S) + 1`.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

/// Divisor-class data of `S` blown up at `k` points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupSurfaceRing {
    pub base_rank: usize,
    pub base_form: Vec<Vec<i64>>,
    pub base_canonical: Vec<i64>,
    pub base_euler: i64,
    pub k: usize,
}

/// Integer coordinates: pulled-back base classes first, then `E_1, ..., E_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coeffs: vec![0; rank] }
    }

    pub fn scaled(&self, c: i64) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

pub fn blowup_ring(
    base_form: Vec<Vec<i64>>,
    base_canonical: Vec<i64>,
    base_euler: i64,
    k: usize,
) -> Result<BlowupSurfaceRing> {
    let r = base_form.len();
    if base_form.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch("intersection form must be square".into()));
    }
    for i in 0..r {
        for j in 0..i {
            if base_form[i][j] != base_form[j][i] {
                return Err(Error::DimensionMismatch("intersection form must be symmetric".into()));
            }
        }
    }
    if base_canonical.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "canonical class has {} coordinates, form has rank {r}",
            base_canonical.len()
        )));
    }
    Ok(BlowupSurfaceRing {
        base_rank: r,
        base_form,
        base_canonical,
        base_euler,
        k,
    })
}

impl BlowupSurfaceRing {
    /// `P^1 x P^1` with fibre classes `(1,0)`, `(0,1)`.
    pub fn p1xp1(k: usize) -> Self {
        blowup_ring(vec![vec![0, 1], vec![1, 0]], vec![-2, -2], 4, k).unwrap()
    }

    pub fn p2(k: usize) -> Self {
        blowup_ring(vec![vec![1]], vec![-3], 3, k).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.base_rank + self.k
    }

    pub fn euler(&self) -> i64 {
        self.base_euler + self.k as i64
    }

    /// Full intersection form `base_form + (-1) Id_k`.
    pub fn form(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut q = vec![vec![0; r]; r];
        for (i, row) in self.base_form.iter().enumerate() {
            q[i][..self.base_rank].copy_from_slice(row);
        }
        for e in 0..self.k {
            q[self.base_rank + e][self.base_rank + e] = -1;
        }
        q
    }

    /// `pi^*K_S + E_1 + ... + E_k`.
    pub fn canonical(&self) -> DivisorClass {
        let mut c = self.base_canonical.clone();
        c.extend(std::iter::repeat_n(1, self.k));
        DivisorClass::new(c)
    }

    /// `c_1 = -K`.
    pub fn c1(&self) -> DivisorClass {
        self.canonical().scaled(-1)
    }

    /// Pull-back of a base class, with zero exceptional part.
    pub fn pullback(&self, base: &[i64]) -> Result<DivisorClass> {
        if base.len() != self.base_rank {
            return Err(Error::DimensionMismatch(format!(
                "base class has {} coordinates, expected {}",
                base.len(),
                self.base_rank
            )));
        }
        let mut c = base.to_vec();
        c.extend(std::iter::repeat_n(0, self.k));
        Ok(DivisorClass::new(c))
    }

    pub fn exceptional(&self, e: usize) -> DivisorClass {
        let mut c = vec![0; self.rank()];
        c[self.base_rank + e] = 1;
        DivisorClass::new(c)
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
        let r = self.rank();
        if d1.coeffs.len() != r || d2.coeffs.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "classes of length {} and {} on a ring of rank {r}",
                d1.coeffs.len(),
                d2.coeffs.len()
            )));
        }
        let mut total = 0;
        for i in 0..self.base_rank {
            for j in 0..self.base_rank {
                total += d1.coeffs[i] * self.base_form[i][j] * d2.coeffs[j];
            }
        }
        for e in self.base_rank..r {
            total -= d1.coeffs[e] * d2.coeffs[e];
        }
        Ok(total)
    }

    /// `chi(O(z)) = int ch(O(z)) td(T) = chi_top/12 + c1^2/12 + c1.z/2 + z^2/2`.
    pub fn grr_chi(&self, z: &DivisorClass) -> Result<BigRational> {
        let ints = self.grr_integrals(z)?;
        Ok(ints.chi())
    }

    pub fn grr_integrals(&self, z: &DivisorClass) -> Result<GrrIntegrals> {
        let c1 = self.c1();
        Ok(GrrIntegrals {
            c2: self.euler(),
            c1_squared: self.intersect(&c1, &c1)?,
            c1_z: self.intersect(&c1, z)?,
            z_squared: self.intersect(z, z)?,
        })
    }
}

/// The four integrals entering Riemann–Roch on a surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrrIntegrals {
    pub c2: i64,
    pub c1_squared: i64,
    pub c1_z: i64,
    pub z_squared: i64,
}

impl GrrIntegrals {
    pub fn chi(&self) -> BigRational {
        let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
        q(self.c2, 12) + q(self.c1_squared, 12) + q(self.c1_z, 2) + q(self.z_squared, 2)
    }
}

/// The universal curve over the compactified section space for `O(-1) -> P^1`
/// (`P^1 x P^1` blown up at two points) with `z = pi^* c_1(O(-1,-1))`.
pub fn o11_universal_curve() -> (BlowupSurfaceRing, DivisorClass) {
    let ring = BlowupSurfaceRing::p1xp1(2);
    let z = ring.pullback(&[-1, -1]).unwrap();
    (ring, z)
}

/// `deg(Obs) = 1 - chi`, since `R^0 pi_*` of `O(-1,-1)` vanishes.
pub fn obstruction_degree_o11() -> i64 {
    let (ring, z) = o11_universal_curve();
    obstruction_degree(&ring, &z)
}

pub fn obstruction_degree(ring: &BlowupSurfaceRing, z: &DivisorClass) -> i64 {
    let chi = ring.grr_chi(z).expect("class belongs to ring");
    assert!(chi.is_integer(), "Riemann-Roch produced a non-integer {chi}");
    1 - chi.to_integer().to_i64().expect("small integer")
}
