//! Torus-localization oracle for the degree-one section counts `A_a`.
//!
//! The torus `(C^*)^{m+1}` acts on `P^m` with weights `alpha_0, ..., alpha_m`.
//! The fixed stable sections meeting `P^a` over `0` and `P^{n-a-1}` over
//! `infinity` come in pairs `U_{1ij}`, `U_{ij0}` indexed by a fixed point
//! `q_i` of `P^a` (`0 <= i <= a`) and a fixed point `q_j` of `P^{n-a-1}`
//! (`m-n+a+1 <= j <= m`). Summing the inverse equivariant Euler classes of
//! their virtual normal bundles gives a rational number which must not depend
//! on the weights; rescaled by `-n` it equals `A_a`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Torus weights `alpha_0, ..., alpha_m`, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    alphas: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(alphas: Vec<BigRational>) -> Result<Self> {
        for i in 0..alphas.len() {
            for j in (i + 1)..alphas.len() {
                if alphas[i] == alphas[j] {
                    return Err(Error::CoincidentWeights(i, j));
                }
            }
        }
        Ok(WeightVector { alphas })
    }

    pub fn from_ints(alphas: &[i64]) -> Result<Self> {
        Self::new(
            alphas
                .iter()
                .map(|&a| BigRational::from_integer(a.into()))
                .collect(),
        )
    }

    pub fn alphas(&self) -> &[BigRational] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Reorders the weights: `result[k] = self[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightVector {
            alphas: perm.iter().map(|&k| self.alphas[k].clone()).collect(),
        }
    }

    pub fn translated(&self, c: &BigRational) -> Self {
        WeightVector {
            alphas: self.alphas.iter().map(|a| a + c).collect(),
        }
    }
}

impl Serialize for WeightVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.alphas.iter().map(crate::field::fmt_rational))
    }
}

/// Which of the two fixed stable sections of a pair: the node sits over
/// infinity (`U_{1ij}`, node at `p_{1i}`) or over zero (`U_{ij0}`, node at
/// `p_{0j}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeSide {
    NodeAtInfinity,
    NodeAtZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointGraph {
    pub i: usize,
    pub j: usize,
    pub side: NodeSide,
}

/// The equivariant weights entering one fixed graph, before any cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphWeights {
    /// Smoothing the node: `alpha_i - alpha_j` or its negative.
    pub node_smoothing: BigRational,
    /// Moving the marked points inside `P^a` and `P^{n-a-1}`.
    pub marked_point_moves: Vec<BigRational>,
    /// `O(-1,-n)` at the node: `-n alpha_i` or `-n alpha_j`.
    pub obstruction_at_node: BigRational,
    /// `H^1(O(-n))` on the bubble: `A alpha_i + B alpha_j` with `A + B = n`.
    pub obstruction_h1: Vec<BigRational>,
}

impl GraphWeights {
    /// `e(Ob^mov) / e(Def^mov)`.
    pub fn contribution(&self) -> BigRational {
        let num = self
            .obstruction_h1
            .iter()
            .fold(self.obstruction_at_node.clone(), |acc, w| acc * w);
        let den = self
            .marked_point_moves
            .iter()
            .fold(self.node_smoothing.clone(), |acc, w| acc * w);
        num / den
    }
}

/// Index sets `{0..=a}` and `{m-n+a+1..=m}`.
fn index_sets(m: u32, n: u32, a: u32) -> (Vec<usize>, Vec<usize>) {
    let is = (0..=a as usize).collect();
    let js = ((m - n + a + 1) as usize..=m as usize).collect();
    (is, js)
}

fn check_params(m: u32, n: u32, a: u32, w: &WeightVector) -> Result<()> {
    if !(n >= 1 && n < 1 + m) {
        return Err(Error::OutOfRange(format!(
            "localization needs 1 <= n < 1+m (P^a and P^(n-a-1) must be disjoint), got (m, n) = ({m}, {n})"
        )));
    }
    if a >= n {
        return Err(Error::OutOfRange(format!("a = {a} must satisfy 0 <= a <= n-1 = {}", n - 1)));
    }
    if w.len() != m as usize + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected {} weights for P^{m}, got {}",
            m + 1,
            w.len()
        )));
    }
    Ok(())
}

/// The uncancelled weights of one fixed graph.
pub fn graph_weights(graph: FixedPointGraph, m: u32, n: u32, a: u32, w: &WeightVector) -> Result<GraphWeights> {
    check_params(m, n, a, w)?;
    let (is, js) = index_sets(m, n, a);
    let (i, j) = (graph.i, graph.j);
    if !is.contains(&i) || !js.contains(&j) {
        return Err(Error::OutOfRange(format!("graph indices (i, j) = ({i}, {j})")));
    }
    let al = w.alphas();
    let nn = BigRational::from_integer(n.into());
    let moves = is
        .iter()
        .filter(|&&big_i| big_i != i)
        .map(|&big_i| &al[i] - &al[big_i])
        .chain(js.iter().filter(|&&big_j| big_j != j).map(|&big_j| &al[j] - &al[big_j]))
        .collect();
    let h1 = (1..n)
        .map(|big_a| {
            let big_b = n - big_a;
            BigRational::from_integer(big_a.into()) * &al[i]
                + BigRational::from_integer(big_b.into()) * &al[j]
        })
        .collect();
    let (node_smoothing, obstruction_at_node) = match graph.side {
        NodeSide::NodeAtInfinity => (&al[i] - &al[j], -&nn * &al[i]),
        NodeSide::NodeAtZero => (&al[j] - &al[i], -&nn * &al[j]),
    };
    Ok(GraphWeights {
        node_smoothing,
        marked_point_moves: moves,
        obstruction_at_node,
        obstruction_h1: h1,
    })
}

/// Merged contribution of `U_{1ij}` and `U_{ij0}`, with the common
/// `(alpha_i - alpha_j)` cancelled:
/// `-n prod (A alpha_i + B alpha_j) / (prod_{I != i} (alpha_i - alpha_I) prod_{J != j} (alpha_j - alpha_J))`.
pub fn graph_contribution_pair(i: usize, j: usize, m: u32, n: u32, a: u32, w: &WeightVector) -> Result<BigRational> {
    check_params(m, n, a, w)?;
    let (is, js) = index_sets(m, n, a);
    if !is.contains(&i) || !js.contains(&j) {
        return Err(Error::OutOfRange(format!("graph indices (i, j) = ({i}, {j})")));
    }
    let al = w.alphas();
    let mut num = BigRational::from_integer(-BigInt::from(n));
    for big_a in 1..n {
        let big_b = n - big_a;
        num *= BigRational::from_integer(big_a.into()) * &al[i]
            + BigRational::from_integer(big_b.into()) * &al[j];
    }
    let mut den = BigRational::one();
    for &big_i in is.iter().filter(|&&k| k != i) {
        den *= &al[i] - &al[big_i];
    }
    for &big_j in js.iter().filter(|&&k| k != j) {
        den *= &al[j] - &al[big_j];
    }
    Ok(num / den)
}

/// Fixed-point sum rescaled by `-n`; equals `A_a` for every choice of
/// distinct weights.
pub fn localize_aa(m: u32, n: u32, a: u32, w: &WeightVector) -> Result<BigRational> {
    check_params(m, n, a, w)?;
    let (is, js) = index_sets(m, n, a);
    let mut total = BigRational::zero();
    for &i in &is {
        for &j in &js {
            total += graph_contribution_pair(i, j, m, n, a, w)?;
        }
    }
    Ok(total * BigRational::from_integer(-BigInt::from(n)))
}

/// The two graph contributions `(Gamma_10, Gamma_01)` for `O(-1) -> P^1`.
pub fn localize_o1p1_graphs(a0: &BigRational, a1: &BigRational) -> Result<(BigRational, BigRational)> {
    if a0 == a1 {
        return Err(Error::CoincidentWeights(0, 1));
    }
    let g10 = -a0 / (a0 - a1);
    let g01 = -a1 / (a1 - a0);
    Ok((g10, g01))
}

/// `m + 1` pairwise-distinct weights from a seeded generator: a shuffle of
/// `0..=m`, each shifted by a random small-denominator offset, redrawn on
/// collision.
pub fn sample_weights(m: u32, seed: u64) -> WeightVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base: Vec<i64> = (0..=m as i64).collect();
    base.shuffle(&mut rng);
    loop {
        let alphas: Vec<BigRational> = base
            .iter()
            .map(|&b| {
                let den: i64 = rng.gen_range(1..=7);
                let num: i64 = rng.gen_range(-20..=20);
                BigRational::from_integer(b.into()) + BigRational::new(num.into(), den.into())
            })
            .collect();
        let distinct: HashSet<&BigRational> = alphas.iter().collect();
        if distinct.len() == alphas.len() {
            return WeightVector { alphas };
        }
    }
}

/// Result of evaluating the oracle at several weight vectors.
#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub weights: Vec<WeightVector>,
    #[serde(serialize_with = "serialize_rationals")]
    pub values: Vec<BigRational>,
    /// All values coincide.
    pub weight_independent: bool,
    /// The common value is an integer.
    pub integral: bool,
}

fn serialize_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::field::fmt_rational))
}

impl LocalizationReport {
    pub fn value(&self) -> Option<&BigRational> {
        if self.weight_independent {
            self.values.first()
        } else {
            None
        }
    }
}

/// Runs [`localize_aa`] at `trials` weight vectors drawn from seeds
/// `seed, seed + 1, ...`.
pub fn localize_trials(m: u32, n: u32, a: u32, trials: u32, seed: u64) -> Result<LocalizationReport> {
    let weights: Vec<WeightVector> = (0..trials.max(1) as u64)
        .map(|k| sample_weights(m, seed.wrapping_add(k)))
        .collect();
    let values = weights
        .iter()
        .map(|w| localize_aa(m, n, a, w))
        .collect::<Result<Vec<_>>>()?;
    let weight_independent = values.windows(2).all(|p| p[0] == p[1]);
    let integral = values.iter().all(|v| v.is_integer());
    Ok(LocalizationReport {
        m,
        n,
        a,
        weights,
        values,
        weight_independent,
        integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn o1p1_pair_is_minus_one() {
        for w in [[0, 1], [3, -7], [5, 2]] {
            let w = WeightVector::from_ints(&w).unwrap();
            assert_eq!(graph_contribution_pair(0, 1, 1, 1, 0, &w).unwrap(), r(-1, 1));
            assert_eq!(localize_aa(1, 1, 0, &w).unwrap(), r(1, 1));
        }
    }

    #[test]
    fn single_pair_for_n_equal_one() {
        let w = WeightVector::from_ints(&[0, 1, 2]).unwrap();
        assert_eq!(graph_contribution_pair(0, 2, 2, 1, 0, &w).unwrap(), r(-1, 1));
    }

    #[test]
    fn merged_pair_equals_sum_of_uncancelled_graphs() {
        let w = sample_weights(6, 11);
        for n in 1..=4u32 {
            for a in 0..n {
                let (is, js) = index_sets(6, n, a);
                for &i in &is {
                    for &j in &js {
                        let inf = graph_weights(FixedPointGraph { i, j, side: NodeSide::NodeAtInfinity }, 6, n, a, &w).unwrap();
                        let zero = graph_weights(FixedPointGraph { i, j, side: NodeSide::NodeAtZero }, 6, n, a, &w).unwrap();
                        assert_eq!(inf.node_smoothing, -zero.node_smoothing.clone());
                        assert_eq!(inf.obstruction_h1.len(), n as usize - 1);
                        assert_eq!(
                            inf.contribution() + zero.contribution(),
                            graph_contribution_pair(i, j, 6, n, a, &w).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn o1p1_graphs() {
        let (g10, g01) = localize_o1p1_graphs(&r(0, 1), &r(1, 1)).unwrap();
        assert_eq!((g10.clone(), g01.clone()), (r(0, 1), r(-1, 1)));
        let (g10, g01) = localize_o1p1_graphs(&r(2, 1), &r(5, 1)).unwrap();
        assert_eq!((g10.clone(), g01.clone()), (r(2, 3), r(-5, 3)));
        assert_eq!(g10.clone() + g01.clone(), r(-1, 1));
        let (s10, s01) = localize_o1p1_graphs(&r(5, 1), &r(2, 1)).unwrap();
        assert_eq!((s10, s01), (g01, g10));
        assert_eq!(localize_o1p1_graphs(&r(1, 2), &r(1, 2)), Err(Error::CoincidentWeights(0, 1)));
    }

    #[test]
    fn small_cases() {
        let w = WeightVector::from_ints(&[0, 1, 2, 3]).unwrap();
        assert_eq!(localize_aa(3, 2, 1, &w).unwrap(), r(4, 1));
        for seed in [1, 99] {
            let w = sample_weights(5, seed);
            assert_eq!(localize_aa(5, 3, 1, &w).unwrap(), r(45, 1));
        }
    }

    #[test]
    fn parameter_errors() {
        let w = WeightVector::from_ints(&[0, 1, 2]).unwrap();
        assert!(matches!(localize_aa(2, 3, 0, &w), Err(Error::OutOfRange(_))));
        assert!(matches!(localize_aa(2, 2, 2, &w), Err(Error::OutOfRange(_))));
        assert!(matches!(localize_aa(3, 2, 0, &w), Err(Error::DimensionMismatch(_))));
        assert_eq!(WeightVector::from_ints(&[0, 4, 4]), Err(Error::CoincidentWeights(1, 2)));
    }

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        assert_eq!(sample_weights(5, 42), sample_weights(5, 42));
        assert_eq!(sample_weights(1, 7).len(), 2);
        for m in 1..=8 {
            for seed in 0..100 {
                let w = sample_weights(m, seed);
                assert_eq!(w.len(), m as usize + 1);
                assert!(WeightVector::new(w.alphas().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn symmetries_of_the_full_sum() {
        let (m, n, a) = (6u32, 4u32, 1u32);
        let w = sample_weights(m, 3);
        let base = localize_aa(m, n, a, &w).unwrap();
        // swap inside {0..=a} and inside {m-n+a+1..=m}
        let mut perm: Vec<usize> = (0..=m as usize).collect();
        perm.swap(0, 1);
        perm.swap(4, 6);
        assert_eq!(localize_aa(m, n, a, &w.permuted(&perm)).unwrap(), base);
        assert_eq!(localize_aa(m, n, a, &w.translated(&r(17, 5))).unwrap(), base);
    }

    #[test]
    fn trials_report() {
        let rep = localize_trials(4, 2, 1, 3, 0).unwrap();
        assert!(rep.weight_independent && rep.integral);
        assert_eq!(rep.value(), Some(&r(4, 1)));
        assert_eq!(rep.values.len(), 3);
    }
}
