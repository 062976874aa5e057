//! From `(m, n)` to symplectic cohomology of the total space of
//! `O(-n) -> P^m`.
//!
//! The continuation matrix `r` is quantum multiplication by `c_1(L)` in the
//! classical basis `omega^m, ..., omega, 1`. Constant sections put `-n` on the
//! superdiagonal and degree-one sections put `A_a t` in rows `N+a`, columns
//! `1+a`. Symplectic cohomology is `QH / ker r^k` for `k` large, whose
//! presentation is read off the characteristic polynomial of `r`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::gw;
use crate::linalg::{self, BasisLabel, CharPoly, LambdaMatrix};
use crate::novikov::{GradingContext, NovikovScalar};
use crate::quantum::{change_generator, Generator, RingPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegimeKind {
    /// `1 <= n < 1+m`
    Monotone,
    /// `n = 1+m`
    CalabiYau,
    /// `2+m <= n <= 2m`
    Unsupported,
    /// `n >= 1+2m`
    LargeMinChern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// Every entry of `r` is determined by constant and degree-one sections.
    pub exact_mode: bool,
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeKind::Monotone => "monotone",
            RegimeKind::CalabiYau => "calabi-yau",
            RegimeKind::Unsupported => "unsupported",
            RegimeKind::LargeMinChern => "large-min-chern",
        };
        f.write_str(s)
    }
}

/// `N = 1 + m - n`.
pub fn min_chern(m: u32, n: u32) -> i64 {
    1 + m as i64 - n as i64
}

fn check_mn(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::OutOfRange(format!("need m >= 1 and n >= 1, got (m, n) = ({m}, {n})")));
    }
    Ok(())
}

pub fn classify_regime(m: u32, n: u32) -> Result<Regime> {
    check_mn(m, n)?;
    let big_n = min_chern(m, n);
    let kind = if n < 1 + m {
        RegimeKind::Monotone
    } else if n == 1 + m {
        RegimeKind::CalabiYau
    } else if n <= 2 * m {
        RegimeKind::Unsupported
    } else {
        RegimeKind::LargeMinChern
    };
    let exact_mode = match kind {
        RegimeKind::Monotone => 2 * big_n > m as i64,
        RegimeKind::CalabiYau | RegimeKind::LargeMinChern => true,
        RegimeKind::Unsupported => false,
    };
    Ok(Regime { kind, exact_mode })
}

fn supported(m: u32, n: u32) -> Result<Regime> {
    let regime = classify_regime(m, n)?;
    if regime.kind == RegimeKind::Unsupported {
        return Err(Error::Unsupported { m, n });
    }
    Ok(regime)
}

/// 1-indexed positions `(dN + a, 1 + a)` with `d >= 2` inside the matrix
/// and above the zero last row. Empty unless `1 + m/2 <= n < 1 + m`.
pub fn higher_degree_positions(m: u32, n: u32) -> BTreeSet<(usize, usize)> {
    let big_n = min_chern(m, n);
    let mut out = BTreeSet::new();
    if big_n < 1 {
        return out;
    }
    let (m, big_n) = (m as usize, big_n as usize);
    let mut d = 2;
    while d * big_n <= m {
        for a in 0..=m - d * big_n {
            out.insert((d * big_n + a, 1 + a));
        }
        d += 1;
    }
    out
}

fn int_times_t(field: CoefficientField, k: BigInt, d: i64) -> NovikovScalar {
    NovikovScalar::monomial(field, BigRational::from_integer(k), d)
}

/// The matrix of quantum multiplication by `c_1(L)` in the basis
/// `omega^m, ..., omega, 1`.
///
/// Higher-degree entries are flagged in `unknown` and held at zero. Over
/// GF(2) with `n` even they are not flagged: every entry is a multiple of `n`.
pub fn build_r_matrix(m: u32, n: u32, field: CoefficientField) -> Result<LambdaMatrix> {
    let regime = supported(m, n)?;
    let s = m as usize + 1;
    let big_n = min_chern(m, n);
    let mut r = LambdaMatrix::zeros(field, s)
        .with_basis(BasisLabel::OmegaPowers)
        .with_grading(GradingContext::new(big_n));
    let minus_n = NovikovScalar::from_int(field, -(n as i64));
    for i in 0..s - 1 {
        r.set(i, i + 1, minus_n.clone());
    }
    if regime.kind == RegimeKind::Monotone {
        let nn = big_n as usize;
        for a in 0..n {
            let value = gw::subdiagonal_entry(m, n, a, field)?;
            r.set(nn + a as usize - 1, a as usize, int_times_t(field, value, 1));
        }
        if !minus_n.is_zero() {
            r.unknown = higher_degree_positions(m, n);
        }
    }
    Ok(r)
}

/// The matrix of quantum multiplication by `omega` in the basis
/// `omega^m, ..., omega, 1`, assembled from three-point invariants.
pub fn build_omega_matrix(m: u32, n: u32, field: CoefficientField) -> Result<LambdaMatrix> {
    let regime = supported(m, n)?;
    let s = m as usize + 1;
    let big_n = min_chern(m, n);
    let mut w = LambdaMatrix::zeros(field, s)
        .with_basis(BasisLabel::OmegaPowers)
        .with_grading(GradingContext::new(big_n));
    for i in 0..s - 1 {
        w.set(i, i + 1, NovikovScalar::one(field));
    }
    if regime.kind == RegimeKind::Monotone {
        for a in 0..n {
            let value = gw::three_point_degree_one(m, n, a, field)?;
            w.set(big_n as usize + a as usize - 1, a as usize, int_times_t(field, value, 1));
        }
        w.unknown = higher_degree_positions(m, n);
    }
    Ok(w)
}

/// `(c, l)` terms of `omega * omega^j - omega^{j+1}` read off a complete
/// omega-multiplication matrix.
pub fn classical_corrections(w: &LambdaMatrix, j: usize) -> Vec<(NovikovScalar, usize)> {
    let s = w.size();
    let col = s - 1 - j;
    (0..s)
        .filter(|&i| i + 1 != col)
        .filter(|&i| !w.get(i, col).is_zero())
        .map(|i| (w.get(i, col).clone(), s - 1 - i))
        .collect()
}

/// `a_N = (-1)^N n^{N-1} (sum_a A_a) t = (-1)^N n^{1+m} t`.
pub fn leading_coefficient_lemma(m: u32, n: u32, field: CoefficientField) -> Result<NovikovScalar> {
    let big_n = min_chern(m, n);
    if big_n < 1 || n > m {
        return Err(Error::OutOfRange(format!("a_N is only defined for 1 <= n < 1+m, got ({m}, {n})")));
    }
    let sum_a: BigInt = (0..n)
        .map(|a| gw::subdiagonal_entry(m, n, a, CoefficientField::Rationals))
        .sum::<Result<BigInt>>()?;
    let sign: BigInt = if big_n % 2 == 0 { 1.into() } else { (-1).into() };
    let value = sign * num_traits::pow(BigInt::from(n), (big_n - 1) as usize) * sum_a;
    Ok(int_times_t(field, value, 1))
}

/// Outcome of one named consistency check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Diagnostic {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Diagnostic {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// What is known about symplectic cohomology when higher-degree entries are
/// undetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFacts {
    pub nonzero: bool,
    pub rank_multiple_of: usize,
    pub rank_candidates: Vec<usize>,
    pub a_n: NovikovScalar,
    pub unknown_positions: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShPresentation {
    Ring(RingPresentation),
    Zero { reason: String },
    Partial(PartialFacts),
}

impl ShPresentation {
    pub fn is_zero(&self) -> bool {
        matches!(self, ShPresentation::Zero { .. })
    }

    pub fn ring(&self) -> Option<&RingPresentation> {
        match self {
            ShPresentation::Ring(p) => Some(p),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            ShPresentation::Ring(p) => p.render(),
            ShPresentation::Zero { .. } => "0".into(),
            ShPresentation::Partial(f) => format!(
                "nonzero, rank a multiple of {} in {:?}",
                f.rank_multiple_of, f.rank_candidates
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShRank {
    Exact(usize),
    MultipleOf { step: usize, candidates: Vec<usize> },
}

impl ShRank {
    pub fn value(&self) -> Option<usize> {
        match self {
            ShRank::Exact(k) => Some(*k),
            ShRank::MultipleOf { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShResult {
    pub m: u32,
    pub n: u32,
    pub min_chern: i64,
    pub regime: Regime,
    pub field: CoefficientField,
    pub qh: RingPresentation,
    pub sh: ShPresentation,
    pub sh_rank: ShRank,
    pub r_matrix: LambdaMatrix,
    /// `a_1, ..., a_{m+1}` of `r`; `None` where undetermined.
    pub char_poly: Vec<Option<NovikovScalar>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ShResult {
    pub fn diagnostic(&self, name: &str) -> Option<&Diagnostic> {
        self.diagnostics.iter().find(|d| d.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.diagnostics.iter().all(|d| d.pass)
    }

    pub fn to_json(&self) -> Value {
        let r = &self.r_matrix;
        let entries: Vec<Vec<String>> = (0..r.size())
            .map(|i| {
                (0..r.size())
                    .map(|j| {
                        if r.unknown.contains(&(i + 1, j + 1)) {
                            "?".to_string()
                        } else {
                            r.get(i, j).to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let sh = match &self.sh {
            ShPresentation::Ring(p) => {
                let mut v = serde_json::to_value(p).expect("serializable");
                v["kind"] = json!("ring");
                v
            }
            ShPresentation::Zero { reason } => json!({"kind": "zero", "reason": reason}),
            ShPresentation::Partial(f) => json!({
                "kind": "partial",
                "nonzero": f.nonzero,
                "rank_multiple_of": f.rank_multiple_of,
                "rank_candidates": f.rank_candidates,
                "a_N": f.a_n.to_string(),
                "unknown_positions": f.unknown_positions,
            }),
        };
        let sh_rank = match &self.sh_rank {
            ShRank::Exact(k) => json!(k),
            ShRank::MultipleOf { step, .. } => json!(format!("positive multiple of {step}")),
        };
        json!({
            "m": self.m,
            "n": self.n,
            "N": self.min_chern,
            "regime": {"kind": self.regime.kind.to_string(), "exact_mode": self.regime.exact_mode},
            "field": self.field.name(),
            "qh": self.qh,
            "sh": sh,
            "sh_rank": sh_rank,
            "r_matrix": entries,
            "r_unknown": r.unknown.iter().collect::<Vec<_>>(),
            "char_poly": self.char_poly.iter().map(|a| a.as_ref().map(|x| x.to_string())).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "O(-{}) -> P^{}   N = {}   regime = {}{}   field = {}\n",
            self.n,
            self.m,
            self.min_chern,
            self.regime.kind,
            if self.regime.exact_mode { " (exact)" } else { " (partial)" },
            self.field
        ));
        out.push_str(&format!("QH = {}\n", self.qh.render()));
        out.push_str(&format!("SH = {}\n", self.sh.render()));
        if let ShPresentation::Zero { reason } = &self.sh {
            out.push_str(&format!("     ({reason})\n"));
        }
        match &self.sh_rank {
            ShRank::Exact(k) => out.push_str(&format!("rank SH = {k}\n")),
            ShRank::MultipleOf { step, candidates } => {
                out.push_str(&format!("rank SH = positive multiple of {step}, one of {candidates:?}\n"))
            }
        }
        out.push_str("r =\n");
        let json = self.to_json();
        for row in json["r_matrix"].as_array().expect("rows") {
            let cells: Vec<&str> = row.as_array().expect("row").iter().map(|c| c.as_str().unwrap_or("")).collect();
            out.push_str(&format!("  [{}]\n", cells.join(", ")));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("[{}] {}: {}\n", if d.pass { "ok" } else { "FAIL" }, d.name, d.detail));
        }
        out
    }
}

pub fn compute_sh(m: u32, n: u32, field: CoefficientField) -> Result<ShResult> {
    compute_sh_with_seed(m, n, field, 0)
}

/// As [`compute_sh`]; `seed` drives the random fills used to test partial
/// mode claims against undetermined entries.
pub fn compute_sh_with_seed(m: u32, n: u32, field: CoefficientField, seed: u64) -> Result<ShResult> {
    let regime = supported(m, n)?;
    let grading = GradingContext::new(min_chern(m, n));
    let r = build_r_matrix(m, n, field)?;
    let w = build_omega_matrix(m, n, field)?;
    let mut diagnostics = Vec::new();

    let homogeneity = r.homogeneity_violations();
    diagnostics.push(Diagnostic::new(
        "r_homogeneity",
        homogeneity.is_empty(),
        if homogeneity.is_empty() {
            "every nonzero entry (i, j) is c*t^d with N d = i - j + 1".to_string()
        } else {
            format!("inhomogeneous entries at {homogeneity:?}")
        },
    ));

    let qh = qh_presentation(m, n, &w)?;
    let mut result = if r.is_complete() {
        exact_sh(m, n, field, regime, r, &w, qh, &mut diagnostics)?
    } else {
        partial_sh(m, n, field, regime, r, qh, seed, &mut diagnostics)?
    };
    result.qh.grading = Some(grading);
    if result.qh.complete() {
        let homogeneous = result.qh.is_homogeneous();
        result.diagnostics.push(Diagnostic::new(
            "qh_homogeneity",
            homogeneous,
            "relation homogeneous of degree 2(m+1) with |omega| = 2, |t| = 2N",
        ));
    }
    Ok(result)
}

/// `Lambda[omega] / (det(lambda - W))` where `W` is omega-multiplication.
fn qh_presentation(m: u32, n: u32, w: &LambdaMatrix) -> Result<RingPresentation> {
    let cp = linalg::char_poly(w);
    let s = m as usize + 1;
    let desc: Vec<NovikovScalar> = (0..=s).map(|i| cp.a(i)).collect();
    let mut pres = RingPresentation::monic(Generator::OmegaQ, &desc)?.with_grading(GradingContext::new(min_chern(m, n)));
    if !w.is_complete() {
        pres = pres.with_unknown(undetermined_coefficients(m, n).into_iter().map(|i| s - i).collect());
    }
    Ok(pres)
}

/// Indices `i = dN`, `d >= 2`, of char-poly coefficients that involve
/// higher-degree entries.
fn undetermined_coefficients(m: u32, n: u32) -> Vec<usize> {
    let big_n = min_chern(m, n);
    if big_n < 1 || higher_degree_positions(m, n).is_empty() {
        return Vec::new();
    }
    let big_n = big_n as usize;
    (2..).map(|d| d * big_n).take_while(|&i| i <= m as usize + 1).collect()
}

fn zero_reason(regime: Regime, field: CoefficientField, n: u32) -> String {
    match regime.kind {
        RegimeKind::CalabiYau => "c1(TM) = 0: r has only the superdiagonal of -n and is nilpotent".into(),
        RegimeKind::LargeMinChern => "|N| >= m+1: r has only the superdiagonal of -n and is nilpotent".into(),
        _ if !field.is_unit_int(n as i64) => format!("-{n} = 0 in {field}: r is the zero matrix"),
        _ => "c1(L) is nilpotent in QH".into(),
    }
}

fn charpoly_shape(cp: &CharPoly, big_n: i64) -> (bool, String) {
    let mut bad = Vec::new();
    for i in 1..=cp.degree() {
        let a = cp.a(i);
        if a.is_zero() {
            continue;
        }
        let ok = big_n >= 1
            && i as i64 % big_n == 0
            && matches!(a.as_monomial(), Some((_, d)) if d == i as i64 / big_n);
        if !ok {
            bad.push(i);
        }
    }
    let detail = if bad.is_empty() {
        "a_i = 0 unless N | i, and a_i is a multiple of t^(i/N)".to_string()
    } else {
        format!("unexpected coefficients a_i at i in {bad:?}")
    };
    (bad.is_empty(), detail)
}

#[allow(clippy::too_many_arguments)]
fn exact_sh(
    m: u32,
    n: u32,
    field: CoefficientField,
    regime: Regime,
    r: LambdaMatrix,
    w: &LambdaMatrix,
    qh: RingPresentation,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<ShResult> {
    let s = m as usize + 1;
    let big_n = min_chern(m, n);
    let cp = linalg::char_poly(&r);
    let ch = linalg::satisfies_cayley_hamilton(&r, &cp);
    diagnostics.push(Diagnostic::new("cayley_hamilton", ch, "char_poly(r) evaluated at r is zero"));
    let (shape_ok, shape) = charpoly_shape(&cp, big_n);
    diagnostics.push(Diagnostic::new("charpoly_homogeneity", shape_ok, shape));
    if big_n >= 1 && big_n as usize <= s {
        let lemma = leading_coefficient_lemma(m, n, field)?;
        let got = cp.a(big_n as usize);
        diagnostics.push(Diagnostic::new(
            "a_N_lemma",
            got == lemma,
            format!("a_N = {got}, (-1)^N n^(N-1) (sum A_a) t = {lemma}"),
        ));
    }

    let rel = linalg::sh_presentation_from_charpoly(&cp);
    let p = rel.p;
    let stab = linalg::stabilization_index(&r);
    let blocks = linalg::jordan_zero_block_sizes(&r);
    let kernel_dim = linalg::stabilized_kernel(&r).len();
    let image_rank = linalg::image_power_rank(&r, stab.max(s));
    diagnostics.push(Diagnostic::new(
        "kernel_complement",
        kernel_dim + image_rank == s && image_rank == p,
        format!("dim ker r^k = {kernel_dim}, rank r^k = {image_rank}, p = {p}"),
    ));
    if field.is_unit_int(n as i64) {
        // the superdiagonal of -n makes 1 a cyclic vector for r
        diagnostics.push(Diagnostic::new(
            "stabilization_index",
            stab == s - p,
            format!("ker r^k stabilizes at k = {stab}; m+1-p = {}", s - p),
        ));
        diagnostics.push(Diagnostic::new(
            "single_zero_jordan_block",
            blocks == vec![s - p],
            format!("zero Jordan blocks {blocks:?}, expected [{}]", s - p),
        ));
        let c_pres = RingPresentation::monic(Generator::CQ, &(0..=s).map(|i| cp.a(i)).collect::<Vec<_>>())?;
        let converted = change_generator(&c_pres, n)?;
        diagnostics.push(Diagnostic::new(
            "qh_change_generator",
            converted.terms() == qh.terms(),
            format!("c = -n omega turns {} into {}", c_pres.render(), converted.render()),
        ));
        let c1 = qh.generator_power(1)?.scaled(&NovikovScalar::from_int(field, -(n as i64)));
        let basis = qh.classical_power_basis(|j| classical_corrections(w, j));
        let matches = match basis {
            Ok(b) => qh.multiplication_matrix_in_basis(&c1, &b)?.same_entries(&r),
            Err(_) => false,
        };
        diagnostics.push(Diagnostic::new(
            "multiplication_matrix_equals_r",
            matches,
            "c1(L) * in the classical basis omega^m, ..., 1 of QH equals r",
        ));
    }

    let (sh, sh_rank) = if p == 0 {
        (
            ShPresentation::Zero {
                reason: zero_reason(regime, field, n),
            },
            0,
        )
    } else {
        let c_sh = RingPresentation::monic(Generator::CQ, &rel.coeffs)?;
        let pres = match change_generator(&c_sh, n) {
            Ok(w) => w,
            Err(_) => c_sh,
        };
        (ShPresentation::Ring(pres.with_grading(GradingContext::new(big_n))), p)
    };

    let rc = rank_constraints(m, n, sh_rank);
    diagnostics.push(Diagnostic::new(
        "rank_constraints",
        rc,
        format!("rank SH = {sh_rank} < m+1 = {s} and a multiple of |N| = {}", big_n.abs()),
    ));

    let mut result = ShResult {
        m,
        n,
        min_chern: big_n,
        regime,
        field,
        qh,
        sh,
        sh_rank: ShRank::Exact(sh_rank),
        r_matrix: r,
        char_poly: cp.coeffs.iter().cloned().map(Some).collect(),
        diagnostics: Vec::new(),
    };
    let nil = vanishing_nilpotency(&result)?;
    diagnostics.push(Diagnostic::new(
        "nilpotency_iff_vanishing",
        nil == (sh_rank == 0),
        format!("c1(L) nilpotent in QH: {nil}; SH = 0: {}", sh_rank == 0),
    ));
    if kodaira_threshold(m, n) {
        let ordinary = result.qh.terms().len() == 1;
        diagnostics.push(Diagnostic::new(
            "kodaira_threshold",
            ordinary && sh_rank == 0,
            "n > 2m: QH is the ordinary ring and SH = 0",
        ));
    }
    result.diagnostics = std::mem::take(diagnostics);
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn partial_sh(
    m: u32,
    n: u32,
    field: CoefficientField,
    regime: Regime,
    r: LambdaMatrix,
    qh: RingPresentation,
    seed: u64,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<ShResult> {
    let s = m as usize + 1;
    let big_n = min_chern(m, n);
    let nn = big_n as usize;
    let lemma = leading_coefficient_lemma(m, n, field)?;
    let cp = linalg::char_poly(&r);
    let a_n = cp.a(nn);
    diagnostics.push(Diagnostic::new(
        "a_N_lemma",
        a_n == lemma,
        format!("a_N = {a_n}, (-1)^N n^(N-1) (sum A_a) t = {lemma}"),
    ));

    // undetermined entries are integer multiples of n times t^d
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<usize> = (1..=m as usize / nn).map(|k| k * nn).collect();
    let mut fills_ok = true;
    let mut ranks = BTreeSet::new();
    for _ in 0..4 {
        let mut filled = r.clone();
        for &(i, j) in &r.unknown {
            let d = (i as i64 - j as i64 + 1) / big_n;
            let k: i64 = rng.gen_range(-30..=30) * n as i64;
            filled.set(i - 1, j - 1, int_times_t(field, k.into(), d));
        }
        filled.unknown.clear();
        let fcp = linalg::char_poly(&filled);
        let (shape_ok, _) = charpoly_shape(&fcp, big_n);
        let p = linalg::sh_presentation_from_charpoly(&fcp).p;
        ranks.insert(p);
        fills_ok &= fcp.a(nn) == lemma && shape_ok && candidates.contains(&p);
    }
    diagnostics.push(Diagnostic::new(
        "partial_random_fills",
        fills_ok,
        format!("random fills keep a_N and give SH ranks {ranks:?} among {candidates:?}"),
    ));

    let undetermined = undetermined_coefficients(m, n);
    let char_poly = (1..=s)
        .map(|i| (!undetermined.contains(&i)).then(|| cp.a(i)))
        .collect();
    let nonzero = !a_n.is_zero();
    diagnostics.push(Diagnostic::new(
        "sh_nonzero",
        nonzero,
        "a_N != 0, so p >= N and SH has positive rank",
    ));
    let facts = PartialFacts {
        nonzero,
        rank_multiple_of: nn,
        rank_candidates: candidates.clone(),
        a_n,
        unknown_positions: r.unknown.iter().copied().collect(),
    };
    let mut result = ShResult {
        m,
        n,
        min_chern: big_n,
        regime,
        field,
        qh,
        sh: ShPresentation::Partial(facts),
        sh_rank: ShRank::MultipleOf {
            step: nn,
            candidates,
        },
        r_matrix: r,
        char_poly,
        diagnostics: Vec::new(),
    };
    result.diagnostics = std::mem::take(diagnostics);
    Ok(result)
}

/// `c_1(L)` nilpotent in `QH`, tested in the ring when its presentation is
/// complete and otherwise through `r^{m+1} = 0` (the same statement, since
/// `c_1(L)^k = r^k(1)` and `r` is multiplication by `c_1(L)`).
pub fn vanishing_nilpotency(result: &ShResult) -> Result<bool> {
    if result.qh.complete() {
        let c1 = result
            .qh
            .generator_power(1)?
            .scaled(&NovikovScalar::from_int(result.field, -(result.n as i64)));
        return result.qh.is_nilpotent_element(&c1);
    }
    if result.r_matrix.is_complete() {
        return Ok(result.r_matrix.pow(result.r_matrix.size()).is_zero());
    }
    Err(Error::IncompletePresentation(result.qh.unknown.clone()))
}

/// `rank < m+1` and `|N|` divides `rank`.
pub fn rank_constraints(m: u32, n: u32, sh_rank: usize) -> bool {
    let big_n = min_chern(m, n).unsigned_abs() as usize;
    sh_rank < m as usize + 1 && (big_n == 0 || sh_rank.is_multiple_of(big_n))
}

/// `|N| >= rank E * rank H*(B)` forces `SH = 0`.
pub fn vb_vanishing_predicate(min_chern: i64, rank_e: u32, rank_hb: u32) -> Result<bool> {
    if rank_e == 0 || rank_hb == 0 {
        return Err(Error::OutOfRange("ranks must be positive".into()));
    }
    Ok(min_chern.unsigned_abs() >= rank_e as u64 * rank_hb as u64)
}

/// `n > 2m`: the quantum product is ordinary and `SH = 0`.
pub fn kodaira_threshold(m: u32, n: u32) -> bool {
    n > 2 * m
}

/// Supported pairs `(m, n)` with `m <= max_m`, `n <= 2m+1`, in exact mode.
pub fn exact_mode_pairs(max_m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in 1..=2 * m + 1 {
            if let Ok(r) = classify_regime(m, n) {
                if r.exact_mode {
                    out.push((m, n));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use CoefficientField::{Gf2, Rationals as Q};

    fn int(k: i64) -> NovikovScalar {
        NovikovScalar::from_int(Q, k)
    }

    fn kt(k: i64) -> NovikovScalar {
        &int(k) * &NovikovScalar::t(Q)
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(1, 1).unwrap();
        assert_eq!((r.kind, r.exact_mode), (RegimeKind::Monotone, true));
        assert_eq!(classify_regime(2, 3).unwrap().kind, RegimeKind::CalabiYau);
        assert_eq!(classify_regime(3, 5).unwrap().kind, RegimeKind::Unsupported);
        assert_eq!(classify_regime(3, 7).unwrap().kind, RegimeKind::LargeMinChern);
        assert!(!classify_regime(3, 3).unwrap().exact_mode);
        assert!(classify_regime(0, 1).is_err());
    }

    #[test]
    fn regimes_partition() {
        for m in 1..12u32 {
            for n in 1..40u32 {
                let k = classify_regime(m, n).unwrap().kind;
                let expected = [n < 1 + m, n == 1 + m, 2 + m <= n && n <= 2 * m, n > 2 * m];
                let idx = [RegimeKind::Monotone, RegimeKind::CalabiYau, RegimeKind::Unsupported, RegimeKind::LargeMinChern]
                    .iter()
                    .position(|x| *x == k)
                    .unwrap();
                assert!(expected[idx]);
                assert_eq!(expected.iter().filter(|b| **b).count(), 1);
            }
        }
        assert!((1..10).all(|n| classify_regime(1, n).unwrap().kind != RegimeKind::Unsupported));
    }

    #[test]
    fn r_matrix_examples() {
        let r = build_r_matrix(1, 1, Q).unwrap();
        assert!(r.same_entries(&LambdaMatrix::new(Q, vec![vec![kt(1), int(-1)], vec![int(0), int(0)]]).unwrap()));
        let r = build_r_matrix(1, 2, Q).unwrap();
        assert!(r.same_entries(&LambdaMatrix::new(Q, vec![vec![int(0), int(-2)], vec![int(0), int(0)]]).unwrap()));
        for m in 2..6 {
            let r = build_r_matrix(m, 1, Q).unwrap();
            let s = m as usize + 1;
            for i in 0..s {
                for j in 0..s {
                    let expected = if j == i + 1 {
                        int(-1)
                    } else if (i, j) == (s - 2, 0) {
                        kt(1)
                    } else {
                        int(0)
                    };
                    assert_eq!(r.get(i, j), &expected, "({i},{j}) for m = {m}");
                }
            }
        }
        assert!(matches!(build_r_matrix(3, 5, Q), Err(Error::Unsupported { m: 3, n: 5 })));
    }

    #[test]
    fn unknown_positions() {
        // (3,3): N = 1, d = 2, 3 positions below the first subdiagonal block
        let r = build_r_matrix(3, 3, Q).unwrap();
        let expected: BTreeSet<_> = [(2, 1), (3, 2), (3, 1)].into_iter().collect();
        assert_eq!(r.unknown, expected);
        assert!(build_r_matrix(5, 2, Q).unwrap().unknown.is_empty());
        assert!(build_r_matrix(3, 2, Gf2).unwrap().unknown.is_empty());
        assert!(!build_r_matrix(3, 3, Gf2).unwrap().unknown.is_empty());
    }

    #[test]
    fn lemma_closed_form() {
        for m in 1..8u32 {
            for n in 1..=m {
                let big_n = min_chern(m, n);
                let sign = if big_n % 2 == 0 { 1 } else { -1 };
                let expected = sign * (n as i64).pow(1 + m);
                assert_eq!(leading_coefficient_lemma(m, n, Q).unwrap(), kt(expected));
            }
        }
    }

    #[test]
    fn o1p1() {
        let res = compute_sh(1, 1, Q).unwrap();
        assert!(res.all_pass(), "{:?}", res.diagnostics);
        assert_eq!(res.sh_rank, ShRank::Exact(1));
        assert_eq!(res.sh.ring().unwrap().render(), "Λ[ω]/(ω + 1*t^1)");
        assert_eq!(res.qh.render(), "Λ[ω]/(ω^2 + 1*t^1*ω)");
    }

    #[test]
    fn o2p5() {
        let res = compute_sh(5, 2, Q).unwrap();
        assert!(res.all_pass(), "{:?}", res.diagnostics);
        assert_eq!(res.qh.terms(), vec![(int(1), 6), (kt(4), 2)]);
        assert_eq!(res.sh.ring().unwrap().terms(), vec![(int(1), 4), (kt(4), 0)]);
        assert_eq!(res.char_poly[3], Some(kt(64)));
    }

    #[test]
    fn vanishing_cases() {
        for (m, n, f) in [(1, 2, Q), (2, 3, Q), (3, 7, Q), (4, 2, Gf2), (2, 3, Gf2)] {
            let res = compute_sh(m, n, f).unwrap();
            assert!(res.sh.is_zero(), "({m},{n}) {f}");
            assert!(vanishing_nilpotency(&res).unwrap());
            assert!(res.all_pass(), "{:?}", res.diagnostics);
        }
        let partial_even = compute_sh(3, 2, Gf2).unwrap();
        assert!(partial_even.sh.is_zero());
    }

    #[test]
    fn partial_mode() {
        let res = compute_sh(3, 3, Q).unwrap();
        assert!(!res.qh.complete());
        assert!(res.all_pass(), "{:?}", res.diagnostics);
        match &res.sh {
            ShPresentation::Partial(f) => {
                assert!(f.nonzero);
                assert_eq!(f.rank_candidates, vec![1, 2, 3]);
                assert_eq!(f.a_n, kt(-81));
            }
            other => panic!("{other:?}"),
        }
        assert!(vanishing_nilpotency(&res).is_err());
        assert!(res.char_poly[1].is_none());
    }

    #[test]
    fn predicates() {
        assert!(rank_constraints(4, 1, 4));
        assert!(rank_constraints(5, 2, 4));
        assert!(!rank_constraints(5, 2, 6));
        assert!(!rank_constraints(5, 2, 2));
        assert!(vb_vanishing_predicate(6, 2, 3).unwrap());
        assert!(!vb_vanishing_predicate(5, 2, 3).unwrap());
        assert!(vb_vanishing_predicate(-6, 2, 3).unwrap());
        assert!(vb_vanishing_predicate(1, 0, 3).is_err());
        for m in 1..8u32 {
            for n in 2 * m + 2..2 * m + 6 {
                assert!(vb_vanishing_predicate(min_chern(m, n), 1, m + 1).unwrap());
            }
        }
        assert!(kodaira_threshold(3, 7));
        assert!(!kodaira_threshold(3, 6));
        assert!(kodaira_threshold(1, 3));
    }

    #[test]
    fn exact_pairs() {
        let pairs = exact_mode_pairs(2);
        assert_eq!(pairs, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 3), (2, 5)]);
    }

    #[test]
    fn json_shape() {
        let v = compute_sh(1, 1, Q).unwrap().to_json();
        assert_eq!(v["N"], 1);
        assert_eq!(v["regime"]["kind"], "monotone");
        assert_eq!(v["sh_rank"], 1);
        assert_eq!(v["r_matrix"][0][0], "1*t^1");
        assert_eq!(v["qh"]["generator"], "omega");
        assert_eq!(v["sh"]["relation"][1][0], "1*t^1");
        assert!(v["diagnostics"].as_array().unwrap().iter().all(|d| d["pass"] == true));
    }
}
