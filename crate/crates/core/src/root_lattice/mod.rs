//! Coroot lattices with exact Gram matrices, exhaustive short-vector
//! enumeration and the lattice lemmas.
//!
//! Everything outside [`model`] is exact integer/rational arithmetic.

pub mod model;

pub use model::{
    gamma_candidates, gamma_lattice_element, lemma_5_3_gamma0, verify_lemma_5_3, CartanSubalgebra,
    Gamma0, GammaElement, Lemma53Report,
};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Default cap on visited enumeration cells.
pub const DEFAULT_CELL_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeType {
    A,
    B,
    D,
    E,
}

impl std::fmt::Display for LatticeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LatticeType::A => "A",
            LatticeType::B => "B",
            LatticeType::D => "D",
            LatticeType::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for LatticeType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(LatticeType::A),
            "B" | "b" => Ok(LatticeType::B),
            "D" | "d" => Ok(LatticeType::D),
            "E" | "e" => Ok(LatticeType::E),
            other => Err(Error::InvalidArgument(format!("unsupported lattice type {other:?}"))),
        }
    }
}

/// Unit scale is the lattice itself; half scale is `½Γ` (norms divided by 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeScale {
    Unit,
    Half,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvolutionKind {
    Identity,
    /// Nontrivial diagram automorphism.
    DiagramFlip,
    /// Negative of the diagram automorphism (for `A_n` this is `w₀`).
    NegatedFlip,
}

impl std::str::FromStr for InvolutionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(InvolutionKind::Identity),
            "flip" | "diagram" => Ok(InvolutionKind::DiagramFlip),
            "negated-flip" => Ok(InvolutionKind::NegatedFlip),
            other => Err(Error::InvalidArgument(format!("unknown involution {other:?}"))),
        }
    }
}

impl std::fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InvolutionKind::Identity => "identity",
            InvolutionKind::DiagramFlip => "flip",
            InvolutionKind::NegatedFlip => "negated-flip",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub coeffs: Vec<i64>,
    pub norm_sq: Rational,
}

/// Lattice with an exact Gram matrix and an integral isometric involution.
///
/// The involution acts on coefficient columns: `τ(v_j) = Σ_i τ[i][j] v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    pub name: String,
    gram: Vec<Vec<Rational>>,
    labels: Vec<String>,
    involution: Vec<Vec<i64>>,
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn r(v: i128) -> Rational {
    Rational::from_integer(v)
}

/// `G = L D Lᵀ` with unit lower-triangular `L`; `None` if some pivot is not positive.
fn ldl(gram: &[Vec<Rational>]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let n = gram.len();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = gram[j][j];
        for k in 0..j {
            dj -= l[j][k] * l[j][k] * d[k];
        }
        if dj <= Rational::zero() {
            return None;
        }
        d[j] = dj;
        l[j][j] = r(1);
        for i in (j + 1)..n {
            let mut v = gram[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = v / dj;
        }
    }
    Some((l, d))
}

impl GramLattice {
    pub fn new(name: impl Into<String>, gram: Vec<Vec<Rational>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) || labels.len() != n {
            return Err(Error::InvalidArgument("Gram matrix must be square and labelled".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
                }
            }
        }
        if ldl(&gram).is_none() {
            return Err(Error::InvalidArgument("Gram matrix is not positive definite".into()));
        }
        Ok(GramLattice {
            name: name.into(),
            gram,
            labels,
            involution: identity_matrix(n),
        })
    }

    /// Replaces the involution after checking `τ² = 1` and `τᵀ G τ = G`.
    pub fn with_involution(mut self, tau: Vec<Vec<i64>>) -> Result<Self> {
        let n = self.rank();
        if tau.len() != n || tau.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("involution has the wrong size".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let sq: i64 = (0..n).map(|k| tau[i][k] * tau[k][j]).sum();
                if sq != i64::from(i == j) {
                    return Err(Error::InvalidArgument("τ² is not the identity".into()));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let mut s = Rational::zero();
                for i in 0..n {
                    for j in 0..n {
                        s += r(i128::from(tau[i][a] * tau[j][b])) * self.gram[i][j];
                    }
                }
                if s != self.gram[a][b] {
                    return Err(Error::InvalidArgument("τ does not preserve the Gram matrix".into()));
                }
            }
        }
        self.involution = tau;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn involution(&self) -> &[Vec<i64>] {
        &self.involution
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    s += self.gram[i][j] * r(i128::from(ai) * i128::from(bj));
                }
            }
        }
        s
    }

    pub fn norm_sq(&self, a: &[i64]) -> Rational {
        self.inner(a, a)
    }

    pub fn vector(&self, coeffs: Vec<i64>) -> LatticeVector {
        let norm_sq = self.norm_sq(&coeffs);
        LatticeVector { coeffs, norm_sq }
    }

    pub fn apply_involution(&self, a: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| self.involution[i][j] * a[j]).sum()).collect()
    }

    pub fn unit_vector(&self, i: usize) -> Vec<i64> {
        (0..self.rank()).map(|k| i64::from(k == i)).collect()
    }

    /// Same lattice with every Gram entry multiplied by `factor`.
    pub fn scaled(&self, factor: Rational) -> GramLattice {
        GramLattice {
            name: self.name.clone(),
            gram: self.gram.iter().map(|row| row.iter().map(|v| *v * factor).collect()).collect(),
            labels: self.labels.clone(),
            involution: self.involution.clone(),
        }
    }

    pub fn min_generator_norm(&self) -> Rational {
        (0..self.rank()).map(|i| self.gram[i][i]).min().expect("rank >= 1")
    }

    /// Search bound used when none is given: four times the smallest generator norm.
    pub fn default_bound(&self) -> Rational {
        self.min_generator_norm() * r(4)
    }

    pub fn gram_strings(&self) -> Vec<Vec<String>> {
        self.gram.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect()
    }
}

fn edges_gram(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Rational>> {
    let mut g = vec![vec![Rational::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = r(2);
    }
    for &(a, b) in edges {
        if a < n && b < n {
            g[a][b] = r(-1);
            g[b][a] = r(-1);
        }
    }
    g
}

/// Gram data for the coroot lattices, normalized so that long generators have
/// norm 2 (for `B_n` the last generator has norm 4 and `⟨v_{n−1}, v_n⟩ = −2`).
pub fn build_coroot_lattice(ty: LatticeType, n: usize, scale: LatticeScale) -> Result<GramLattice> {
    let min = match ty {
        LatticeType::D => 3,
        LatticeType::E => 6,
        LatticeType::A => 1,
        LatticeType::B => 2,
    };
    if n < min || (ty == LatticeType::E && n > 8) {
        return Err(Error::InvalidArgument(format!("{ty}_{n} is not a supported lattice")));
    }
    let chain: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    let gram = match ty {
        LatticeType::A => edges_gram(n, &chain),
        LatticeType::B => {
            let mut g = edges_gram(n, &chain);
            g[n - 1][n - 1] = r(4);
            g[n - 2][n - 1] = r(-2);
            g[n - 1][n - 2] = r(-2);
            g
        }
        LatticeType::D => {
            let mut e: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
            e.push((n - 3, n - 1));
            edges_gram(n, &e)
        }
        LatticeType::E => edges_gram(n, &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]),
    };
    let labels = (1..=n).map(|i| format!("v{i}")).collect();
    let l = GramLattice::new(format!("{ty}{n}"), gram, labels)?;
    Ok(match scale {
        LatticeScale::Unit => l,
        LatticeScale::Half => {
            let mut h = l.scaled(Rational::new(1, 4));
            h.name = format!("{ty}{n}/2");
            h
        }
    })
}

/// Nontrivial diagram automorphism as a permutation of the generators.
pub fn diagram_automorphism(ty: LatticeType, n: usize) -> Option<Vec<usize>> {
    match ty {
        LatticeType::A if n >= 2 => Some((0..n).rev().collect()),
        LatticeType::D => {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(n - 2, n - 1);
            Some(p)
        }
        LatticeType::E if n == 6 => Some(vec![5, 1, 4, 3, 2, 0]),
        _ => None,
    }
}

pub fn permutation_involution(perm: &[usize], negate: bool) -> Vec<Vec<i64>> {
    let n = perm.len();
    let s = if negate { -1 } else { 1 };
    let mut t = vec![vec![0; n]; n];
    for (j, &pj) in perm.iter().enumerate() {
        t[pj][j] = s;
    }
    t
}

/// Reflection in the generator `k`: `s(v_j) = v_j − (2⟨v_j,v_k⟩/⟨v_k,v_k⟩) v_k`.
pub fn reflection_involution(l: &GramLattice, k: usize) -> Result<Vec<Vec<i64>>> {
    let n = l.rank();
    let mut t = identity_matrix(n);
    for (j, _) in (0..n).enumerate() {
        let c = l.gram()[j][k] * r(2) / l.gram()[k][k];
        if !c.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "reflection in v{} is not integral on v{}",
                k + 1,
                j + 1
            )));
        }
        t[k][j] -= c.to_integer() as i64;
    }
    Ok(t)
}

pub fn involution_matrix(ty: LatticeType, n: usize, kind: InvolutionKind) -> Result<Vec<Vec<i64>>> {
    match kind {
        InvolutionKind::Identity => Ok(identity_matrix(n)),
        InvolutionKind::DiagramFlip | InvolutionKind::NegatedFlip => {
            let perm = diagram_automorphism(ty, n)
                .ok_or_else(|| Error::Unsupported(format!("{ty}{n} has no diagram automorphism")))?;
            Ok(permutation_involution(&perm, kind == InvolutionKind::NegatedFlip))
        }
    }
}

fn ceil_f(x: f64) -> i64 {
    x.ceil() as i64
}

fn floor_f(x: f64) -> i64 {
    x.floor() as i64
}

fn to_f64(v: Rational) -> f64 {
    v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN)
}

/// All nonzero lattice vectors with `norm_sq ≤ bound`, sorted lexicographically.
pub fn shortest_vectors(l: &GramLattice, bound: Rational) -> Result<Vec<LatticeVector>> {
    shortest_vectors_with_limit(l, bound, DEFAULT_CELL_LIMIT)
}

/// Fincke–Pohst enumeration over the LDL factorization, with exact acceptance.
pub fn shortest_vectors_with_limit(l: &GramLattice, bound: Rational, cell_limit: u64) -> Result<Vec<LatticeVector>> {
    let n = l.rank();
    let (lo, d) = ldl(l.gram()).ok_or_else(|| Error::InvalidArgument("Gram matrix is not positive definite".into()))?;
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; n];
    let mut cells: u64 = 0;

    struct Ctx<'a> {
        lo: &'a [Vec<Rational>],
        d: &'a [Rational],
        cell_limit: u64,
    }

    fn recurse(
        ctx: &Ctx<'_>,
        i: usize,
        remaining: Rational,
        coeffs: &mut Vec<i64>,
        cells: &mut u64,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        let n = coeffs.len();
        let mut c = Rational::zero();
        for j in (i + 1)..n {
            c += ctx.lo[j][i] * r(i128::from(coeffs[j]));
        }
        let s = (to_f64(remaining) / to_f64(ctx.d[i])).max(0.0).sqrt();
        let cf = to_f64(c);
        let lo_m = ceil_f(-cf - s) - 1;
        let hi_m = floor_f(-cf + s) + 1;
        for m in lo_m..=hi_m {
            *cells += 1;
            if *cells > ctx.cell_limit {
                return Err(Error::SearchLimit { limit: ctx.cell_limit });
            }
            let y = r(i128::from(m)) + c;
            let used = ctx.d[i] * y * y;
            if used > remaining {
                continue;
            }
            coeffs[i] = m;
            if i == 0 {
                if coeffs.iter().any(|&v| v != 0) {
                    out.push(coeffs.clone());
                }
            } else {
                recurse(ctx, i - 1, remaining - used, coeffs, cells, out)?;
            }
        }
        coeffs[i] = 0;
        Ok(())
    }

    let ctx = Ctx {
        lo: &lo,
        d: &d,
        cell_limit,
    };
    let mut raw = Vec::new();
    recurse(&ctx, n - 1, bound, &mut coeffs, &mut cells, &mut raw)?;
    raw.sort();
    for c in raw {
        let norm_sq = l.norm_sq(&c);
        debug_assert!(norm_sq <= bound);
        out.push(LatticeVector { coeffs: c, norm_sq });
    }
    Ok(out)
}

/// Minimal norm and all vectors attaining it.
pub fn minimal_vectors(l: &GramLattice) -> Result<(Rational, Vec<LatticeVector>)> {
    let all = shortest_vectors(l, l.min_generator_norm())?;
    let min = all
        .iter()
        .map(|v| v.norm_sq)
        .min()
        .ok_or_else(|| Error::Numerics("enumeration returned no vectors".into()))?;
    Ok((min, all.into_iter().filter(|v| v.norm_sq == min).collect()))
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Shortest lattice vector that is a positive multiple of `v`: `v / gcd(v)`.
pub fn line_minimum(l: &GramLattice, v: &LatticeVector) -> Result<LatticeVector> {
    let g = gcd_all(&v.coeffs);
    if g == 0 {
        return Err(Error::InvalidArgument("line_minimum needs a nonzero vector".into()));
    }
    Ok(l.vector(v.coeffs.iter().map(|x| x / g).collect()))
}

fn collinear(a: &[i64], b: &[i64]) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| i128::from(a[i]) * i128::from(b[j]) == i128::from(a[j]) * i128::from(b[i])))
}

/// Enumeration oracle for [`line_minimum`]: searches all vectors up to `‖v‖²`.
pub fn line_minimum_by_enumeration(l: &GramLattice, v: &LatticeVector) -> Result<LatticeVector> {
    let candidates = shortest_vectors(l, v.norm_sq)?;
    candidates
        .into_iter()
        .filter(|w| collinear(&w.coeffs, &v.coeffs))
        .filter(|w| {
            let dot: i128 = w.coeffs.iter().zip(&v.coeffs).map(|(a, b)| i128::from(*a) * i128::from(*b)).sum();
            dot > 0
        })
        .min_by(|a, b| a.norm_sq.cmp(&b.norm_sq))
        .ok_or_else(|| Error::InvalidArgument("vector must be nonzero".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisEntry {
    pub generator: usize,
    /// `⟨v_i, τ v_i⟩`.
    pub pairing: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub generator: usize,
    /// `v_i − τ v_i`.
    pub difference: Vec<i64>,
    pub norm_sq: String,
    pub line_minimum: Vec<i64>,
    pub enumerated_minimum: Vec<i64>,
    pub is_line_minimum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaVerdict {
    Pass,
    HypothesisViolated { generators: Vec<usize> },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma51Report {
    pub lattice: String,
    pub gram: Vec<Vec<String>>,
    pub involution: String,
    pub involution_matrix: Vec<Vec<i64>>,
    pub minimal_norm: String,
    pub minimal_vector_count: usize,
    pub hypothesis: Vec<HypothesisEntry>,
    /// Clause (i): each generator attains the minimal norm.
    pub generators_shortest: Vec<bool>,
    /// Clause (ii), evaluated in `½Γ`.
    pub witnesses: Vec<LineWitness>,
    pub verdict: LemmaVerdict,
}

/// Same-length lattices: generators are shortest, and `v_i − τv_i` is the
/// shortest vector of `½Γ` on its line.
pub fn verify_lemma_5_1(ty: LatticeType, n: usize, kind: InvolutionKind) -> Result<Lemma51Report> {
    if ty == LatticeType::B {
        return Err(Error::Unsupported("B_n has two root lengths; use the long-root check".into()));
    }
    let tau = involution_matrix(ty, n, kind)?;
    let l = build_coroot_lattice(ty, n, LatticeScale::Unit)?.with_involution(tau.clone())?;
    let (min, minimal) = minimal_vectors(&l)?;
    let mut hypothesis = Vec::new();
    let mut shortest = Vec::new();
    for i in 0..n {
        let e = l.unit_vector(i);
        let pairing = l.inner(&e, &l.apply_involution(&e));
        hypothesis.push(HypothesisEntry {
            generator: i + 1,
            pairing: pairing.to_string(),
            holds: pairing >= Rational::zero(),
        });
        shortest.push(l.norm_sq(&e) == min);
    }
    let violated: Vec<usize> = hypothesis.iter().filter(|h| !h.holds).map(|h| h.generator).collect();

    let half = build_coroot_lattice(ty, n, LatticeScale::Half)?.with_involution(tau.clone())?;
    let mut witnesses = Vec::new();
    if violated.is_empty() {
        for i in 0..n {
            let e = half.unit_vector(i);
            let te = half.apply_involution(&e);
            let diff: Vec<i64> = e.iter().zip(&te).map(|(a, b)| a - b).collect();
            if diff.iter().all(|&x| x == 0) {
                continue;
            }
            let v = half.vector(diff.clone());
            let lm = line_minimum(&half, &v)?;
            let en = line_minimum_by_enumeration(&half, &v)?;
            witnesses.push(LineWitness {
                generator: i + 1,
                norm_sq: v.norm_sq.to_string(),
                is_line_minimum: lm.coeffs == diff && en.coeffs == diff,
                difference: diff,
                line_minimum: lm.coeffs,
                enumerated_minimum: en.coeffs,
            });
        }
    }
    let verdict = if !violated.is_empty() {
        LemmaVerdict::HypothesisViolated { generators: violated }
    } else if shortest.iter().all(|&b| b) && witnesses.iter().all(|w| w.is_line_minimum) {
        LemmaVerdict::Pass
    } else {
        LemmaVerdict::Fail
    };
    Ok(Lemma51Report {
        lattice: l.name.clone(),
        gram: l.gram_strings(),
        involution: kind.to_string(),
        involution_matrix: tau,
        minimal_norm: min.to_string(),
        minimal_vector_count: minimal.len(),
        hypothesis,
        generators_shortest: shortest,
        witnesses,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma52Report {
    pub lattice: String,
    /// 1-based generator index.
    pub index: usize,
    pub generator_norm: String,
    pub minimal_norm: String,
    pub is_shortest: bool,
    pub is_long: bool,
    /// `is_shortest ⇔ index < n`.
    pub consistent: bool,
}

/// `B_n`: generator `index` (1-based) is shortest iff it is a long root, i.e. `index < n`.
pub fn verify_lemma_5_2(n: usize, index: usize) -> Result<Lemma52Report> {
    if index == 0 || index > n {
        return Err(Error::InvalidArgument(format!("generator index {index} outside 1..={n}")));
    }
    let l = build_coroot_lattice(LatticeType::B, n, LatticeScale::Unit)?;
    let (min, _) = minimal_vectors(&l)?;
    let e = l.unit_vector(index - 1);
    let norm = l.norm_sq(&e);
    let is_shortest = norm == min;
    let is_long = index < n;
    Ok(Lemma52Report {
        lattice: l.name.clone(),
        index,
        generator_norm: norm.to_string(),
        minimal_norm: min.to_string(),
        is_shortest,
        is_long,
        consistent: is_shortest == is_long,
    })
}

/// `B_n` with `τ = s_{v_{n−1}}`: `⟨v_n, τv_n⟩ = 0`, and the line minimum of
/// `v = v_n − τv_n` is `½v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfDifferenceWitness {
    pub lattice: String,
    pub involution_matrix: Vec<Vec<i64>>,
    pub pairing: String,
    pub difference: Vec<i64>,
    pub line_minimum: Vec<i64>,
    pub enumerated_minimum: Vec<i64>,
    pub is_half: bool,
}

pub fn b_series_half_difference(n: usize) -> Result<HalfDifferenceWitness> {
    let base = build_coroot_lattice(LatticeType::B, n, LatticeScale::Unit)?;
    let tau = reflection_involution(&base, n - 2)?;
    let l = base.with_involution(tau.clone())?;
    let e = l.unit_vector(n - 1);
    let te = l.apply_involution(&e);
    let pairing = l.inner(&e, &te);
    let diff: Vec<i64> = e.iter().zip(&te).map(|(a, b)| a - b).collect();
    let v = l.vector(diff.clone());
    let lm = line_minimum(&l, &v)?;
    let en = line_minimum_by_enumeration(&l, &v)?;
    let is_half = diff.iter().all(|x| x % 2 == 0)
        && lm.coeffs.iter().zip(&diff).all(|(a, b)| 2 * a == *b)
        && en.coeffs == lm.coeffs;
    Ok(HalfDifferenceWitness {
        lattice: l.name.clone(),
        involution_matrix: tau,
        pairing: pairing.to_string(),
        difference: diff,
        line_minimum: lm.coeffs,
        enumerated_minimum: en.coeffs,
        is_half,
    })
}

/// Rational helper used by tests and reports.
pub fn rational(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

impl LatticeVector {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn negated(&self) -> LatticeVector {
        LatticeVector {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            norm_sq: self.norm_sq,
        }
    }

    pub fn norm_is_positive(&self) -> bool {
        self.norm_sq.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_gram(l: &GramLattice) -> Vec<Vec<i128>> {
        l.gram().iter().map(|r| r.iter().map(|v| v.to_integer()).collect()).collect()
    }

    #[test]
    fn gram_examples() {
        let a2 = build_coroot_lattice(LatticeType::A, 2, LatticeScale::Unit).unwrap();
        assert_eq!(int_gram(&a2), vec![vec![2, -1], vec![-1, 2]]);
        let b3 = build_coroot_lattice(LatticeType::B, 3, LatticeScale::Unit).unwrap();
        assert_eq!(int_gram(&b3), vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -2, 4]]);
        let d4 = build_coroot_lattice(LatticeType::D, 4, LatticeScale::Unit).unwrap();
        assert_eq!(
            int_gram(&d4),
            vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]
        );
        assert!(build_coroot_lattice(LatticeType::B, 1, LatticeScale::Unit).is_err());
        assert!(build_coroot_lattice(LatticeType::D, 2, LatticeScale::Unit).is_err());
    }

    #[test]
    fn a2_minimal_vectors() {
        let a2 = build_coroot_lattice(LatticeType::A, 2, LatticeScale::Unit).unwrap();
        let (min, v) = minimal_vectors(&a2).unwrap();
        assert_eq!(min, r(2));
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn root_counts_match_root_systems() {
        for (ty, n, roots) in [
            (LatticeType::A, 3, 12),
            (LatticeType::D, 4, 24),
            (LatticeType::D, 5, 40),
            (LatticeType::E, 6, 72),
            (LatticeType::E, 7, 126),
            (LatticeType::E, 8, 240),
        ] {
            let l = build_coroot_lattice(ty, n, LatticeScale::Unit).unwrap();
            let (min, v) = minimal_vectors(&l).unwrap();
            assert_eq!(min, r(2));
            assert_eq!(v.len(), roots, "{ty}{n}");
        }
    }

    #[test]
    fn scaling_scales_minimum() {
        let a3 = build_coroot_lattice(LatticeType::A, 3, LatticeScale::Unit).unwrap();
        let big = a3.scaled(r(4));
        assert_eq!(minimal_vectors(&big).unwrap().0, r(8));
        let half = build_coroot_lattice(LatticeType::A, 3, LatticeScale::Half).unwrap();
        assert_eq!(minimal_vectors(&half).unwrap().0, Rational::new(1, 2));
    }

    #[test]
    fn line_minimum_examples() {
        let b3 = build_coroot_lattice(LatticeType::B, 3, LatticeScale::Unit).unwrap();
        let v = b3.vector(vec![1, -1, 2]);
        assert_eq!(line_minimum(&b3, &v).unwrap(), v);
        let w = b3.vector(vec![2, -2, 4]);
        assert_eq!(line_minimum(&b3, &w).unwrap(), v);
        assert_eq!(line_minimum_by_enumeration(&b3, &w).unwrap(), v);
        assert!(line_minimum(&b3, &b3.vector(vec![0, 0, 0])).is_err());
    }

    #[test]
    fn involution_checks() {
        let a2 = build_coroot_lattice(LatticeType::A, 2, LatticeScale::Unit).unwrap();
        assert!(a2.clone().with_involution(vec![vec![1, 1], vec![0, 1]]).is_err());
        assert!(a2.clone().with_involution(vec![vec![0, 1], vec![1, 0]]).is_ok());
        let b3 = build_coroot_lattice(LatticeType::B, 3, LatticeScale::Unit).unwrap();
        let s = reflection_involution(&b3, 1).unwrap();
        assert!(b3.clone().with_involution(s).is_ok());
    }

    #[test]
    fn lemma_5_1_examples() {
        let r = verify_lemma_5_1(LatticeType::A, 3, InvolutionKind::DiagramFlip).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Pass);
        assert!(!r.witnesses.is_empty());
        let r = verify_lemma_5_1(LatticeType::D, 4, InvolutionKind::Identity).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Pass);
        assert!(r.witnesses.is_empty());
        let r = verify_lemma_5_1(LatticeType::A, 2, InvolutionKind::DiagramFlip).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::HypothesisViolated { generators: vec![1, 2] });
        assert_eq!(r.hypothesis[0].pairing, "-1");
        assert!(verify_lemma_5_1(LatticeType::B, 3, InvolutionKind::Identity).is_err());
    }

    #[test]
    fn lemma_5_2_examples() {
        assert!(verify_lemma_5_2(3, 1).unwrap().is_shortest);
        let r = verify_lemma_5_2(3, 3).unwrap();
        assert!(!r.is_shortest);
        assert_eq!(r.generator_norm, "4");
        assert!(r.consistent);
        assert!(!verify_lemma_5_2(5, 5).unwrap().is_shortest);
        assert!(verify_lemma_5_2(3, 0).is_err());
    }

    #[test]
    fn half_difference_in_b_series() {
        for n in 2..=5 {
            let w = b_series_half_difference(n).unwrap();
            assert_eq!(w.pairing, "0");
            assert!(w.is_half, "{w:?}");
        }
    }

    #[test]
    fn cell_limit_aborts() {
        let e8 = build_coroot_lattice(LatticeType::E, 8, LatticeScale::Unit).unwrap();
        assert!(matches!(
            shortest_vectors_with_limit(&e8, r(8), 1000),
            Err(Error::SearchLimit { limit: 1000 })
        ));
    }
}
