use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{AlgebraElement, Subspace, SymmetricPairModel};
use crate::error::{Error, Result};
use crate::matrix_core::{
    cluster_eigenvalues, eigenvalues, numerical_rank, null_space, project_onto_columns,
    smallest_right_singular_vectors, to_complex, C64,
};
use crate::tolerances::{TOL_MEMBERSHIP, TOL_RANK_REL};

/// Fixed irrational-looking weights used to form "generic" combinations.
pub const GENERIC_WEIGHTS: [f64; 8] = [
    1.0,
    0.618_033_988_749_894_9,
    0.414_213_562_373_095,
    std::f64::consts::FRAC_1_PI,
    0.271_828_182_845_904_5,
    0.577_215_664_901_532_9,
    std::f64::consts::FRAC_1_SQRT_2,
    0.141_421_356_237_309_5,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanKind {
    Compact,
    Noncompact,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestrictedType {
    A1,
    BC1,
    Higher,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootClass {
    Real,
    Imaginary,
    Complex,
}

/// A joint eigenvalue functional of `ad` on a Cartan subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedRoot {
    /// Value on each generator.
    pub values: Vec<C64>,
    pub multiplicity: usize,
    pub class: RootClass,
}

impl RestrictedRoot {
    /// `α(Σ c_i C_i)`.
    pub fn evaluate(&self, coeffs: &[f64]) -> C64 {
        self.values.iter().zip(coeffs).map(|(v, c)| v * c).sum()
    }
}

/// Dimensions of the `±1` eigenspaces of `τθ` on the root spaces of `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSignatures {
    pub m_plus_alpha: usize,
    pub m_minus_alpha: usize,
    pub m_plus_2alpha: usize,
    pub m_minus_2alpha: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CartanSubspaceData {
    pub kind: CartanKind,
    pub generators: Vec<AlgebraElement>,
    pub restricted_type: RestrictedType,
    /// `m(α)` and `m(2α)`; only meaningful in rank one.
    pub multiplicity_alpha: Option<usize>,
    pub multiplicity_2alpha: Option<usize>,
    pub signatures: Option<RootSignatures>,
    pub roots: Vec<RestrictedRoot>,
    /// Dimension of the centralizer of the subspace in `g`.
    pub centralizer_dim: usize,
}

impl CartanSubspaceData {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_matrices(&self) -> Vec<DMatrix<f64>> {
        self.generators.iter().map(|g| g.matrix.clone()).collect()
    }

    /// Generators lying in `q ∩ k`.
    pub fn compact_part(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.generators[i].part(Subspace::QK).norm() > 0.5 * self.generators[i].matrix.norm())
            .collect()
    }

    /// Generators lying in `q ∩ p`.
    pub fn noncompact_part(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.generators[i].part(Subspace::QP).norm() > 0.5 * self.generators[i].matrix.norm())
            .collect()
    }

    pub fn element(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let n = self.generators[0].matrix.nrows();
        let mut m = DMatrix::zeros(n, n);
        for (g, &c) in self.generators.iter().zip(coeffs) {
            m += &g.matrix * c;
        }
        m
    }

    /// Coordinates of `x` over the generators; rejects elements outside the span.
    pub fn coefficients(&self, pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        pair.check_algebra(x)?;
        let cols = DMatrix::from_columns(
            &self
                .generators
                .iter()
                .map(|g| g.coords.clone())
                .collect::<Vec<_>>(),
        );
        let target = pair.coords(x);
        let (c, res) = project_onto_columns(&cols, &target);
        if res > TOL_MEMBERSHIP * (1.0 + target.norm()) {
            return Err(Error::NotInSubspace {
                subspace: "the Cartan subspace".into(),
                residual: res,
            });
        }
        Ok(c.iter().copied().collect())
    }

    /// Value of `α` on the `i`-th generator with `|α(C_i)|` minimal and positive:
    /// the rank-one normalization constant.
    pub fn alpha_on_generator(&self) -> Option<f64> {
        if self.rank() != 1 {
            return None;
        }
        self.roots
            .iter()
            .map(|r| r.values[0].norm())
            .filter(|v| *v > 1e-9)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
    }

    /// Rank-one generator rescaled so that `|α(A₀)| = 1`.
    pub fn unit_generator(&self) -> Option<DMatrix<f64>> {
        self.alpha_on_generator()
            .map(|a| &self.generators[0].matrix / a)
    }
}

/// Root space of a joint eigenvalue functional together with a complex basis.
#[derive(Clone, Debug)]
pub(crate) struct RootSpace {
    pub root: RestrictedRoot,
    pub vectors: DMatrix<C64>,
}

fn classify(values: &[C64]) -> RootClass {
    let scale = 1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-8 * scale;
    if values.iter().all(|v| v.im.abs() <= tol) {
        RootClass::Real
    } else if values.iter().all(|v| v.re.abs() <= tol) {
        RootClass::Imaginary
    } else {
        RootClass::Complex
    }
}

/// Joint eigen-decomposition of `ad` on commuting semisimple generators.
///
/// Returns the nonzero root spaces and the dimension of the common kernel.
pub(crate) fn root_spaces(
    pair: &SymmetricPairModel,
    gens: &[DMatrix<f64>],
) -> Result<(Vec<RootSpace>, usize)> {
    if gens.is_empty() {
        return Ok((Vec::new(), pair.dim()));
    }
    if gens.len() > GENERIC_WEIGHTS.len() {
        return Err(Error::Unsupported(format!(
            "joint spectra for {} generators",
            gens.len()
        )));
    }
    let ads: Vec<DMatrix<f64>> = gens.iter().map(|g| pair.ad_matrix(g)).collect();
    let mut generic = DMatrix::zeros(pair.dim(), pair.dim());
    for (a, w) in ads.iter().zip(GENERIC_WEIGHTS) {
        generic += a * w;
    }
    let generic_c = to_complex(&generic);
    let eigs = eigenvalues(&generic_c)?;
    let scale = 1.0 + generic.norm();
    let clusters = cluster_eigenvalues(&eigs, 1e-6 * scale);
    let id = DMatrix::<C64>::identity(pair.dim(), pair.dim());
    let mut spaces = Vec::new();
    let mut kernel = 0;
    for c in clusters {
        if c.mean.norm() <= 1e-6 * scale {
            kernel += c.multiplicity;
            continue;
        }
        let v = smallest_right_singular_vectors(&(&generic_c - &id * c.mean), c.multiplicity)?;
        let vh = v.adjoint();
        let values: Vec<C64> = ads
            .iter()
            .map(|a| (&vh * to_complex(a) * &v).trace() / c.multiplicity as f64)
            .collect();
        let values: Vec<C64> = values
            .into_iter()
            .map(|z| {
                let re = if z.re.abs() < 1e-12 * scale { 0.0 } else { z.re };
                let im = if z.im.abs() < 1e-12 * scale { 0.0 } else { z.im };
                C64::new(re, im)
            })
            .collect();
        spaces.push(RootSpace {
            root: RestrictedRoot {
                class: classify(&values),
                values,
                multiplicity: c.multiplicity,
            },
            vectors: v,
        });
    }
    spaces.sort_by(|a, b| {
        for (x, y) in a.root.values.iter().zip(&b.root.values) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok((spaces, kernel))
}

/// Joint roots of `ad` on commuting semisimple generators, and the dimension
/// of their common centralizer.
pub fn root_spaces_for(
    pair: &SymmetricPairModel,
    gens: &[DMatrix<f64>],
) -> Result<(Vec<RestrictedRoot>, usize)> {
    let (spaces, kernel) = root_spaces(pair, gens)?;
    Ok((spaces.into_iter().map(|s| s.root).collect(), kernel))
}

/// Disjoint coordinate pairs `(i, j)` whose generators span a Cartan subspace.
///
/// With `prefer_boosts` the number of boosts (`ε_i ≠ ε_j`) is maximal, otherwise
/// the number of rotations is.
pub fn coordinate_cartan(pair: &SymmetricPairModel, prefer_boosts: bool) -> Vec<(usize, usize)> {
    let eps = pair.form_signs();
    let t = pair.tau_signs();
    let class = |pos_eps: bool, pos_tau: bool| -> Vec<usize> {
        (0..pair.n())
            .filter(|&i| (eps[i] > 0.0) == pos_eps && (t[i] > 0) == pos_tau)
            .collect()
    };
    let mut a = class(true, true);
    let mut b = class(true, false);
    let mut c = class(false, true);
    let mut d = class(false, false);
    let mut out = Vec::new();
    let take = |x: &mut Vec<usize>, y: &mut Vec<usize>, out: &mut Vec<(usize, usize)>| {
        let k = x.len().min(y.len());
        for (i, j) in x.drain(..k).zip(y.drain(..k)) {
            out.push((i.min(j), i.max(j)));
        }
    };
    if prefer_boosts {
        take(&mut a, &mut d, &mut out);
        take(&mut c, &mut b, &mut out);
        take(&mut a, &mut b, &mut out);
        take(&mut c, &mut d, &mut out);
    } else {
        take(&mut a, &mut b, &mut out);
        take(&mut c, &mut d, &mut out);
        take(&mut a, &mut d, &mut out);
        take(&mut c, &mut b, &mut out);
    }
    // Any leftover T+ / T- indices pair up across classes.
    let mut plus: Vec<usize> = a.into_iter().chain(c).collect();
    let mut minus: Vec<usize> = b.into_iter().chain(d).collect();
    take(&mut plus, &mut minus, &mut out);
    out.sort();
    out
}

fn build_data(pair: &SymmetricPairModel, gens: Vec<DMatrix<f64>>) -> Result<CartanSubspaceData> {
    for (i, g) in gens.iter().enumerate() {
        pair.check_q(g)?;
        for h in gens.iter().skip(i + 1) {
            let r = pair.bracket(g, h).norm();
            if r > 1e-12 * (1.0 + g.norm() * h.norm()) {
                return Err(Error::Construction(format!(
                    "Cartan generators do not commute (residual {r:e})"
                )));
            }
        }
    }
    let elements: Vec<AlgebraElement> = gens
        .iter()
        .map(|g| pair.decompose(g))
        .collect::<Result<_>>()?;
    let n_k = elements
        .iter()
        .filter(|e| e.part(Subspace::QK).norm() > 0.5 * e.matrix.norm())
        .count();
    let kind = if n_k == elements.len() {
        CartanKind::Compact
    } else if n_k == 0 {
        CartanKind::Noncompact
    } else {
        CartanKind::Mixed
    };

    let (spaces, kernel) = root_spaces(pair, &gens)?;
    let roots: Vec<RestrictedRoot> = spaces.iter().map(|s| s.root.clone()).collect();

    let (restricted_type, m1, m2, signatures) = if gens.len() == 1 {
        let mut mags: Vec<f64> = roots.iter().map(|r| r.values[0].norm()).collect();
        mags.sort_by(f64::total_cmp);
        mags.dedup_by(|x, y| (*x - *y).abs() <= 1e-6 * (1.0 + y.abs()));
        let unit = mags[0];
        let mult = |target: f64| -> usize {
            roots
                .iter()
                .filter(|r| {
                    let v = r.values[0];
                    let w = if v.re.abs() >= v.im.abs() { v.re } else { v.im };
                    w > 0.0 && (v.norm() - target).abs() <= 1e-6 * (1.0 + target)
                })
                .map(|r| r.multiplicity)
                .sum()
        };
        let ty = match mags.len() {
            1 => RestrictedType::A1,
            2 if (mags[1] - 2.0 * unit).abs() <= 1e-6 * (1.0 + unit) => RestrictedType::BC1,
            _ => {
                return Err(Error::Numerics(format!(
                    "rank-one root moduli {mags:?} fit neither A1 nor BC1"
                )))
            }
        };
        let m1 = mult(unit);
        let m2 = if ty == RestrictedType::BC1 { mult(2.0 * unit) } else { 0 };
        let sig = if kind == CartanKind::Noncompact {
            let d = DVector::from_iterator(
                pair.dim(),
                pair.tau_eigenvalues()
                    .iter()
                    .zip(pair.theta_eigenvalues())
                    .map(|(t, th)| t * th),
            );
            let plus_proj = DMatrix::from_diagonal(&d.map(|v| C64::new((1.0 + v) / 2.0, 0.0)));
            let minus_proj = DMatrix::from_diagonal(&d.map(|v| C64::new((1.0 - v) / 2.0, 0.0)));
            let mut s = RootSignatures {
                m_plus_alpha: 0,
                m_minus_alpha: 0,
                m_plus_2alpha: 0,
                m_minus_2alpha: 0,
            };
            for sp in &spaces {
                let v = sp.root.values[0];
                if v.re <= 0.0 {
                    continue;
                }
                let plus = numerical_rank(&(&plus_proj * &sp.vectors), TOL_RANK_REL);
                let minus = numerical_rank(&(&minus_proj * &sp.vectors), TOL_RANK_REL);
                if (v.norm() - unit).abs() <= 1e-6 * (1.0 + unit) {
                    s.m_plus_alpha += plus;
                    s.m_minus_alpha += minus;
                } else {
                    s.m_plus_2alpha += plus;
                    s.m_minus_2alpha += minus;
                }
            }
            Some(s)
        } else {
            None
        };
        (ty, Some(m1), Some(m2), sig)
    } else {
        (RestrictedType::Higher, None, None, None)
    };

    Ok(CartanSubspaceData {
        kind,
        generators: elements,
        restricted_type,
        multiplicity_alpha: m1,
        multiplicity_2alpha: m2,
        signatures,
        roots,
        centralizer_dim: kernel,
    })
}

fn coordinate_generators(pair: &SymmetricPairModel, pairs: &[(usize, usize)]) -> Result<Vec<DMatrix<f64>>> {
    pairs.iter().map(|&(i, j)| pair.generator(i, j)).collect()
}

/// Mixed Cartan subspace obtained from a noncompact one by replacing one
/// direction with a compact element centralizing a root hyperplane.
fn mixed_from_split(
    pair: &SymmetricPairModel,
    split: &CartanSubspaceData,
) -> Result<Option<Vec<DMatrix<f64>>>> {
    let r = split.rank();
    if r < 2 {
        return Ok(None);
    }
    let gens = split.generator_matrices();
    let qk = pair.indices(Subspace::QK);
    for root in &split.roots {
        let row = DMatrix::from_row_slice(1, r, &root.values.iter().map(|v| v.re).collect::<Vec<_>>());
        let hyper = null_space(&row, TOL_RANK_REL)?;
        let cp: Vec<DMatrix<f64>> = hyper
            .column_iter()
            .map(|c| {
                let mut m = DMatrix::zeros(pair.n(), pair.n());
                for (g, &w) in gens.iter().zip(c.iter()) {
                    m += g * w;
                }
                let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                m / scale
            })
            .collect();
        let stacked = {
            let blocks: Vec<DMatrix<f64>> = cp.iter().map(|c| pair.ad_columns(c, &qk)).collect();
            let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
            let mut s = DMatrix::zeros(rows, qk.len());
            let mut off = 0;
            for b in blocks {
                s.view_mut((off, 0), (b.nrows(), b.ncols())).copy_from(&b);
                off += b.nrows();
            }
            s
        };
        let z = null_space(&stacked, TOL_RANK_REL)?;
        if z.ncols() == 0 {
            continue;
        }
        let mut coeffs = DVector::zeros(qk.len());
        for (col, w) in z.column_iter().zip(GENERIC_WEIGHTS) {
            coeffs += col * w;
        }
        let scale = coeffs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let k = pair.from_sub_coords(&qk, (coeffs / scale).as_slice());
        let mut out = vec![k];
        out.extend(cp);
        return Ok(Some(out));
    }
    Ok(None)
}

/// θ-stable Cartan subspaces of `q`.
///
/// Rank one: the noncompact `a` (when `q ∩ p ≠ 0`) followed by the compact `t`
/// (when `q ∩ k ≠ 0`). Higher rank: the maximally split and maximally compact
/// coordinate subspaces, plus a mixed one built from a root hyperplane of the
/// split one when the split subspace is purely noncompact.
pub fn cartan_subspaces(pair: &SymmetricPairModel) -> Result<Vec<CartanSubspaceData>> {
    let split_pairs = coordinate_cartan(pair, true);
    let compact_pairs = coordinate_cartan(pair, false);
    let mut out = Vec::new();
    if pair.rank() == 1 {
        let eps = pair.form_signs();
        let t = pair.tau_signs();
        let find = |boost: bool| {
            pair.index_pairs()
                .iter()
                .copied()
                .find(|&(i, j)| t[i] != t[j] && ((eps[i] != eps[j]) == boost))
        };
        if let Some(b) = find(true) {
            out.push(build_data(pair, coordinate_generators(pair, &[b])?)?);
        }
        if let Some(r) = find(false) {
            out.push(build_data(pair, coordinate_generators(pair, &[r])?)?);
        }
        return Ok(out);
    }
    let split = build_data(pair, coordinate_generators(pair, &split_pairs)?)?;
    let split_kind = split.kind;
    let mixed = if split_kind == CartanKind::Noncompact {
        mixed_from_split(pair, &split)?
    } else {
        None
    };
    out.push(split);
    if compact_pairs != split_pairs {
        out.push(build_data(pair, coordinate_generators(pair, &compact_pairs)?)?);
    }
    if let Some(gens) = mixed {
        out.push(build_data(pair, gens)?);
    }
    Ok(out)
}

impl SymmetricPairModel {
    pub fn cartan_subspaces(&self) -> Result<Vec<CartanSubspaceData>> {
        cartan_subspaces(self)
    }

    /// The noncompact rank-one Cartan subspace `a`.
    pub fn noncompact_cartan(&self) -> Result<CartanSubspaceData> {
        if self.rank() != 1 {
            return Err(Error::Unsupported(format!(
                "{} has rank {}; the noncompact Cartan subspace is a rank-one notion here",
                self.family_tag(),
                self.rank()
            )));
        }
        cartan_subspaces(self)?
            .into_iter()
            .find(|c| c.kind == CartanKind::Noncompact)
            .ok_or_else(|| Error::Unsupported(format!("{} has q ∩ p = 0", self.family_tag())))
    }

    /// The compact rank-one Cartan subspace `t`.
    pub fn compact_cartan(&self) -> Result<CartanSubspaceData> {
        if self.rank() != 1 {
            return Err(Error::Unsupported(format!(
                "{} has rank {}",
                self.family_tag(),
                self.rank()
            )));
        }
        cartan_subspaces(self)?
            .into_iter()
            .find(|c| c.kind == CartanKind::Compact)
            .ok_or_else(|| Error::Unsupported(format!("{} has q ∩ k = 0", self.family_tag())))
    }

    /// A Cartan subspace with both a compact and a noncompact part.
    pub fn mixed_cartan(&self) -> Result<CartanSubspaceData> {
        cartan_subspaces(self)?
            .into_iter()
            .find(|c| c.kind == CartanKind::Mixed)
            .ok_or_else(|| {
                Error::Unsupported(format!("{} has no mixed Cartan subspace", self.family_tag()))
            })
    }
}
