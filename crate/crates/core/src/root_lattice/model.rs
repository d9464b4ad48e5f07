//! Floating-point side of the lattice lemmas: Cartan subalgebras extending a
//! Cartan subspace, coroots, and lattice elements in the matrix model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_core::{expm, null_space, numerical_rank, to_complex, C64, I};
use crate::symmetric_pair::{
    AlgebraElement, CartanKind, CartanSubspaceData, RestrictedRoot, RestrictedType, Subspace,
    SymmetricPairModel, GENERIC_WEIGHTS,
};
use crate::symmetric_pair::root_spaces_for;
use crate::tolerances::TOL_RANK_REL;

/// A θ- and τ-stable Cartan subalgebra `l = c ⊕ b` with `b ⊂ h`.
#[derive(Clone, Debug)]
pub struct CartanSubalgebra {
    pub generators: Vec<DMatrix<f64>>,
    pub subspaces: Vec<Subspace>,
    /// Number of leading generators that span the Cartan subspace `c`.
    pub c_rank: usize,
    /// Roots of `g^C` with respect to `l^C`, as values on the generators.
    pub roots: Vec<RestrictedRoot>,
    /// Killing form on the generators.
    pub gram: DMatrix<f64>,
}

fn subspace_of(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<Subspace> {
    let e = pair.decompose(x)?;
    Subspace::ALL
        .into_iter()
        .find(|&s| (e.part(s) - x).norm() <= 1e-12 * (1.0 + x.norm()))
        .ok_or_else(|| Error::Construction("generator is not a joint θ/τ eigenvector".into()))
}

fn stack(blocks: &[DMatrix<f64>], cols: usize) -> DMatrix<f64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut s = DMatrix::zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        s.view_mut((off, 0), (b.nrows(), cols)).copy_from(b);
        off += b.nrows();
    }
    s
}

impl CartanSubalgebra {
    /// Extends a Cartan subspace by generic elements of its centralizer in
    /// `h ∩ k`, then in `h ∩ p`, until the centralizer is the subalgebra itself.
    pub fn extend(pair: &SymmetricPairModel, c: &CartanSubspaceData) -> Result<Self> {
        let mut gens = c.generator_matrices();
        let c_rank = gens.len();
        for sub in [Subspace::HK, Subspace::HP] {
            let idx = pair.indices(sub);
            if idx.is_empty() {
                continue;
            }
            loop {
                let blocks: Vec<DMatrix<f64>> = gens.iter().map(|g| pair.ad_columns(g, &idx)).collect();
                let z = null_space(&stack(&blocks, idx.len()), TOL_RANK_REL)?;
                let existing: Vec<DVector<f64>> = gens
                    .iter()
                    .filter(|g| subspace_of(pair, g).ok() == Some(sub))
                    .map(|g| {
                        let full = pair.coords(g);
                        DVector::from_iterator(idx.len(), idx.iter().map(|&k| full[k]))
                    })
                    .collect();
                let u = if existing.is_empty() {
                    DMatrix::zeros(idx.len(), 0)
                } else {
                    DMatrix::from_columns(&existing)
                };
                let rank_u = if existing.is_empty() { 0 } else { numerical_rank(&u, TOL_RANK_REL) };
                let both = if existing.is_empty() {
                    z.clone()
                } else {
                    let mut cols: Vec<DVector<f64>> = existing.clone();
                    cols.extend(z.column_iter().map(|c| c.into_owned()));
                    DMatrix::from_columns(&cols)
                };
                if z.ncols() == 0 || numerical_rank(&both, TOL_RANK_REL) <= rank_u {
                    break;
                }
                let mut w = DVector::zeros(idx.len());
                for (col, wt) in z.column_iter().zip(GENERIC_WEIGHTS.iter().cycle().skip(existing.len())) {
                    w += col * *wt;
                }
                if !existing.is_empty() {
                    let (coef, _) = crate::matrix_core::project_onto_columns(&u, &w);
                    w -= &u * coef;
                }
                let scale = w.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if scale < 1e-10 {
                    break;
                }
                gens.push(pair.from_sub_coords(&idx, (w / scale).as_slice()));
            }
        }
        let (spaces, kernel) = root_spaces_for(pair, &gens)?;
        if kernel != gens.len() || spaces.iter().any(|s| s.multiplicity != 1) {
            return Err(Error::Construction(format!(
                "extension of {} is not a Cartan subalgebra (rank {}, centralizer {kernel})",
                pair.family_tag(),
                gens.len()
            )));
        }
        let subspaces = gens.iter().map(|g| subspace_of(pair, g)).collect::<Result<Vec<_>>>()?;
        let k = gens.len();
        let gram = DMatrix::from_fn(k, k, |i, j| pair.killing(&gens[i], &gens[j]));
        Ok(CartanSubalgebra {
            generators: gens,
            subspaces,
            c_rank,
            roots: spaces,
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Coefficients of the coroot `h_λ` (`λ(h_λ) = 2`) over the generators.
    pub fn coroot(&self, root: &RestrictedRoot) -> Result<Vec<C64>> {
        let g = to_complex(&self.gram);
        let lam = DVector::from_vec(root.values.clone());
        let t = g
            .lu()
            .solve(&lam)
            .ok_or_else(|| Error::Numerics("Killing form singular on the Cartan subalgebra".into()))?;
        let btt: C64 = t.iter().zip(lam.iter()).map(|(a, b)| a * b).sum();
        if btt.norm() < 1e-12 {
            return Err(Error::Numerics("isotropic root".into()));
        }
        Ok(t.iter().map(|v| v * 2.0 / btt).collect())
    }

    /// `B*(λ, λ)` through the dual Killing form.
    pub fn root_length_sq(&self, root: &RestrictedRoot) -> Result<C64> {
        let g = to_complex(&self.gram);
        let lam = DVector::from_vec(root.values.clone());
        let t = g
            .lu()
            .solve(&lam)
            .ok_or_else(|| Error::Numerics("Killing form singular on the Cartan subalgebra".into()))?;
        Ok(t.iter().zip(lam.iter()).map(|(a, b)| a * b).sum())
    }

    /// Complex matrix `Σ c_j L_j`.
    pub fn combine(&self, coeffs: &[C64]) -> DMatrix<C64> {
        let n = self.generators[0].nrows();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (g, c) in self.generators.iter().zip(coeffs) {
            m += to_complex(g) * *c;
        }
        m
    }

    /// Real matrix from the coefficients on generators in `keep`, each scaled by `factor`.
    fn real_part_on(&self, coeffs: &[C64], keep: impl Fn(Subspace) -> bool, factor: f64) -> Result<DMatrix<f64>> {
        let n = self.generators[0].nrows();
        let mut m = DMatrix::zeros(n, n);
        for ((g, c), s) in self.generators.iter().zip(coeffs).zip(&self.subspaces) {
            if keep(*s) {
                if c.im.abs() > 1e-9 * (1.0 + c.norm()) {
                    return Err(Error::Numerics(format!(
                        "coroot coefficient {c} on {} is not real",
                        s.label()
                    )));
                }
                m += g * (c.re * factor);
            }
        }
        Ok(m)
    }
}

/// `‖exp(iM) − 1‖` for a real matrix `M`.
pub fn exp_i_residual(m: &DMatrix<f64>) -> Result<f64> {
    let e = expm(&(to_complex(m) * I))?;
    Ok((e - DMatrix::<C64>::identity(m.nrows(), m.nrows())).norm())
}

/// Lattice element in the noncompact part of a mixed Cartan subspace.
#[derive(Clone, Debug)]
pub struct GammaElement {
    pub gamma: AlgebraElement,
    /// Root of the Cartan subalgebra whose coroot produced `γ`.
    pub root: RestrictedRoot,
    pub coroot: Vec<C64>,
    pub exp_residual: f64,
}

/// All lattice elements `γ = 2π(1 − θ)(1 − τ) h_λ`, one per root whose
/// coroot has a nonzero component in `c_p` and with `exp(iγ) = 1`.
pub fn gamma_candidates(pair: &SymmetricPairModel) -> Result<Vec<GammaElement>> {
    let c = pair.mixed_cartan()?;
    let l = CartanSubalgebra::extend(pair, &c)?;
    let mut out = Vec::new();
    for root in &l.roots {
        let h = l.coroot(root)?;
        // (1−θ)(1−τ) keeps four times the q∩p component.
        let gamma = match l.real_part_on(&h, |s| s == Subspace::QP, 2.0 * PI * 4.0) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if gamma.norm() < 1e-9 {
            continue;
        }
        let res = exp_i_residual(&gamma)?;
        if res > 1e-10 {
            continue;
        }
        out.push(GammaElement {
            gamma: pair.decompose(&gamma)?,
            root: root.clone(),
            coroot: h,
            exp_residual: res,
        });
    }
    out.sort_by(|a, b| a.gamma.matrix.norm().total_cmp(&b.gamma.matrix.norm()));
    Ok(out)
}

/// The shortest lattice element of `c_p` produced by the coroot construction.
pub fn gamma_lattice_element(pair: &SymmetricPairModel) -> Result<GammaElement> {
    gamma_candidates(pair)?.into_iter().next().ok_or_else(|| {
        Error::Construction(format!(
            "no coroot of {} yields a nonzero lattice element in c_p",
            pair.family_tag()
        ))
    })
}

/// `γ₀ = π(h_λ − τ h_λ)` for a root `λ` restricting to the positive root `α` on `a`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gamma0 {
    pub root_values: Vec<C64>,
    /// `B*(λ, λ)`; the larger value marks long roots.
    pub root_length_sq: f64,
    pub is_long: bool,
    /// Coefficient of `γ₀` on the unit generator `A₀` (`α(A₀) = 1`).
    pub coefficient: f64,
    pub exp_residual: f64,
}

impl Gamma0 {
    pub fn matrix(&self, a0: &DMatrix<f64>) -> DMatrix<f64> {
        a0 * self.coefficient
    }
}

pub fn lemma_5_3_gamma0(pair: &SymmetricPairModel) -> Result<(DMatrix<f64>, Vec<Gamma0>)> {
    let a = pair.noncompact_cartan()?;
    let a0 = a
        .unit_generator()
        .ok_or_else(|| Error::Construction("noncompact Cartan subspace has no roots".into()))?;
    let scale = a.alpha_on_generator().unwrap_or(1.0);
    let l = CartanSubalgebra::extend(pair, &a)?;
    let mut lens = Vec::new();
    let mut raw = Vec::new();
    for root in &l.roots {
        // λ(A₀) = α(A₀) = 1 picks the roots restricting to α.
        let on_a0 = root.values[0] / scale;
        if (on_a0 - C64::new(1.0, 0.0)).norm() > 1e-8 {
            continue;
        }
        let h = l.coroot(root)?;
        let g0 = l.real_part_on(&h, |s| !s.in_h(), 2.0 * PI)?;
        let coef = a.coefficients(pair, &g0)?[0] * scale;
        let len = l.root_length_sq(root)?;
        lens.push(len.re);
        raw.push((root.values.clone(), len.re, coef, exp_i_residual(&g0)?));
    }
    let max_len = lens.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let out = raw
        .into_iter()
        .map(|(values, len, coefficient, res)| Gamma0 {
            root_values: values,
            root_length_sq: len,
            is_long: (len - max_len).abs() <= 1e-9 * (1.0 + max_len.abs()),
            coefficient,
            exp_residual: res,
        })
        .collect();
    Ok((a0, out))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma53Report {
    pub family_tag: String,
    pub restricted_type: RestrictedType,
    pub alpha_value: f64,
    pub alpha_over_pi: f64,
    /// `α(γ) ∈ πZ`.
    pub integral: bool,
    /// `|α(γ)| ≥ π`.
    pub at_least_pi: bool,
    /// `|α(γ)| ≥ 2π`; only asserted for type A1.
    pub at_least_two_pi: Option<bool>,
    pub passed: bool,
}

/// Checks the value of the restricted root on a lattice element `γ ∈ a`.
pub fn verify_lemma_5_3(pair: &SymmetricPairModel, gamma: &DMatrix<f64>) -> Result<Lemma53Report> {
    let a = pair.noncompact_cartan()?;
    if a.kind != CartanKind::Noncompact {
        return Err(Error::Unsupported("noncompact Cartan subspace required".into()));
    }
    let coef = a.coefficients(pair, gamma)?[0];
    if gamma.norm() < 1e-12 {
        return Err(Error::InvalidArgument("γ must be nonzero".into()));
    }
    let ad = pair.ad_matrix(gamma);
    let eigs = crate::matrix_core::eigenvalues(&to_complex(&ad))?;
    let tol = 1e-8 * (1.0 + ad.norm());
    let modulus = eigs
        .iter()
        .filter(|z| z.im.abs() <= tol && z.re > tol)
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    if !modulus.is_finite() {
        return Err(Error::Numerics("ad_γ has no positive real eigenvalue".into()));
    }
    let alpha = modulus * coef.signum();
    let ratio = alpha / PI;
    let integral = (ratio - ratio.round()).abs() <= 1e-9 * ratio.abs().max(1.0);
    let at_least_pi = alpha.abs() >= PI * (1.0 - 1e-9);
    let at_least_two_pi = (a.restricted_type == RestrictedType::A1).then(|| alpha.abs() >= 2.0 * PI * (1.0 - 1e-9));
    let passed = integral && at_least_pi && at_least_two_pi.unwrap_or(true);
    Ok(Lemma53Report {
        family_tag: pair.family_tag().to_string(),
        restricted_type: a.restricted_type,
        alpha_value: alpha,
        alpha_over_pi: ratio,
        integral,
        at_least_pi,
        at_least_two_pi,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric_pair::{build_so_pair, hyperboloid_pair};

    #[test]
    fn lorentz_gamma() {
        let m = build_so_pair(3, 1, &[1, 1, -1, -1]).unwrap();
        let g = gamma_lattice_element(&m).unwrap();
        assert!(g.exp_residual < 1e-10);
        let x = &g.gamma.matrix;
        assert!((m.theta(x) + x).norm() < 1e-12);
        assert!((m.tau(x) + x).norm() < 1e-12);
        let expected = m.generator(0, 3).unwrap() * (8.0 * PI);
        assert!((x.abs() - expected.abs()).norm() < 1e-9);
    }

    #[test]
    fn gamma0_values() {
        for (p, q) in [(3, 2), (2, 2), (4, 3), (3, 3)] {
            let m = hyperboloid_pair(p, q).unwrap();
            let (a0, gs) = lemma_5_3_gamma0(&m).unwrap();
            assert!(!gs.is_empty());
            for g in &gs {
                let r = verify_lemma_5_3(&m, &g.matrix(&a0)).unwrap();
                assert!(r.passed, "{r:?}");
                let v = r.alpha_value / PI;
                assert!((v - 2.0).abs() < 1e-9 || (v - 4.0).abs() < 1e-9, "{v}");
                assert!(g.exp_residual < 1e-10);
            }
        }
    }

    #[test]
    fn lemma_rejects_zero_and_outside() {
        let m = hyperboloid_pair(3, 2).unwrap();
        assert!(verify_lemma_5_3(&m, &DMatrix::zeros(5, 5)).is_err());
        assert!(verify_lemma_5_3(&m, &m.generator(3, 4).unwrap()).is_err());
    }
}
