//! Matrix models of orthogonal symmetric pairs `(so(p,q), θ, τ)`.
//!
//! The defining form is `J = diag(+1 × p, −1 × q)`. The basis consists of the
//! generators `G_ij = E_ij − ε_i ε_j E_ji` for `i < j` in lexicographic order;
//! the coordinate of `X` along `G_ij` is simply the entry `X[i][j]`.
//! `θ(X) = J X J` and `τ(X) = T X T` with `T = diag(tau_signs)`; every basis
//! element is a joint eigenvector of both.

mod cartan;
mod catalog;
mod document;

pub use cartan::{
    cartan_subspaces, root_spaces_for, coordinate_cartan, CartanKind, CartanSubspaceData, RestrictedRoot,
    RestrictedType, RootClass, RootSignatures, GENERIC_WEIGHTS,
};
pub use catalog::{rank_one_catalog, CatalogRow, ModelSupport};
pub use document::{ModelDocument, MODEL_SCHEMA_VERSION};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_core::SquareMatrix;
use crate::tolerances::TOL_MEMBERSHIP;

/// The four joint eigenspaces of `(θ, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subspace {
    /// `h ∩ k`
    HK,
    /// `h ∩ p`
    HP,
    /// `q ∩ k`
    QK,
    /// `q ∩ p`
    QP,
}

impl Subspace {
    pub const ALL: [Subspace; 4] = [Subspace::HK, Subspace::HP, Subspace::QK, Subspace::QP];

    fn from_signs(theta: f64, tau: f64) -> Subspace {
        match (tau > 0.0, theta > 0.0) {
            (true, true) => Subspace::HK,
            (true, false) => Subspace::HP,
            (false, true) => Subspace::QK,
            (false, false) => Subspace::QP,
        }
    }

    pub fn in_h(self) -> bool {
        matches!(self, Subspace::HK | Subspace::HP)
    }

    pub fn in_k(self) -> bool {
        matches!(self, Subspace::HK | Subspace::QK)
    }

    pub fn label(self) -> &'static str {
        match self {
            Subspace::HK => "h∩k",
            Subspace::HP => "h∩p",
            Subspace::QK => "q∩k",
            Subspace::QP => "q∩p",
        }
    }
}

/// An element of `g` with its four-way decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub matrix: DMatrix<f64>,
    pub coords: DVector<f64>,
    /// Projections onto `h∩k`, `h∩p`, `q∩k`, `q∩p`, in that order.
    pub parts: [DMatrix<f64>; 4],
}

impl AlgebraElement {
    pub fn part(&self, s: Subspace) -> &DMatrix<f64> {
        &self.parts[s as usize]
    }

    pub fn h_part(&self) -> DMatrix<f64> {
        &self.parts[0] + &self.parts[1]
    }

    pub fn q_part(&self) -> DMatrix<f64> {
        &self.parts[2] + &self.parts[3]
    }
}

#[derive(Clone, Debug)]
pub struct SymmetricPairModel {
    p_sig: usize,
    q_sig: usize,
    form_signs: Vec<f64>,
    tau_signs: Vec<i8>,
    index_pairs: Vec<(usize, usize)>,
    basis: Vec<DMatrix<f64>>,
    theta_eig: Vec<f64>,
    tau_eig: Vec<f64>,
    theta_matrix: DMatrix<f64>,
    tau_matrix: DMatrix<f64>,
    ad_basis: Vec<DMatrix<f64>>,
    killing_gram: DMatrix<f64>,
    family_tag: String,
}

fn signature_label(a: usize, b: usize) -> Option<String> {
    // so(1,0), so(0,1) and so(0,0) are zero.
    if a + b < 2 {
        None
    } else {
        Some(format!("so({a},{b})"))
    }
}

/// Builds `so(p_sig, q_sig)` with the involution `τ = Ad(diag(tau_signs))`.
pub fn build_so_pair(p_sig: usize, q_sig: usize, tau_signs: &[i8]) -> Result<SymmetricPairModel> {
    let n = p_sig + q_sig;
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "p + q must be at least 3, got {n}"
        )));
    }
    if tau_signs.len() != n {
        return Err(Error::InvalidSigns(format!(
            "expected {n} signs, got {}",
            tau_signs.len()
        )));
    }
    if tau_signs.iter().any(|&t| t != 1 && t != -1) {
        return Err(Error::InvalidSigns("entries must be +1 or -1".into()));
    }
    if tau_signs.iter().all(|&t| t == tau_signs[0]) {
        return Err(Error::InvalidSigns(
            "all signs equal: tau is trivial and q = 0".into(),
        ));
    }

    let form_signs: Vec<f64> = (0..n).map(|i| if i < p_sig { 1.0 } else { -1.0 }).collect();
    let mut index_pairs = Vec::new();
    let mut basis = Vec::new();
    let mut theta_eig = Vec::new();
    let mut tau_eig = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut g = DMatrix::zeros(n, n);
            g[(i, j)] = 1.0;
            g[(j, i)] = -form_signs[i] * form_signs[j];
            index_pairs.push((i, j));
            basis.push(g);
            theta_eig.push(form_signs[i] * form_signs[j]);
            tau_eig.push(f64::from(tau_signs[i] * tau_signs[j]));
        }
    }
    let dim = basis.len();
    let theta_matrix = DMatrix::from_diagonal(&DVector::from_vec(theta_eig.clone()));
    let tau_matrix = DMatrix::from_diagonal(&DVector::from_vec(tau_eig.clone()));

    let coords_of = |m: &DMatrix<f64>| -> DVector<f64> {
        DVector::from_iterator(dim, index_pairs.iter().map(|&(i, j)| m[(i, j)]))
    };
    let ad_basis: Vec<DMatrix<f64>> = basis
        .iter()
        .map(|a| {
            let mut ad = DMatrix::zeros(dim, dim);
            for (k, b) in basis.iter().enumerate() {
                let br = a * b - b * a;
                ad.set_column(k, &coords_of(&br));
            }
            ad
        })
        .collect();
    let killing_gram = DMatrix::from_fn(dim, dim, |a, b| (&ad_basis[a] * &ad_basis[b]).trace());

    let (mut tp, mut tm) = ((0, 0), (0, 0));
    for i in 0..n {
        let slot = if tau_signs[i] > 0 { &mut tp } else { &mut tm };
        if form_signs[i] > 0.0 {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
    }
    let h_factors: Vec<String> = [signature_label(tp.0, tp.1), signature_label(tm.0, tm.1)]
        .into_iter()
        .flatten()
        .collect();
    let h_label = if h_factors.is_empty() {
        "0".to_string()
    } else {
        h_factors.join("+")
    };
    let family_tag = format!("so({p_sig},{q_sig})/{h_label}");

    Ok(SymmetricPairModel {
        p_sig,
        q_sig,
        form_signs,
        tau_signs: tau_signs.to_vec(),
        index_pairs,
        basis,
        theta_eig,
        tau_eig,
        theta_matrix,
        tau_matrix,
        ad_basis,
        killing_gram,
        family_tag,
    })
}

/// The pair `so(p,q)/so(p,q−1)`: `τ = (1,…,1,−1)`.
pub fn hyperboloid_pair(p: usize, q: usize) -> Result<SymmetricPairModel> {
    let mut t = vec![1i8; p + q];
    t[p + q - 1] = -1;
    build_so_pair(p, q, &t)
}

impl SymmetricPairModel {
    pub fn p_sig(&self) -> usize {
        self.p_sig
    }

    pub fn q_sig(&self) -> usize {
        self.q_sig
    }

    /// Size of the defining representation.
    pub fn n(&self) -> usize {
        self.p_sig + self.q_sig
    }

    /// `dim g`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tau_signs(&self) -> &[i8] {
        &self.tau_signs
    }

    pub fn form_signs(&self) -> &[f64] {
        &self.form_signs
    }

    pub fn family_tag(&self) -> &str {
        &self.family_tag
    }

    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    pub fn index_pairs(&self) -> &[(usize, usize)] {
        &self.index_pairs
    }

    pub fn theta_matrix(&self) -> &DMatrix<f64> {
        &self.theta_matrix
    }

    pub fn tau_matrix(&self) -> &DMatrix<f64> {
        &self.tau_matrix
    }

    pub fn killing_gram(&self) -> &DMatrix<f64> {
        &self.killing_gram
    }

    pub fn theta_eigenvalues(&self) -> &[f64] {
        &self.theta_eig
    }

    pub fn tau_eigenvalues(&self) -> &[f64] {
        &self.tau_eig
    }

    /// `ad` of the `k`-th basis element.
    pub fn ad_basis(&self, k: usize) -> &DMatrix<f64> {
        &self.ad_basis[k]
    }

    /// `J = diag(ε)`.
    pub fn form_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(self.form_signs.clone()))
    }

    /// `T = diag(tau_signs)`.
    pub fn tau_sign_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.n(),
            self.tau_signs.iter().map(|&t| f64::from(t)),
        ))
    }

    pub fn subspace_of(&self, k: usize) -> Subspace {
        Subspace::from_signs(self.theta_eig[k], self.tau_eig[k])
    }

    /// Basis indices spanning the given joint eigenspace.
    pub fn indices(&self, s: Subspace) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.subspace_of(k) == s).collect()
    }

    pub fn h_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.tau_eig[k] > 0.0).collect()
    }

    pub fn q_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.tau_eig[k] < 0.0).collect()
    }

    pub fn subspace_dim(&self, s: Subspace) -> usize {
        self.indices(s).len()
    }

    /// Split rank of `q`: the dimension of any Cartan subspace.
    pub fn rank(&self) -> usize {
        let plus = self.tau_signs.iter().filter(|&&t| t > 0).count();
        plus.min(self.n() - plus)
    }

    /// Index of the basis element `G_ij` (`i < j`).
    pub fn basis_index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.index_pairs.iter().position(|&pr| pr == (i, j))
    }

    /// The generator `G_ij` as a matrix.
    pub fn generator(&self, i: usize, j: usize) -> Result<DMatrix<f64>> {
        self.basis_index(i, j)
            .map(|k| self.basis[k].clone())
            .ok_or_else(|| Error::InvalidArgument(format!("no generator for indices ({i},{j})")))
    }

    /// Basis coordinates of `x` (entries above the diagonal).
    pub fn coords(&self, x: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.index_pairs.iter().map(|&(i, j)| x[(i, j)]))
    }

    pub fn from_coords(&self, c: &[f64]) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0.0 {
                m += &self.basis[k] * ck;
            }
        }
        m
    }

    /// `‖Xᵀ J + J X‖`.
    pub fn algebra_residual(&self, x: &DMatrix<f64>) -> f64 {
        let j = self.form_matrix();
        (x.transpose() * &j + &j * x).norm()
    }

    /// `‖gᵀ J g − J‖`.
    pub fn group_residual(&self, g: &DMatrix<f64>) -> f64 {
        let j = self.form_matrix();
        (g.transpose() * &j * g - &j).norm()
    }

    pub fn check_algebra(&self, x: &DMatrix<f64>) -> Result<()> {
        if x.nrows() != self.n() || x.ncols() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                x.nrows(),
                x.ncols(),
                n = self.n()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = self.algebra_residual(x);
        if r > TOL_MEMBERSHIP * (1.0 + x.norm()) {
            return Err(Error::NotInAlgebra { residual: r });
        }
        Ok(())
    }

    /// Checks `X ∈ q`: `X ∈ g` and `τ(X) = −X`.
    pub fn check_q(&self, x: &DMatrix<f64>) -> Result<()> {
        self.check_algebra(x)?;
        let r = (self.tau(x) + x).norm();
        if r > TOL_MEMBERSHIP * (1.0 + x.norm()) {
            return Err(Error::NotInSubspace {
                subspace: "q".into(),
                residual: r,
            });
        }
        Ok(())
    }

    pub fn check_group(&self, g: &DMatrix<f64>) -> Result<()> {
        if g.nrows() != self.n() || g.ncols() != self.n() {
            return Err(Error::InvalidArgument("group element has the wrong size".into()));
        }
        let r = self.group_residual(g);
        if r > TOL_MEMBERSHIP * (1.0 + g.norm_squared()) {
            return Err(Error::NotInGroup { residual: r });
        }
        Ok(())
    }

    /// `θ(X) = J X J`.
    pub fn theta(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x.clone();
        for i in 0..self.n() {
            for j in 0..self.n() {
                y[(i, j)] *= self.form_signs[i] * self.form_signs[j];
            }
        }
        y
    }

    /// `τ(X) = T X T`; also the group involution.
    pub fn tau(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x.clone();
        for i in 0..self.n() {
            for j in 0..self.n() {
                y[(i, j)] *= f64::from(self.tau_signs[i] * self.tau_signs[j]);
            }
        }
        y
    }

    /// Inverse of a group element: `g⁻¹ = J gᵀ J`.
    pub fn group_inverse(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        self.theta(&g.transpose())
    }

    /// `Ad_g X = g X g⁻¹`.
    pub fn adjoint_action(&self, g: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
        g * x * self.group_inverse(g)
    }

    pub fn decompose(&self, x: &DMatrix<f64>) -> Result<AlgebraElement> {
        self.check_algebra(x)?;
        let tx = self.tau(x);
        let hx = (x + &tx) * 0.5;
        let qx = (x - &tx) * 0.5;
        let split = |m: &DMatrix<f64>| {
            let t = self.theta(m);
            ((m + &t) * 0.5, (m - &t) * 0.5)
        };
        let (hk, hp) = split(&hx);
        let (qk, qp) = split(&qx);
        Ok(AlgebraElement {
            matrix: x.clone(),
            coords: self.coords(x),
            parts: [hk, hp, qk, qp],
        })
    }

    /// Matrix of `ad_X` on the basis.
    pub fn ad_matrix(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let c = self.coords(x);
        let mut ad = DMatrix::zeros(self.dim(), self.dim());
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0.0 {
                ad += &self.ad_basis[k] * ck;
            }
        }
        ad
    }

    pub fn ad_square_matrix(&self, x: &DMatrix<f64>) -> Result<SquareMatrix> {
        SquareMatrix::from_real(&self.ad_matrix(x))
    }

    /// Killing form `B(X, Y)` through the cached Gram matrix.
    pub fn killing(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
        let cx = self.coords(x);
        let cy = self.coords(y);
        (cx.transpose() * &self.killing_gram * cy)[(0, 0)]
    }

    pub fn bracket(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
        x * y - y * x
    }

    /// Matrix of `ad_X` restricted to the columns `cols`.
    pub fn ad_columns(&self, x: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
        let ad = self.ad_matrix(x);
        DMatrix::from_fn(self.dim(), cols.len(), |i, j| ad[(i, cols[j])])
    }

    /// Embeds a coefficient vector over `indices` into a full matrix.
    pub fn from_sub_coords(&self, indices: &[usize], c: &[f64]) -> DMatrix<f64> {
        let mut full = vec![0.0; self.dim()];
        for (&k, &v) in indices.iter().zip(c) {
            full[k] = v;
        }
        self.from_coords(&full)
    }

    /// Signature `(n₊, n₋, n₀)` of the Killing form restricted to the span of `indices`.
    pub fn killing_signature_on(&self, indices: &[usize]) -> (usize, usize, usize) {
        let sub = DMatrix::from_fn(indices.len(), indices.len(), |a, b| {
            self.killing_gram[(indices[a], indices[b])]
        });
        let eig = sub.symmetric_eigen().eigenvalues;
        let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        let tol = 1e-9 * scale;
        let pos = eig.iter().filter(|&&v| v > tol).count();
        let neg = eig.iter().filter(|&&v| v < -tol).count();
        (pos, neg, indices.len() - pos - neg)
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument::from_model(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let m = hyperboloid_pair(3, 2).unwrap();
        assert_eq!(m.dim(), 10);
        assert_eq!(m.q_indices().len(), 4);
        assert_eq!(m.family_tag(), "so(3,2)/so(3,1)");
        assert_eq!(m.rank(), 1);

        let m = build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap();
        assert_eq!(m.dim(), 6);
        assert_eq!(m.h_indices().len(), 2);
        assert_eq!(m.q_indices().len(), 4);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.family_tag(), "so(2,2)/so(1,1)+so(1,1)");
    }

    #[test]
    fn c_dual_pattern() {
        let m = build_so_pair(3, 2, &[-1, 1, 1, 1, 1]).unwrap();
        assert_eq!(m.family_tag(), "so(3,2)/so(2,2)");
        assert_eq!(m.q_indices().len(), 4);
    }

    #[test]
    fn rejects_trivial_tau() {
        assert!(matches!(
            build_so_pair(2, 2, &[1, 1, 1, 1]),
            Err(Error::InvalidSigns(_))
        ));
        assert!(matches!(
            build_so_pair(2, 2, &[-1, -1, -1, -1]),
            Err(Error::InvalidSigns(_))
        ));
        assert!(build_so_pair(2, 2, &[1, 1, 2, -1]).is_err());
        assert!(build_so_pair(1, 1, &[1, -1]).is_err());
        assert!(build_so_pair(2, 2, &[1, -1]).is_err());
    }

    #[test]
    fn boost_lies_in_qp() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let b = m.generator(0, 4).unwrap();
        let e = m.decompose(&b).unwrap();
        assert!((e.part(Subspace::QP) - &b).norm() < 1e-15);
        assert!(e.part(Subspace::HK).norm() < 1e-15);
        assert!(e.part(Subspace::HP).norm() < 1e-15);
        assert!(e.part(Subspace::QK).norm() < 1e-15);
    }

    #[test]
    fn decompose_rejects_non_algebra() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let x = DMatrix::identity(5, 5);
        assert!(matches!(m.decompose(&x), Err(Error::NotInAlgebra { .. })));
    }

    #[test]
    fn killing_signature_on_q() {
        for (p, q) in [(3, 2), (2, 2), (4, 3), (3, 3)] {
            let m = hyperboloid_pair(p, q).unwrap();
            let (pos, neg, zero) = m.killing_signature_on(&m.q_indices());
            assert_eq!((pos, neg, zero), (p, q - 1, 0));
        }
    }
}
