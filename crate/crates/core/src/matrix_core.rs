//! Dense complex matrix kernel: spectra, exponentials, the matrix cosine,
//! the additive Jordan–Chevalley decomposition and SVD-based rank decisions.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{Tolerances, CLUSTER_AMBIGUITY_FACTOR};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    entries: DMatrix<C64>,
}

impl SquareMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::Empty);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SquareMatrix { entries })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(to_complex(m))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: r.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.entries
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        real_part(&self.entries)
    }
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

pub fn real_part(m: &DMatrix<C64>) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn imag_part(m: &DMatrix<C64>) -> DMatrix<f64> {
    m.map(|z| z.im)
}

/// 1-norm (maximum absolute column sum).
pub fn norm1(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues with a real/non-real split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub real_part_max: f64,
    pub real_eigenvalues: Vec<f64>,
    pub tol_imag: f64,
}

impl SpectrumReport {
    pub fn clusters(&self, tol: f64) -> Vec<EigenCluster> {
        cluster_eigenvalues(&self.eigenvalues, tol)
    }
}

fn sort_eigenvalues(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn schur_iteration_cap(n: usize) -> usize {
    1000 * n.max(1)
}

fn schur_eigenvalues(m: &DMatrix<C64>, eps: f64) -> Option<Vec<C64>> {
    let n = m.nrows();
    if m.iter().all(|z| z.im == 0.0) {
        let schur = real_part(m).try_schur(eps, schur_iteration_cap(n))?;
        Some(schur.complex_eigenvalues().iter().copied().collect())
    } else {
        let schur = m.clone().try_schur(eps, schur_iteration_cap(n))?;
        let (_, t) = schur.unpack();
        Some(t.diagonal().iter().copied().collect())
    }
}

/// Householder reflector `I - 2vvᵀ` for a fixed generic `v`.
fn fixed_reflector(n: usize) -> DMatrix<C64> {
    let v = DVector::from_fn(n, |i, _| 1.0 / (i as f64 + 1.0).sqrt() + 0.1 * i as f64);
    let v = &v / v.norm();
    to_complex(&(DMatrix::identity(n, n) - &v * v.transpose() * 2.0))
}

/// Eigenvalues of a complex matrix, sorted by (real, imaginary) part.
///
/// The shifted QR iteration can stall on highly structured input; a fixed
/// orthogonal similarity is applied before giving up.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut out = match schur_eigenvalues(m, f64::EPSILON) {
        Some(v) => v,
        None => {
            let q = fixed_reflector(n);
            let rotated = &q * m * &q;
            schur_eigenvalues(&rotated, f64::EPSILON)
                .or_else(|| schur_eigenvalues(&rotated, 64.0 * f64::EPSILON))
                .ok_or(Error::NotConverged {
                    dim: n,
                    max_iterations: schur_iteration_cap(n),
                })?
        }
    };
    sort_eigenvalues(&mut out);
    Ok(out)
}

pub fn spectrum(m: &SquareMatrix) -> Result<SpectrumReport> {
    spectrum_with(m, &Tolerances::default())
}

pub fn spectrum_with(m: &SquareMatrix, tol: &Tolerances) -> Result<SpectrumReport> {
    let eigs = eigenvalues(m.as_matrix())?;
    let tol_imag = tol.imag(m.norm());
    let real_part_max = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let real_eigenvalues = eigs
        .iter()
        .filter(|z| z.im.abs() <= tol_imag)
        .map(|z| z.re)
        .collect();
    Ok(SpectrumReport {
        eigenvalues: eigs,
        real_part_max,
        real_eigenvalues,
        tol_imag,
    })
}

/// A group of numerically coincident eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub mean: C64,
    pub multiplicity: usize,
    /// Largest distance from a member to the mean.
    pub spread: f64,
    pub members: Vec<C64>,
}

/// Single-linkage clustering: two eigenvalues closer than `tol` end up together.
pub fn cluster_eigenvalues(eigs: &[C64], tol: f64) -> Vec<EigenCluster> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(eigs[i]),
            None => groups.push((r, vec![eigs[i]])),
        }
    }
    let mut out: Vec<EigenCluster> = groups
        .into_iter()
        .map(|(_, members)| {
            let mean = members.iter().sum::<C64>() / members.len() as f64;
            let spread = members.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max);
            EigenCluster {
                mean,
                multiplicity: members.len(),
                spread,
                members,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.mean
            .re
            .total_cmp(&b.mean.re)
            .then(a.mean.im.total_cmp(&b.mean.im))
    });
    out
}

// Padé(13) coefficients for scaling and squaring.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;
const MAX_SQUARINGS: i32 = 64;

/// Matrix exponential of a complex matrix (Padé 13 with scaling and squaring).
pub fn expm(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = norm1(m);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if s > MAX_SQUARINGS {
        return Err(Error::Overflow { norm });
    }
    let a = m * C64::new(0.5f64.powi(s), 0.0);
    let id = DMatrix::<C64>::identity(n, n);
    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Numerics("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm });
    }
    Ok(r)
}

/// Exponential of a real matrix.
pub fn expm_real(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(real_part(&expm(&to_complex(m))?))
}

pub fn matrix_exp(m: &SquareMatrix) -> Result<SquareMatrix> {
    SquareMatrix::new(expm(m.as_matrix())?)
}

/// `cos M = (exp(iM) + exp(-iM)) / 2`.
pub fn matrix_cos(m: &SquareMatrix) -> Result<SquareMatrix> {
    let im = m.as_matrix() * I;
    let plus = expm(&im)?;
    let minus = expm(&(-im))?;
    SquareMatrix::new((plus + minus) * C64::new(0.5, 0.0))
}

/// `sin M = (exp(iM) - exp(-iM)) / 2i`.
pub fn matrix_sin(m: &SquareMatrix) -> Result<SquareMatrix> {
    let im = m.as_matrix() * I;
    let plus = expm(&im)?;
    let minus = expm(&(-im))?;
    SquareMatrix::new((plus - minus) * (C64::new(0.5, 0.0) / I))
}

/// Singular values, descending.
pub fn singular_values<T>(m: &DMatrix<T>) -> Vec<f64>
where
    T: ComplexField<RealField = f64>,
{
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

/// Numerical rank under `tol_rank = rank_rel * (σ_max + 1)`.
pub fn numerical_rank<T>(m: &DMatrix<T>, rank_rel: f64) -> usize
where
    T: ComplexField<RealField = f64>,
{
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let tol = rank_rel * (smax + 1.0);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Right singular vectors of `m`, ordered by descending singular value.
/// Wide matrices are padded with zero rows so that all vectors are returned.
fn right_singular_vectors<T>(m: &DMatrix<T>) -> Result<(Vec<f64>, DMatrix<T>)>
where
    T: ComplexField<RealField = f64>,
{
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = DMatrix::<T>::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Numerics("SVD did not return right vectors".into()))?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    Ok((sv, vt.adjoint()))
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`.
pub fn null_space<T>(m: &DMatrix<T>, rank_rel: f64) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    let c = m.ncols();
    if m.nrows() == 0 {
        return Ok(DMatrix::identity(c, c));
    }
    let (sv, v) = right_singular_vectors(m)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    let tol = rank_rel * (smax + 1.0);
    let rank = sv.iter().filter(|&&s| s > tol).count();
    Ok(v.columns(rank, c - rank).into_owned())
}

/// The `k` right singular vectors with the smallest singular values.
pub fn smallest_right_singular_vectors<T>(m: &DMatrix<T>, k: usize) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    let c = m.ncols();
    if k > c {
        return Err(Error::InvalidArgument(format!(
            "requested {k} vectors from a {c}-column matrix"
        )));
    }
    let (_, v) = right_singular_vectors(m)?;
    Ok(v.columns(c - k, k).into_owned())
}

/// Least-squares coefficients of `target` in the span of `columns` and the residual norm.
pub fn project_onto_columns(columns: &DMatrix<f64>, target: &DVector<f64>) -> (DVector<f64>, f64) {
    if columns.ncols() == 0 {
        return (DVector::zeros(0), target.norm());
    }
    let svd = columns.clone().svd(true, true);
    let coeffs = svd
        .solve(target, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(columns.ncols()));
    let residual = (columns * &coeffs - target).norm();
    (coeffs, residual)
}

/// Additive Jordan–Chevalley decomposition `M = S + N`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanChevalley {
    pub semisimple: SquareMatrix,
    pub nilpotent: SquareMatrix,
    pub clusters: Vec<EigenCluster>,
}

pub fn jordan_chevalley(m: &SquareMatrix) -> Result<JordanChevalley> {
    let tol = Tolerances::default().cluster(m.norm());
    jordan_chevalley_with(m, tol)
}

/// Jordan–Chevalley decomposition with an explicit clustering threshold.
///
/// Each cluster of multiplicity `k` contributes the kernel of `(M - μ)^k`;
/// `S` acts as `μ` there.
pub fn jordan_chevalley_with(m: &SquareMatrix, tol_cluster: f64) -> Result<JordanChevalley> {
    let n = m.dim();
    let a = m.as_matrix();
    let eigs = eigenvalues(a)?;
    let clusters = cluster_eigenvalues(&eigs, tol_cluster);

    let threshold = CLUSTER_AMBIGUITY_FACTOR * tol_cluster;
    for (i, ci) in clusters.iter().enumerate() {
        for cj in clusters.iter().skip(i + 1) {
            let d = ci
                .members
                .iter()
                .flat_map(|x| cj.members.iter().map(move |y| (x - y).norm()))
                .fold(f64::INFINITY, f64::min);
            if d < threshold {
                return Err(Error::AmbiguousClustering {
                    first: format!("{} (x{})", ci.mean, ci.multiplicity),
                    second: format!("{} (x{})", cj.mean, cj.multiplicity),
                    distance: d,
                    threshold,
                });
            }
        }
    }

    let id = DMatrix::<C64>::identity(n, n);
    let mut basis = DMatrix::<C64>::zeros(n, n);
    let mut diag = Vec::with_capacity(n);
    let mut col = 0;
    for c in &clusters {
        let shifted = a - &id * c.mean;
        let mut power = shifted.clone();
        for _ in 1..c.multiplicity {
            power = &power * &shifted;
        }
        let v = smallest_right_singular_vectors(&power, c.multiplicity)?;
        basis.columns_mut(col, c.multiplicity).copy_from(&v);
        diag.extend(std::iter::repeat_n(c.mean, c.multiplicity));
        col += c.multiplicity;
    }

    let sv = singular_values(&basis);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smin < 1e-10 * sv[0] {
        return Err(Error::Numerics(format!(
            "generalized eigenvector basis is singular (σ_min = {smin:e})"
        )));
    }
    let inv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerics("generalized eigenvector basis not invertible".into()))?;
    let d = DMatrix::from_diagonal(&DVector::from_vec(diag));
    let mut s = &basis * d * inv;
    if m.is_real() {
        s = to_complex(&real_part(&s));
    }
    let nil = a - &s;
    Ok(JordanChevalley {
        semisimple: SquareMatrix::new(s)?,
        nilpotent: SquareMatrix::new(nil)?,
        clusters,
    })
}
