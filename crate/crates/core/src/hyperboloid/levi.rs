use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::QuadricPoint;
use crate::error::{Error, Result};
use crate::matrix_core::{null_space, numerical_rank, C64};
use crate::tolerances::{TOL_RANK_REL, TOL_SIGNATURE_REL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl SignatureTriple {
    pub fn new(n_pos: usize, n_neg: usize, n_zero: usize) -> Self {
        SignatureTriple { n_pos, n_neg, n_zero }
    }

    pub fn total(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }
}

impl std::fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_pos, self.n_neg, self.n_zero)
    }
}

/// Defining function of the level hypersurface; `NegF` flips the orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelFunction {
    F,
    NegF,
}

/// Eigenvalues of a Hermitian matrix and their sign counts, with zero band
/// `signature_rel · (max |λ| + 1)`.
pub fn hermitian_signature(m: &DMatrix<C64>) -> Result<(SignatureTriple, Vec<f64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut eigs: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    let scale = eigs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = TOL_SIGNATURE_REL * (scale + 1.0);
    let sig = SignatureTriple {
        n_pos: eigs.iter().filter(|&&e| e > tol).count(),
        n_neg: eigs.iter().filter(|&&e| e < -tol).count(),
        n_zero: eigs.iter().filter(|&&e| e.abs() <= tol).count(),
    };
    Ok((sig, eigs))
}

pub(super) fn epsilon(pt: &QuadricPoint) -> Vec<f64> {
    (0..pt.n()).map(|j| if j < pt.p() { 1.0 } else { -1.0 }).collect()
}

/// Levi form of the level set of `±F` through `pt`, written in an orthonormal
/// basis of the complex tangent space `{w : Σε z w = 0, Σε z̄ w = 0}`.
pub fn levi_form(pt: &QuadricPoint, level: LevelFunction) -> Result<DMatrix<C64>> {
    let n = pt.n();
    let eps = epsilon(pt);
    let z = pt.coords();
    let c = DMatrix::from_fn(2, n, |r, j| if r == 0 { z[j] * eps[j] } else { z[j].conj() * eps[j] });
    if numerical_rank(&c, TOL_RANK_REL) < 2 {
        return Err(Error::Degenerate(
            "the tangency constraints are dependent (real point or degenerate stratum)".into(),
        ));
    }
    let h = null_space(&c, TOL_RANK_REL)?;
    let sign = match level {
        LevelFunction::F => 1.0,
        LevelFunction::NegF => -1.0,
    };
    let e = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(sign * eps[i], 0.0) } else { C64::new(0.0, 0.0) });
    Ok(h.adjoint() * e * &h)
}

pub fn levi_signature(pt: &QuadricPoint, level: LevelFunction) -> Result<SignatureTriple> {
    Ok(hermitian_signature(&levi_form(pt, level)?)?.0)
}
