//! Seeded sampling of algebra and group elements.
//!
//! Every sample index gets its own ChaCha stream derived from `(seed, index)`,
//! so results do not depend on thread scheduling.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix_core::{expm_real, null_space};
use crate::tolerances::TOL_RANK_REL;
use crate::symmetric_pair::SymmetricPairModel;

/// Norm bound for the exponent when sampling group elements.
pub const GROUP_EXPONENT_NORM: f64 = 2.0;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal_vector<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.sample(StandardNormal)).collect()
}

/// Random element of the span of the basis elements `indices`, with matrix
/// Frobenius norm uniform in `[0, max_norm]` and uniformly random direction.
pub fn random_in_span<R: Rng>(
    pair: &SymmetricPairModel,
    indices: &[usize],
    rng: &mut R,
    max_norm: f64,
) -> DMatrix<f64> {
    if indices.is_empty() {
        return DMatrix::zeros(pair.n(), pair.n());
    }
    let c = normal_vector(rng, indices.len());
    let m = pair.from_sub_coords(indices, &c);
    let norm = m.norm();
    let r: f64 = rng.random::<f64>() * max_norm;
    if norm == 0.0 {
        m
    } else {
        m * (r / norm)
    }
}

/// Random element of `span(indices)` with norm exactly `norm`.
pub fn random_direction<R: Rng>(
    pair: &SymmetricPairModel,
    indices: &[usize],
    rng: &mut R,
    norm: f64,
) -> DMatrix<f64> {
    let c = normal_vector(rng, indices.len());
    let m = pair.from_sub_coords(indices, &c);
    let n = m.norm();
    if n == 0.0 {
        m
    } else {
        m * (norm / n)
    }
}

pub fn random_q<R: Rng>(pair: &SymmetricPairModel, rng: &mut R, max_norm: f64) -> DMatrix<f64> {
    random_in_span(pair, &pair.q_indices(), rng, max_norm)
}

pub fn random_h<R: Rng>(pair: &SymmetricPairModel, rng: &mut R, max_norm: f64) -> DMatrix<f64> {
    random_in_span(pair, &pair.h_indices(), rng, max_norm)
}

pub fn random_algebra<R: Rng>(pair: &SymmetricPairModel, rng: &mut R, max_norm: f64) -> DMatrix<f64> {
    let all: Vec<usize> = (0..pair.dim()).collect();
    random_in_span(pair, &all, rng, max_norm)
}

/// Element of `G = SO(p,q)₀`: the exponential of a random `X ∈ g`, `‖X‖ ≤ 2`.
pub fn random_group_element<R: Rng>(pair: &SymmetricPairModel, rng: &mut R) -> Result<DMatrix<f64>> {
    expm_real(&random_algebra(pair, rng, GROUP_EXPONENT_NORM))
}

/// Element of `H₀`: the exponential of a random `Y ∈ h`, `‖Y‖ ≤ max_norm`.
pub fn random_h_group_element<R: Rng>(
    pair: &SymmetricPairModel,
    rng: &mut R,
    max_norm: f64,
) -> Result<DMatrix<f64>> {
    expm_real(&random_h(pair, rng, max_norm))
}

/// Index triples `(i, j, k)` with `ε_i = −ε_j`, `t_i = t_j = −t_k`: for these,
/// `u = e_i + e_j` is null and `u·(Je_k)ᵀ − e_k·(Ju)ᵀ` is a nilpotent element of `q`.
pub fn nilpotent_triples(pair: &SymmetricPairModel) -> Vec<(usize, usize, usize)> {
    let n = pair.n();
    let (e, t) = (pair.form_signs(), pair.tau_signs());
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if e[i] <= 0.0 || e[j] >= 0.0 || t[i] != t[j] {
                continue;
            }
            for k in 0..n {
                if t[k] == -t[i] {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// `u·(Jw)ᵀ − w·(Ju)ᵀ` for column vectors `u`, `w`.
fn rank_two_element(pair: &SymmetricPairModel, u: &DMatrix<f64>, w: &DMatrix<f64>) -> DMatrix<f64> {
    let j = pair.form_matrix();
    u * (&j * w).transpose() - w * (&j * u).transpose()
}

/// Random nonzero nilpotent element of `q`, conjugated by a random element of `H₀`;
/// `None` when the sign pattern admits no triple from [`nilpotent_triples`].
pub fn random_nilpotent_q<R: Rng>(pair: &SymmetricPairModel, rng: &mut R) -> Result<Option<DMatrix<f64>>> {
    let triples = nilpotent_triples(pair);
    if triples.is_empty() {
        return Ok(None);
    }
    let (i, j, k) = triples[rng.random_range(0..triples.len())];
    let n = pair.n();
    let mut u = DMatrix::zeros(n, 1);
    u[(i, 0)] = 1.0;
    u[(j, 0)] = 1.0;
    let mut w = DMatrix::zeros(n, 1);
    w[(k, 0)] = 1.0;
    let scale = 0.2 + 2.0 * rng.random::<f64>();
    let x = rank_two_element(pair, &u, &w) * scale;
    let h = random_h_group_element(pair, rng, 1.0)?;
    Ok(Some(pair.adjoint_action(&h, &x)))
}

/// `Z + N` with `N` from [`random_nilpotent_q`] and `Z` a random element of the
/// centralizer of `N` in `q`, so that the nilpotent part is nonzero.
pub fn random_jordan_mixed_q<R: Rng>(
    pair: &SymmetricPairModel,
    rng: &mut R,
    max_norm: f64,
) -> Result<Option<DMatrix<f64>>> {
    let Some(nil) = random_nilpotent_q(pair, rng)? else {
        return Ok(None);
    };
    let q_idx = pair.q_indices();
    let ker = null_space(&pair.ad_columns(&nil, &q_idx), TOL_RANK_REL)?;
    let c = normal_vector(rng, ker.ncols());
    let mut coeffs = vec![0.0; q_idx.len()];
    for (col, ck) in ker.column_iter().zip(&c) {
        for (a, v) in coeffs.iter_mut().zip(col.iter()) {
            *a += ck * v;
        }
    }
    let z = pair.from_sub_coords(&q_idx, &coeffs);
    let zn = z.norm();
    let z = if zn > 0.0 { z * (rng.random::<f64>() * max_norm / zn) } else { z };
    Ok(Some(z + nil))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric_pair::hyperboloid_pair;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = normal_vector(&mut rng_for(7, 3), 4);
        let b: Vec<f64> = normal_vector(&mut rng_for(7, 3), 4);
        let c: Vec<f64> = normal_vector(&mut rng_for(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_land_where_expected() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let mut rng = rng_for(1, 0);
        for _ in 0..20 {
            let x = random_q(&m, &mut rng, 3.0);
            assert!(x.norm() <= 3.0 + 1e-12);
            m.check_q(&x).unwrap();
            let g = random_group_element(&m, &mut rng).unwrap();
            m.check_group(&g).unwrap();
            let h = random_h_group_element(&m, &mut rng, 1.0).unwrap();
            assert!((m.tau(&h) - &h).norm() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_samples() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let mut rng = rng_for(2, 0);
        for _ in 0..10 {
            let x = random_nilpotent_q(&m, &mut rng).unwrap().unwrap();
            m.check_q(&x).unwrap();
            assert!((&x * &x * &x).norm() < 1e-10 * (1.0 + x.norm()).powi(3));
            let y = random_jordan_mixed_q(&m, &mut rng, 1.0).unwrap().unwrap();
            m.check_q(&y).unwrap();
        }
    }
}
