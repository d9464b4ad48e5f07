use nalgebra::DMatrix;

use super::{Membership, Predicates};
use crate::error::{Error, Result};
use crate::matrix_core::{expm, to_complex, I};
use crate::root_lattice::gamma_candidates;
use crate::symmetric_pair::SymmetricPairModel;

/// Two points of `ω` with the same image under `X ↦ exp(iX)` but different energies.
#[derive(Clone, Debug)]
pub struct CollisionWitness {
    pub family_tag: String,
    pub x: DMatrix<f64>,
    pub gamma: DMatrix<f64>,
    pub x_plus_gamma: DMatrix<f64>,
    /// `‖exp(i(X+γ)) − exp(iX)‖`.
    pub image_difference: f64,
    pub energy_x: f64,
    pub energy_x_plus_gamma: f64,
    pub omega_x: Membership,
    pub omega_x_plus_gamma: Membership,
    pub omega_prime_x_plus_gamma: Membership,
}

impl CollisionWitness {
    pub fn energy_gap(&self) -> f64 {
        (self.energy_x_plus_gamma - self.energy_x).abs()
    }
}

const COMPACT_SCALES: [f64; 6] = [0.5, 0.3, 0.7, 1.0, 0.2, 1.2];

/// Builds `X` on the compact part of a mixed Cartan subspace and `γ` from a
/// coroot on its noncompact part. Fails with [`Error::Construction`] when no
/// admissible pair exists (for instance when the mixed Cartan subspace has no
/// complex roots).
pub fn higher_rank_collision_witness(pair: &SymmetricPairModel) -> Result<CollisionWitness> {
    let preds = Predicates::new(pair);
    let c = pair.mixed_cartan()?;
    let compact = c.compact_part();
    if compact.is_empty() {
        return Err(Error::Construction("mixed Cartan subspace has no compact part".into()));
    }
    let k = &c.generators[compact[0]].matrix;
    let candidates = gamma_candidates(pair)?;
    if candidates.is_empty() {
        return Err(Error::Construction(format!(
            "no lattice element in the noncompact part of the mixed Cartan subspace of {}",
            pair.family_tag()
        )));
    }
    for cand in &candidates {
        let gamma = &cand.gamma.matrix;
        for &s in &COMPACT_SCALES {
            let x = k * s;
            let y = &x + gamma;
            let omega_x = preds.in_omega(&x)?;
            let omega_y = preds.in_omega(&y)?;
            if !omega_x.is_inside() || !omega_y.is_inside() {
                continue;
            }
            let ex = expm(&(to_complex(&x) * I))?;
            let ey = expm(&(to_complex(&y) * I))?;
            let diff = (ey - ex).norm();
            if diff > 1e-10 {
                continue;
            }
            let energy_x = preds.energy(&x)?;
            let energy_y = preds.energy(&y)?;
            if (energy_y - energy_x).abs() <= 1e-6 {
                continue;
            }
            let omega_prime_y = preds.in_omega_prime(&y)?;
            if omega_prime_y == Membership::Inside {
                continue;
            }
            return Ok(CollisionWitness {
                family_tag: pair.family_tag().to_string(),
                x,
                gamma: gamma.clone(),
                x_plus_gamma: y,
                image_difference: diff,
                energy_x,
                energy_x_plus_gamma: energy_y,
                omega_x,
                omega_x_plus_gamma: omega_y,
                omega_prime_x_plus_gamma: omega_prime_y,
            });
        }
    }
    Err(Error::Construction(format!(
        "no admissible collision pair found for {}",
        pair.family_tag()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric_pair::build_so_pair;

    #[test]
    fn lorentz_witness_exists() {
        let pair = build_so_pair(3, 1, &[1, 1, -1, -1]).unwrap();
        let w = higher_rank_collision_witness(&pair).unwrap();
        assert!(w.image_difference < 1e-10);
        assert!(w.energy_gap() > 1e-6);
        assert_eq!(w.omega_x, Membership::Inside);
        assert_eq!(w.omega_x_plus_gamma, Membership::Inside);
        assert_eq!(w.omega_prime_x_plus_gamma, Membership::Outside);
    }

    #[test]
    fn split_rank_two_has_no_witness() {
        let pair = build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap();
        assert!(matches!(higher_rank_collision_witness(&pair), Err(Error::Construction(_))));
    }
}
