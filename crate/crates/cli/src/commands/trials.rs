use serde_json::json;
use ssx_core::domain_tests::{higher_rank_collision_witness, Membership};
use ssx_core::hyperboloid::{injectivity_trial_with_witness, TrialDomain};
use ssx_core::symmetric_pair::SymmetricPairModel;
use ssx_core::tolerances::Tolerances;

use super::matrix_rows;
use crate::report::{Claim, Outcome};
use crate::{CliResult, DomainArg};

pub fn injectivity(
    pair: &SymmetricPairModel,
    domain: DomainArg,
    samples: usize,
    max_norm: f64,
    inject_witness: bool,
    seed: u64,
) -> CliResult<Outcome> {
    let domain = match domain {
        DomainArg::Omega => TrialDomain::Omega,
        DomainArg::OmegaPrime => TrialDomain::OmegaPrime,
    };
    let witness = if inject_witness {
        Some(higher_rank_collision_witness(pair)?)
    } else {
        None
    };
    let r = injectivity_trial_with_witness(pair, domain, samples, seed, max_norm, witness.as_ref())?;
    let mut claims = vec![
        Claim::new(
            "no-nonequivalent-collisions",
            "no two sampled points with equal images fail the equivalence certificate",
            r.nonequivalent_collisions == 0,
            format!(
                "{} collisions, {} certified equivalent, {} not, over {} accepted pairs",
                r.collisions, r.equivalent_collisions, r.nonequivalent_collisions, r.accepted
            ),
        ),
        Claim::new(
            "constructed-equivalent-pairs-certified",
            "pairs built as (g·h⁻¹, Ad_h X) collide and pass the certificate",
            r.constructed_equivalent_certified == r.constructed_equivalent,
            format!("{}/{} certified", r.constructed_equivalent_certified, r.constructed_equivalent),
        ),
        Claim::new(
            "fourth-power-filter-consistent",
            "no collision is rejected by the necessary fourth-power condition",
            r.filter_violations == 0,
            format!("{} filtered pairs, {} violations", r.filtered_by_fourth_power, r.filter_violations),
        ),
    ];
    if let Some(w) = &r.witness {
        claims.push(Claim::new(
            "witness-collides-without-certificate",
            "the injected witness pair has equal images and fails the equivalence certificate",
            w.collided && !w.certificate.passed,
            format!(
                "image difference {:.3e}, h residual {:.3e}",
                w.image_difference, w.certificate.h_residual
            ),
        ));
    }
    Ok(Outcome {
        claims,
        data: serde_json::to_value(&r)?,
        rows: Vec::new(),
    })
}

pub fn collision_witness(pair: &SymmetricPairModel, tol: Tolerances) -> CliResult<Outcome> {
    let w = higher_rank_collision_witness(pair)?;
    let margin = tol.margin;
    let claims = vec![
        Claim::new(
            "exp-images-coincide",
            "exp(i(X+γ)) = exp(iX) within 1e-10",
            w.image_difference < 1e-10,
            format!("difference {:.3e}", w.image_difference),
        ),
        Claim::new(
            "both-points-in-omega",
            "X and X+γ both lie in ω",
            w.omega_x == Membership::Inside && w.omega_x_plus_gamma == Membership::Inside,
            format!("X: {:?}, X+γ: {:?}", w.omega_x, w.omega_x_plus_gamma),
        ),
        Claim::new(
            "energies-differ",
            "E(X) and E(X+γ) differ by more than 1e-6",
            w.energy_gap() > 1e-6,
            format!("E(X) = {:.6}, E(X+γ) = {:.6}", w.energy_x, w.energy_x_plus_gamma),
        ),
        Claim::new(
            "shifted-point-outside-omega-prime",
            "X+γ is not in ω′",
            w.omega_prime_x_plus_gamma != Membership::Inside,
            format!("{:?} (margin {margin:.1e})", w.omega_prime_x_plus_gamma),
        ),
    ];
    Ok(Outcome {
        claims,
        data: json!({
            "family": w.family_tag,
            "x": matrix_rows(&w.x),
            "gamma": matrix_rows(&w.gamma),
            "x_plus_gamma": matrix_rows(&w.x_plus_gamma),
            "image_difference": w.image_difference,
            "energy_x": w.energy_x,
            "energy_x_plus_gamma": w.energy_x_plus_gamma,
        }),
        rows: Vec::new(),
    })
}
