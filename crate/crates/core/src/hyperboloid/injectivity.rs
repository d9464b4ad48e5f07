use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain_tests::{CollisionWitness, Membership, Predicates};
use crate::error::{Error, Result};
use crate::matrix_core::{expm, to_complex, C64, I};
use crate::sampling::{random_group_element, random_h_group_element, random_q, rng_for};
use crate::symmetric_pair::SymmetricPairModel;
use crate::tolerances::{TOL_CERTIFICATE, TOL_COLLISION};

/// Norm bound for sampled `X ∈ q`.
pub const TRIAL_MAX_NORM: f64 = 3.0;
/// Norm bound for the exponent of sampled `h ∈ H`.
const H_EXPONENT_NORM: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialDomain {
    /// `Ω`, built from `ω = {X : real ad-eigenvalues below π/2}`.
    Omega,
    /// `Ω′`, built from `ω′ = {X : |Re λ| < π/4}`.
    OmegaPrime,
}

impl std::str::FromStr for TrialDomain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(TrialDomain::Omega),
            "omega-prime" => Ok(TrialDomain::OmegaPrime),
            other => Err(Error::InvalidArgument(format!("unknown domain {other:?}"))),
        }
    }
}

/// How the second sample of a pair is produced from the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleStrategy {
    Independent,
    /// `(g·h⁻¹, Ad_h X)` for random `h ∈ H`.
    Equivalent,
    /// `(g, X + k·(π/2)·A₀)` with `k ∈ {±1, ±2}`.
    CartanShift,
    /// `(g, −X)`.
    Flip,
}

const STRATEGIES: [SampleStrategy; 4] = [
    SampleStrategy::Independent,
    SampleStrategy::Equivalent,
    SampleStrategy::CartanShift,
    SampleStrategy::Flip,
];

/// Plücker coordinates of the columns of `g · exp(iX)` indexed by the smaller
/// of the `τ = −1` and `τ = +1` blocks. For the hyperboloid model this is
/// `g · exp(iX) · x₀`.
pub fn polar_image(pair: &SymmetricPairModel, g: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<Vec<C64>> {
    let m = to_complex(g) * expm(&(to_complex(x) * I))?;
    let minus: Vec<usize> = (0..pair.n()).filter(|&j| pair.tau_signs()[j] < 0).collect();
    let plus: Vec<usize> = (0..pair.n()).filter(|&j| pair.tau_signs()[j] > 0).collect();
    let cols = if minus.len() <= plus.len() { minus } else { plus };
    let sub = m.select_columns(cols.iter());
    let k = cols.len();
    let mut out = Vec::new();
    let mut rows: Vec<usize> = (0..k).collect();
    let n = pair.n();
    loop {
        let minor = sub.select_rows(rows.iter());
        out.push(if k == 1 { minor[(0, 0)] } else { minor.determinant() });
        // next k-subset in lexicographic order
        let mut i = k;
        while i > 0 && rows[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        rows[i - 1] += 1;
        for j in i..k {
            rows[j] = rows[j - 1] + 1;
        }
    }
    Ok(out)
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `‖τ(h) − h‖ + ‖hᵀJh − J‖` for `h = g₂⁻¹ g₁`.
    pub h_residual: f64,
    /// `‖Y − Ad_h X‖`.
    pub adjoint_residual: f64,
    pub passed: bool,
}

/// Checks whether `[g₁, X] = [g₂, Y]` through `h = g₂⁻¹ g₁ ∈ H` and `Y = Ad_h X`.
pub fn certificate(
    pair: &SymmetricPairModel,
    g1: &DMatrix<f64>,
    x: &DMatrix<f64>,
    g2: &DMatrix<f64>,
    y: &DMatrix<f64>,
) -> Certificate {
    let h = pair.group_inverse(g2) * g1;
    let h_residual = (pair.tau(&h) - &h).norm() + pair.group_residual(&h);
    let adjoint_residual = (y - pair.adjoint_action(&h, x)).norm();
    let passed = h_residual < TOL_CERTIFICATE * (1.0 + h.norm_squared())
        && adjoint_residual < TOL_CERTIFICATE * (1.0 + y.norm());
    Certificate {
        h_residual,
        adjoint_residual,
        passed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub image_difference: f64,
    pub collided: bool,
    pub certificate: Certificate,
    pub x_in_domain: Membership,
    pub y_in_domain: Membership,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub family_tag: String,
    pub domain: TrialDomain,
    pub n_samples: usize,
    pub seed: u64,
    pub max_norm: f64,
    pub accepted: usize,
    pub rejected_by_domain: usize,
    pub numerical_failures: usize,
    pub filtered_by_fourth_power: usize,
    /// Pairs the fourth-power filter discarded that nevertheless collided.
    pub filter_violations: usize,
    pub collisions: usize,
    pub equivalent_collisions: usize,
    pub nonequivalent_collisions: usize,
    /// Accepted pairs built by the equivalence strategy.
    pub constructed_equivalent: usize,
    /// Of those, the ones that collided with a passing certificate.
    pub constructed_equivalent_certified: usize,
    /// Sample indices of the first nonequivalent collisions.
    pub nonequivalent_examples: Vec<usize>,
    pub witness: Option<WitnessOutcome>,
}

#[derive(Clone, Copy, Debug, Default)]
struct SampleOutcome {
    rejected: bool,
    filtered: bool,
    collided: bool,
    certified: bool,
    equivalent_strategy: bool,
}

struct TrialContext<'a> {
    pair: &'a SymmetricPairModel,
    preds: Predicates<'a>,
    domain: TrialDomain,
    a0: Option<DMatrix<f64>>,
    max_norm: f64,
}

impl TrialContext<'_> {
    fn membership(&self, x: &DMatrix<f64>) -> Result<Membership> {
        match self.domain {
            TrialDomain::Omega => self.preds.in_omega(x),
            TrialDomain::OmegaPrime => self.preds.in_omega_prime(x),
        }
    }

    fn sample(&self, seed: u64, index: usize) -> Result<SampleOutcome> {
        let pair = self.pair;
        let mut rng = rng_for(seed, index as u64);
        let strategy = STRATEGIES[index % STRATEGIES.len()];
        let g1 = random_group_element(pair, &mut rng)?;
        let x = random_q(pair, &mut rng, self.max_norm);
        let (g2, y) = match strategy {
            SampleStrategy::Independent => (random_group_element(pair, &mut rng)?, random_q(pair, &mut rng, self.max_norm)),
            SampleStrategy::Equivalent => {
                let h = random_h_group_element(pair, &mut rng, H_EXPONENT_NORM)?;
                (&g1 * pair.group_inverse(&h), pair.adjoint_action(&h, &x))
            }
            SampleStrategy::CartanShift => {
                let k = [-2.0, -1.0, 1.0, 2.0][rng.random_range(0..4)];
                match &self.a0 {
                    Some(a0) => (g1.clone(), &x + a0 * (k * FRAC_PI_2)),
                    None => (g1.clone(), -&x),
                }
            }
            SampleStrategy::Flip => (g1.clone(), -&x),
        };
        let mut out = SampleOutcome {
            equivalent_strategy: strategy == SampleStrategy::Equivalent,
            ..Default::default()
        };
        if !self.membership(&x)?.is_inside() || !self.membership(&y)?.is_inside() {
            out.rejected = true;
            return Ok(out);
        }
        let g = pair.group_inverse(&g2) * &g1;
        out.filtered = !self.preds.fourth_power_necessary(&g, &x, &y)?;
        let i1 = polar_image(pair, &g1, &x)?;
        let i2 = polar_image(pair, &g2, &y)?;
        out.collided = distance(&i1, &i2) < TOL_COLLISION * (1.0 + norm(&i1));
        if out.collided {
            out.certified = certificate(pair, &g1, &x, &g2, &y).passed;
        }
        Ok(out)
    }
}

pub fn injectivity_trial(
    pair: &SymmetricPairModel,
    domain: TrialDomain,
    n_samples: usize,
    seed: u64,
) -> Result<TrialReport> {
    injectivity_trial_with_witness(pair, domain, n_samples, seed, TRIAL_MAX_NORM, None)
}

/// Samples `n_samples` pairs `([g₁,X], [g₂,Y])`, cycling through the
/// [`SampleStrategy`] variants by index, and counts collisions of the polar
/// images. The witness pair, if given, is evaluated on its own and does not
/// enter the counts.
pub fn injectivity_trial_with_witness(
    pair: &SymmetricPairModel,
    domain: TrialDomain,
    n_samples: usize,
    seed: u64,
    max_norm: f64,
    witness: Option<&CollisionWitness>,
) -> Result<TrialReport> {
    if domain == TrialDomain::Omega && pair.rank() != 1 {
        return Err(Error::Unsupported(format!(
            "Ω trials need a rank-one model; {} has rank {}",
            pair.family_tag(),
            pair.rank()
        )));
    }
    let a0 = pair.noncompact_cartan().ok().and_then(|c| c.unit_generator());
    let ctx = TrialContext {
        pair,
        preds: Predicates::new(pair),
        domain,
        a0,
        max_norm,
    };
    let outcomes: Vec<Result<SampleOutcome>> = (0..n_samples).into_par_iter().map(|i| ctx.sample(seed, i)).collect();

    let mut report = TrialReport {
        family_tag: pair.family_tag().to_string(),
        domain,
        n_samples,
        seed,
        max_norm,
        accepted: 0,
        rejected_by_domain: 0,
        numerical_failures: 0,
        filtered_by_fourth_power: 0,
        filter_violations: 0,
        collisions: 0,
        equivalent_collisions: 0,
        nonequivalent_collisions: 0,
        constructed_equivalent: 0,
        constructed_equivalent_certified: 0,
        nonequivalent_examples: Vec::new(),
        witness: None,
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        let o = match o {
            Ok(o) => o,
            Err(_) => {
                report.numerical_failures += 1;
                continue;
            }
        };
        if o.rejected {
            report.rejected_by_domain += 1;
            continue;
        }
        report.accepted += 1;
        if o.filtered {
            report.filtered_by_fourth_power += 1;
            if o.collided {
                report.filter_violations += 1;
            }
        }
        if o.equivalent_strategy {
            report.constructed_equivalent += 1;
            if o.collided && o.certified {
                report.constructed_equivalent_certified += 1;
            }
        }
        if o.collided {
            report.collisions += 1;
            if o.certified {
                report.equivalent_collisions += 1;
            } else {
                report.nonequivalent_collisions += 1;
                if report.nonequivalent_examples.len() < 10 {
                    report.nonequivalent_examples.push(i);
                }
            }
        }
    }
    if let Some(w) = witness {
        let e = DMatrix::identity(pair.n(), pair.n());
        let i1 = polar_image(pair, &e, &w.x)?;
        let i2 = polar_image(pair, &e, &w.x_plus_gamma)?;
        let d = distance(&i1, &i2);
        report.witness = Some(WitnessOutcome {
            image_difference: d,
            collided: d < TOL_COLLISION * (1.0 + norm(&i1)),
            certificate: certificate(pair, &e, &w.x, &e, &w.x_plus_gamma),
            x_in_domain: ctx.membership(&w.x)?,
            y_in_domain: ctx.membership(&w.x_plus_gamma)?,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain_tests::higher_rank_collision_witness;
    use crate::hyperboloid::polar_map_point;
    use crate::symmetric_pair::{build_so_pair, hyperboloid_pair};

    #[test]
    fn image_matches_polar_map_on_hyperboloid() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let mut rng = rng_for(5, 0);
        let g = random_group_element(&m, &mut rng).unwrap();
        let x = random_q(&m, &mut rng, 1.0);
        let a = polar_image(&m, &g, &x).unwrap();
        let b = polar_map_point(&m, &g, &x).unwrap();
        assert!(distance(&a, b.coords()) < 1e-12);
    }

    #[test]
    fn plucker_count() {
        let m = build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap();
        let e = DMatrix::identity(4, 4);
        assert_eq!(polar_image(&m, &e, &DMatrix::zeros(4, 4)).unwrap().len(), 6);
    }

    #[test]
    fn small_trial_is_clean_and_deterministic() {
        let m = hyperboloid_pair(2, 2).unwrap();
        let a = injectivity_trial(&m, TrialDomain::Omega, 200, 7).unwrap();
        let b = injectivity_trial(&m, TrialDomain::Omega, 200, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.nonequivalent_collisions, 0);
        assert_eq!(a.filter_violations, 0);
        assert!(a.constructed_equivalent > 0);
        assert_eq!(a.constructed_equivalent, a.constructed_equivalent_certified);
    }

    #[test]
    fn omega_needs_rank_one() {
        let m = build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap();
        assert!(injectivity_trial(&m, TrialDomain::Omega, 10, 1).is_err());
    }

    #[test]
    fn witness_collides_without_certificate() {
        let m = build_so_pair(3, 1, &[1, 1, -1, -1]).unwrap();
        let w = higher_rank_collision_witness(&m).unwrap();
        let r = injectivity_trial_with_witness(&m, TrialDomain::OmegaPrime, 40, 3, TRIAL_MAX_NORM, Some(&w)).unwrap();
        let wo = r.witness.unwrap();
        assert!(wo.collided);
        assert!(!wo.certificate.passed);
        assert_eq!(r.nonequivalent_collisions, 0);
    }
}
