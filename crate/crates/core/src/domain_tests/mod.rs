//! Membership and regularity predicates on `q` and on pairs `(g, X)`.
//!
//! All spectral decisions use cluster means of the `ad_X` spectrum so that
//! Jordan blocks (whose computed eigenvalues scatter) are read correctly.

mod witness;

pub use witness::{higher_rank_collision_witness, CollisionWitness};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_core::{
    cluster_eigenvalues, eigenvalues, expm, jordan_chevalley_with, matrix_cos, singular_values,
    to_complex, EigenCluster, SquareMatrix, C64, I,
};
use crate::symmetric_pair::{CartanKind, CartanSubspaceData, RootClass, SymmetricPairModel};
use crate::tolerances::Tolerances;

/// Three-valued membership: boundary points lie inside the dead band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    Outside,
    Boundary,
}

impl Membership {
    pub fn is_inside(self) -> bool {
        self == Membership::Inside
    }

    fn from_bound(value: f64, bound: f64, margin: f64) -> Membership {
        if value < bound - margin {
            Membership::Inside
        } else if value > bound + margin {
            Membership::Outside
        } else {
            Membership::Boundary
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Singular,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub in_omega: Membership,
    pub in_omega_prime: Membership,
    pub dphi_regular_spectral: Regularity,
    pub dphi_regular_cosine: Regularity,
    /// Cluster means of the spectrum of `ad_X` within the margin of `π/2 + πZ`.
    pub offending_eigenvalues: Vec<C64>,
    /// Distance from the spectrum to `π/2 + πZ`.
    pub critical_distance: f64,
    pub cosine_sigma_min: f64,
    pub cosine_sigma_max: f64,
}

impl RegularityVerdict {
    /// Both routes gave a definite answer.
    pub fn is_decisive(&self) -> bool {
        self.dphi_regular_spectral != Regularity::Indeterminate
            && self.dphi_regular_cosine != Regularity::Indeterminate
    }

    pub fn routes_agree(&self) -> bool {
        self.dphi_regular_spectral == self.dphi_regular_cosine
    }
}

/// Outcome of the root-value exclusion test on a Cartan subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootTestOutcome {
    RegularSemisimple,
    Excluded,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootTestVerdict {
    pub outcome: RootTestOutcome,
    pub root_values: Vec<(RootClass, C64)>,
    /// Smallest distance from a root value to `(π/2)Z`.
    pub min_distance: f64,
}

impl RootTestVerdict {
    pub fn is_regular(&self) -> bool {
        self.outcome == RootTestOutcome::RegularSemisimple
    }
}

/// Distance from `z` to the nearest point of `offset + period·Z` on the real line.
fn distance_to_lattice(z: C64, offset: f64, period: f64) -> f64 {
    let k = ((z.re - offset) / period).round();
    (z - C64::new(offset + k * period, 0.0)).norm()
}

/// Predicates bound to a model and a set of tolerances.
#[derive(Clone, Copy, Debug)]
pub struct Predicates<'a> {
    pub pair: &'a SymmetricPairModel,
    pub tol: Tolerances,
}

impl<'a> Predicates<'a> {
    pub fn new(pair: &'a SymmetricPairModel) -> Self {
        Predicates {
            pair,
            tol: Tolerances::default(),
        }
    }

    pub fn with_tolerances(pair: &'a SymmetricPairModel, tol: Tolerances) -> Self {
        Predicates { pair, tol }
    }

    /// Raw spectrum and cluster means of `ad_X`, plus `‖ad_X‖`.
    pub fn ad_spectrum(&self, x: &DMatrix<f64>) -> Result<(Vec<C64>, Vec<EigenCluster>, f64)> {
        let ad = self.pair.ad_matrix(x);
        let norm = ad.norm();
        let eigs = eigenvalues(&to_complex(&ad))?;
        let clusters = cluster_eigenvalues(&eigs, self.tol.cluster(norm));
        Ok((eigs, clusters, norm))
    }

    fn omega_from_clusters(&self, clusters: &[EigenCluster], norm: f64) -> Membership {
        let tol_imag = self.tol.imag(norm);
        let r = clusters
            .iter()
            .filter(|c| c.mean.im.abs() <= tol_imag)
            .map(|c| c.mean.re.abs())
            .fold(0.0, f64::max);
        Membership::from_bound(r, FRAC_PI_2, self.tol.margin)
    }

    fn omega_prime_from_clusters(&self, clusters: &[EigenCluster]) -> Membership {
        let r = clusters.iter().map(|c| c.mean.re.abs()).fold(0.0, f64::max);
        Membership::from_bound(r, FRAC_PI_4, self.tol.margin)
    }

    /// `X ∈ ω`: every real eigenvalue of `ad_X` has modulus below `π/2`.
    pub fn in_omega(&self, x: &DMatrix<f64>) -> Result<Membership> {
        self.pair.check_q(x)?;
        let (_, clusters, norm) = self.ad_spectrum(x)?;
        Ok(self.omega_from_clusters(&clusters, norm))
    }

    /// `X ∈ ω′`: every eigenvalue of `ad_X` has `|Re λ| < π/4`.
    pub fn in_omega_prime(&self, x: &DMatrix<f64>) -> Result<Membership> {
        self.pair.check_q(x)?;
        let (_, clusters, _) = self.ad_spectrum(x)?;
        Ok(self.omega_prime_from_clusters(&clusters))
    }

    /// `A ∈ ω₀`: `|α(A)| < π/2` for every restricted root of a noncompact Cartan subspace.
    pub fn in_omega_zero(&self, a: &DMatrix<f64>) -> Result<Membership> {
        let split = self
            .pair
            .cartan_subspaces()?
            .into_iter()
            .find(|c| c.kind == CartanKind::Noncompact)
            .ok_or_else(|| {
                Error::Unsupported(format!("{} has no noncompact Cartan subspace", self.pair.family_tag()))
            })?;
        let coeffs = split.coefficients(self.pair, a)?;
        let r = split
            .roots
            .iter()
            .map(|root| root.evaluate(&coeffs).norm())
            .fold(0.0, f64::max);
        Ok(Membership::from_bound(r, FRAC_PI_2, self.tol.margin))
    }

    /// Spectral route: no eigenvalue of `ad_X` in `π/2 + πZ`.
    pub fn spectral_regularity(&self, x: &DMatrix<f64>) -> Result<(Regularity, Vec<C64>, f64)> {
        self.pair.check_q(x)?;
        let (raw, clusters, norm) = self.ad_spectrum(x)?;
        Ok(self.spectral_from(&raw, &clusters, norm))
    }

    fn spectral_from(&self, raw: &[C64], clusters: &[EigenCluster], norm: f64) -> (Regularity, Vec<C64>, f64) {
        let tol_hit = self.tol.imag(norm);
        let dist = |z: C64| distance_to_lattice(z, FRAC_PI_2, PI);
        let min_d = clusters.iter().map(|c| dist(c.mean)).fold(f64::INFINITY, f64::min);
        let offending: Vec<C64> = clusters
            .iter()
            .filter(|c| dist(c.mean) < self.tol.margin)
            .map(|c| c.mean)
            .collect();
        let hit = clusters.iter().any(|c| dist(c.mean) <= tol_hit);
        let raw_min = raw.iter().map(|&z| dist(z)).fold(f64::INFINITY, f64::min);
        let verdict = if hit {
            Regularity::Singular
        } else if min_d >= self.tol.margin && raw_min > tol_hit {
            Regularity::Regular
        } else {
            Regularity::Indeterminate
        };
        (verdict, offending, min_d)
    }

    /// Cosine route: `cos(ad_X)` restricted to `h` is injective.
    pub fn cosine_regularity(&self, x: &DMatrix<f64>) -> Result<(Regularity, f64, f64)> {
        self.pair.check_q(x)?;
        let ad = SquareMatrix::from_real(&self.pair.ad_matrix(x))?;
        let c = matrix_cos(&ad)?;
        let h = self.pair.h_indices();
        let block = DMatrix::from_fn(h.len(), h.len(), |i, j| c.as_matrix()[(h[i], h[j])]);
        let sv = singular_values(&block);
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        let verdict = if smin < self.tol.rank(smax) {
            Regularity::Singular
        } else {
            Regularity::Regular
        };
        Ok((verdict, smin, smax))
    }

    pub fn dphi_regular(&self, x: &DMatrix<f64>) -> Result<RegularityVerdict> {
        self.pair.check_q(x)?;
        let (raw, clusters, norm) = self.ad_spectrum(x)?;
        let (spectral, offending, critical_distance) = self.spectral_from(&raw, &clusters, norm);
        let (cosine, smin, smax) = self.cosine_regularity(x)?;
        Ok(RegularityVerdict {
            in_omega: self.omega_from_clusters(&clusters, norm),
            in_omega_prime: self.omega_prime_from_clusters(&clusters),
            dphi_regular_spectral: spectral,
            dphi_regular_cosine: cosine,
            offending_eigenvalues: offending,
            critical_distance,
            cosine_sigma_min: smin,
            cosine_sigma_max: smax,
        })
    }

    /// Jordan decomposition `X = X_s + X_n` inside `q`.
    pub fn jordan_in_q(&self, x: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        self.pair.check_q(x)?;
        let m = SquareMatrix::from_real(x)?;
        let jc = jordan_chevalley_with(&m, self.tol.cluster(x.norm()))?;
        let s = jc.semisimple.real_part();
        let n = jc.nilpotent.real_part();
        let bound = 1e-8 * (1.0 + x.norm());
        for (name, part) in [("semisimple", &s), ("nilpotent", &n)] {
            let in_g = self.pair.algebra_residual(part);
            let in_q = (self.pair.tau(part) + part).norm();
            if in_g > bound || in_q > bound {
                return Err(Error::Numerics(format!(
                    "{name} part escapes q (algebra residual {in_g:e}, tau residual {in_q:e})"
                )));
            }
        }
        Ok((s, n))
    }

    /// Root-value exclusion test on a Cartan subspace: a root is excluded when
    /// `Im α(X) = 0` and `Re α(X) ∈ (π/2)Z`; real roots only see the second
    /// condition and imaginary roots only the first.
    pub fn regular_semisimple_sigma_tau(
        &self,
        cartan: &CartanSubspaceData,
        x: &DMatrix<f64>,
    ) -> Result<RootTestVerdict> {
        let coeffs = cartan.coefficients(self.pair, x)?;
        let ad_norm = self.pair.ad_matrix(x).norm();
        let tol_hit = self.tol.imag(ad_norm);
        let mut values = Vec::new();
        let mut min_d = f64::INFINITY;
        let mut ambiguous = false;
        for root in &cartan.roots {
            let v = root.evaluate(&coeffs);
            let d = match root.class {
                RootClass::Real => distance_to_lattice(C64::new(v.re, 0.0), 0.0, FRAC_PI_2).max(v.im.abs()),
                RootClass::Imaginary => v.norm(),
                RootClass::Complex => distance_to_lattice(v, 0.0, FRAC_PI_2),
            };
            if d > tol_hit && d < self.tol.margin {
                ambiguous = true;
            }
            min_d = min_d.min(d);
            values.push((root.class, v));
        }
        let outcome = if min_d <= tol_hit {
            RootTestOutcome::Excluded
        } else if ambiguous {
            RootTestOutcome::Indeterminate
        } else {
            RootTestOutcome::RegularSemisimple
        };
        Ok(RootTestVerdict {
            outcome,
            root_values: values,
            min_distance: min_d,
        })
    }

    /// `g · exp(2iX) = exp(2iX) · τ(g)`.
    pub fn isotropy_condition(&self, g: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<bool> {
        self.pair.check_group(g)?;
        self.pair.check_q(x)?;
        let x2 = expm(&(to_complex(x) * (I * 2.0)))?;
        let gc = to_complex(g);
        let tg = to_complex(&self.pair.tau(g));
        let lhs = &gc * &x2 - &x2 * tg;
        let scale = 1.0 + g.norm() * x2.norm();
        Ok(lhs.norm() < self.tol.group_identity * scale)
    }

    /// `exp(4iY) = g · exp(4iX) · g⁻¹`.
    pub fn fourth_power_necessary(&self, g: &DMatrix<f64>, x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<bool> {
        self.pair.check_group(g)?;
        self.pair.check_q(x)?;
        self.pair.check_q(y)?;
        Ok(self.fourth_power_residual(g, x, y)?.0)
    }

    pub(crate) fn fourth_power_residual(
        &self,
        g: &DMatrix<f64>,
        x: &DMatrix<f64>,
        y: &DMatrix<f64>,
    ) -> Result<(bool, f64)> {
        let x4 = expm(&(to_complex(x) * (I * 4.0)))?;
        let y4 = expm(&(to_complex(y) * (I * 4.0)))?;
        let gc = to_complex(g);
        let gi = to_complex(&self.pair.group_inverse(g));
        let diff = (&y4 - &gc * &x4 * &gi).norm();
        let scale = 1.0 + y4.norm() + g.norm() * x4.norm() * gi.norm();
        Ok((diff < self.tol.group_identity * scale, diff))
    }

    /// `E(X) = ½ B(X, X)`.
    pub fn energy(&self, x: &DMatrix<f64>) -> Result<f64> {
        self.pair.check_q(x)?;
        Ok(0.5 * self.pair.killing(x, x))
    }
}

pub fn in_omega(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<Membership> {
    Predicates::new(pair).in_omega(x)
}

pub fn in_omega_prime(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<Membership> {
    Predicates::new(pair).in_omega_prime(x)
}

pub fn in_omega_zero(pair: &SymmetricPairModel, a: &DMatrix<f64>) -> Result<Membership> {
    Predicates::new(pair).in_omega_zero(a)
}

pub fn dphi_regular(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<RegularityVerdict> {
    Predicates::new(pair).dphi_regular(x)
}

pub fn jordan_in_q(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    Predicates::new(pair).jordan_in_q(x)
}

pub fn regular_semisimple_sigma_tau(
    pair: &SymmetricPairModel,
    cartan: &CartanSubspaceData,
    x: &DMatrix<f64>,
) -> Result<RootTestVerdict> {
    Predicates::new(pair).regular_semisimple_sigma_tau(cartan, x)
}

pub fn isotropy_condition(pair: &SymmetricPairModel, g: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<bool> {
    Predicates::new(pair).isotropy_condition(g, x)
}

pub fn fourth_power_necessary(
    pair: &SymmetricPairModel,
    g: &DMatrix<f64>,
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
) -> Result<bool> {
    Predicates::new(pair).fourth_power_necessary(g, x, y)
}

pub fn energy(pair: &SymmetricPairModel, x: &DMatrix<f64>) -> Result<f64> {
    Predicates::new(pair).energy(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric_pair::{build_so_pair, hyperboloid_pair};

    fn boost(m: &SymmetricPairModel) -> DMatrix<f64> {
        m.noncompact_cartan().unwrap().unit_generator().unwrap()
    }

    #[test]
    fn omega_thresholds() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let a = boost(&m);
        let z = DMatrix::zeros(5, 5);
        assert_eq!(in_omega(&m, &z).unwrap(), Membership::Inside);
        assert_eq!(in_omega(&m, &(&a * 1.5)).unwrap(), Membership::Inside);
        assert_eq!(in_omega(&m, &(&a * 1.6)).unwrap(), Membership::Outside);
        assert_eq!(in_omega(&m, &(&a * FRAC_PI_2)).unwrap(), Membership::Boundary);
        assert_eq!(in_omega_prime(&m, &(&a * 0.7)).unwrap(), Membership::Inside);
        assert_eq!(in_omega_prime(&m, &(&a * 0.8)).unwrap(), Membership::Outside);
        let t = m.compact_cartan().unwrap().generators[0].matrix.clone();
        assert_eq!(in_omega_prime(&m, &(&t * 25.0)).unwrap(), Membership::Inside);
        assert_eq!(in_omega_zero(&m, &(&a * 1.5)).unwrap(), Membership::Inside);
        assert_eq!(in_omega_zero(&m, &z).unwrap(), Membership::Inside);
        assert!(in_omega_zero(&m, &t).is_err());
    }

    #[test]
    fn rejects_elements_outside_q() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let h = m.generator(0, 1).unwrap();
        assert!(matches!(in_omega(&m, &h), Err(Error::NotInSubspace { .. })));
    }

    #[test]
    fn nilpotent_is_inside_and_regular() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let n = m.generator(0, 4).unwrap() + m.generator(3, 4).unwrap();
        assert!((&n * &n * &n).norm() < 1e-14);
        assert_eq!(in_omega(&m, &n).unwrap(), Membership::Inside);
        let v = dphi_regular(&m, &n).unwrap();
        assert_eq!(v.dphi_regular_spectral, Regularity::Regular);
        assert_eq!(v.dphi_regular_cosine, Regularity::Regular);
    }

    #[test]
    fn critical_boost_is_singular_both_ways() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let a = boost(&m);
        let v = dphi_regular(&m, &(&a * FRAC_PI_2)).unwrap();
        assert_eq!(v.dphi_regular_spectral, Regularity::Singular);
        assert_eq!(v.dphi_regular_cosine, Regularity::Singular);
        assert!(!v.offending_eigenvalues.is_empty());
        let v = dphi_regular(&m, &DMatrix::zeros(5, 5)).unwrap();
        assert_eq!(v.dphi_regular_spectral, Regularity::Regular);
        assert_eq!(v.dphi_regular_cosine, Regularity::Regular);
    }

    #[test]
    fn root_test_examples() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let a = m.noncompact_cartan().unwrap();
        let a0 = a.unit_generator().unwrap();
        let p = Predicates::new(&m);
        assert_eq!(
            p.regular_semisimple_sigma_tau(&a, &DMatrix::zeros(5, 5)).unwrap().outcome,
            RootTestOutcome::Excluded
        );
        assert!(p.regular_semisimple_sigma_tau(&a, &(&a0 * 0.7)).unwrap().is_regular());
        assert_eq!(
            p.regular_semisimple_sigma_tau(&a, &(&a0 * FRAC_PI_2)).unwrap().outcome,
            RootTestOutcome::Excluded
        );
        assert!(p.regular_semisimple_sigma_tau(&a, &m.generator(1, 4).unwrap()).is_err());
    }

    #[test]
    fn isotropy_and_fourth_power_trivial_cases() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let a = boost(&m) * 0.4;
        let id = DMatrix::identity(5, 5);
        assert!(isotropy_condition(&m, &id, &a).unwrap());
        assert!(fourth_power_necessary(&m, &id, &a, &a).unwrap());
        // exp of an h-element commuting with the boost B_15: rotation in (2,3).
        let h = crate::matrix_core::expm_real(&(m.generator(1, 2).unwrap() * 0.8)).unwrap();
        assert!(isotropy_condition(&m, &h, &a).unwrap());
    }

    #[test]
    fn energy_signs() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let a0 = boost(&m);
        let t = m.compact_cartan().unwrap().generators[0].matrix.clone();
        let c = energy(&m, &a0).unwrap();
        assert!(c > 0.0);
        assert!((energy(&m, &(&a0 * 1.3)).unwrap() - c * 1.69).abs() < 1e-12);
        assert!(energy(&m, &t).unwrap() <= 0.0);
        assert_eq!(energy(&m, &DMatrix::zeros(5, 5)).unwrap(), 0.0);
    }

    #[test]
    fn jordan_parts_in_q() {
        let m = build_so_pair(3, 2, &[1, 1, -1, -1, -1]).unwrap();
        let s = m.generator(0, 3).unwrap() * 0.9;
        let n = m.generator(1, 2).unwrap() + m.generator(1, 4).unwrap();
        assert!((&s * &n - &n * &s).norm() < 1e-14);
        let (xs, xn) = jordan_in_q(&m, &(&s + &n)).unwrap();
        assert!((xs - &s).norm() < 1e-8);
        assert!((xn - &n).norm() < 1e-8);
    }
}
