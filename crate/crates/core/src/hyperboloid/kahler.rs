use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::levi::{epsilon, hermitian_signature, SignatureTriple};
use super::{f_invariant, QuadricPoint};
use crate::error::{Error, Result};
use crate::matrix_core::{null_space, C64};
use crate::symmetric_pair::{hyperboloid_pair, SymmetricPairModel};
use crate::tolerances::{TOL_ORBIT_BAND, TOL_RANK_REL};

/// Closed-orbit region of `D = {F < 1}` together with its slice parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EnergyRegion {
    /// `−1 < F < 1`, `t = arccos √((1−F)/2) ∈ (0, π/2)`.
    P { t: f64 },
    /// `F < −1`, `u = |s| = ½ arccosh(−F)`.
    Q { u: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Potential {
    /// `Ẽ` itself.
    Energy,
    /// `√|Ẽ|`.
    SqrtAbsEnergy,
}

/// The transported energy `Ẽ = G(F)`: `c_p t²` on the P-region and `−c_q u²`
/// on the Q-region, where `c_p = E(A₀)` and `c_q = −E(K)` for the boost `A₀`
/// and rotation `K` generating the two slices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    pub p: usize,
    pub q: usize,
    pub c_p: f64,
    pub c_q: f64,
}

impl EnergyProfile {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        EnergyProfile::from_pair(&hyperboloid_pair(p, q)?)
    }

    pub fn from_pair(pair: &SymmetricPairModel) -> Result<Self> {
        super::check_hyperboloid_model(pair)?;
        let n = pair.n();
        if pair.q_sig() < 2 {
            return Err(Error::InvalidArgument("the Q-region needs q ≥ 2".into()));
        }
        let a0 = pair.generator(0, n - 1)?;
        let k = pair.generator(n - 2, n - 1)?;
        Ok(EnergyProfile {
            p: pair.p_sig(),
            q: pair.q_sig(),
            c_p: 0.5 * pair.killing(&a0, &a0),
            c_q: -0.5 * pair.killing(&k, &k),
        })
    }

    pub fn region_of_f(&self, f: f64, band: f64) -> Result<EnergyRegion> {
        if f < -1.0 - band {
            Ok(EnergyRegion::Q { u: 0.5 * (-f).acosh() })
        } else if f > -1.0 + band && f < 1.0 - band {
            Ok(EnergyRegion::P {
                t: ((1.0 - f) / 2.0).sqrt().acos(),
            })
        } else {
            Err(Error::RegionBoundary(format!(
                "F = {f} is not in a closed-orbit region of D"
            )))
        }
    }

    pub fn region(&self, pt: &QuadricPoint) -> Result<EnergyRegion> {
        if pt.p() != self.p || pt.q() != self.q {
            return Err(Error::InvalidArgument("point and profile dimensions differ".into()));
        }
        self.region_of_f(f_invariant(pt), TOL_ORBIT_BAND * (1.0 + pt.norm_sq()))
    }

    /// Value of the chosen potential as a function of `F` alone.
    pub fn potential_from_f(&self, f: f64, potential: Potential) -> Result<f64> {
        let region = self.region_of_f(f, 0.0)?;
        Ok(match (region, potential) {
            (EnergyRegion::P { t }, Potential::Energy) => self.c_p * t * t,
            (EnergyRegion::Q { u }, Potential::Energy) => -self.c_q * u * u,
            (EnergyRegion::P { t }, Potential::SqrtAbsEnergy) => self.c_p.sqrt() * t,
            (EnergyRegion::Q { u }, Potential::SqrtAbsEnergy) => self.c_q.sqrt() * u,
        })
    }

    pub fn energy(&self, pt: &QuadricPoint) -> Result<f64> {
        Ok(match self.region(pt)? {
            EnergyRegion::P { t } => self.c_p * t * t,
            EnergyRegion::Q { u } => -self.c_q * u * u,
        })
    }

    /// `(G′(F), G″(F))` for the potential in the given region.
    pub fn derivatives(&self, region: EnergyRegion, potential: Potential) -> (f64, f64) {
        match region {
            EnergyRegion::P { t } => {
                let s2 = (2.0 * t).sin();
                let c2 = (2.0 * t).cos();
                match potential {
                    Potential::Energy => (
                        self.c_p * t / s2,
                        self.c_p * (s2 - 2.0 * t * c2) / (2.0 * s2.powi(3)),
                    ),
                    Potential::SqrtAbsEnergy => {
                        let d1 = 1.0 / (2.0 * s2);
                        let d2 = -2.0 * c2 * d1 / (2.0 * s2 * s2);
                        let k = self.c_p.sqrt();
                        (k * d1, k * d2)
                    }
                }
            }
            EnergyRegion::Q { u } => {
                let s2 = (2.0 * u).sinh();
                let c2 = (2.0 * u).cosh();
                match potential {
                    Potential::Energy => (
                        self.c_q * u / s2,
                        -self.c_q * (s2 - 2.0 * u * c2) / (2.0 * s2.powi(3)),
                    ),
                    Potential::SqrtAbsEnergy => {
                        let d1 = -1.0 / (2.0 * s2);
                        let d2 = 2.0 * c2 * d1 / (2.0 * s2 * s2);
                        let k = self.c_q.sqrt();
                        (k * d1, k * d2)
                    }
                }
            }
        }
    }

    /// Ambient complex Hessian `G′ diag(ε) + G″ b* b` with `b = (ε_j z̄_j)`.
    pub fn ambient_hessian(&self, pt: &QuadricPoint, potential: Potential) -> Result<DMatrix<C64>> {
        let (d1, d2) = self.derivatives(self.region(pt)?, potential);
        let eps = epsilon(pt);
        let z = pt.coords();
        let n = pt.n();
        Ok(DMatrix::from_fn(n, n, |j, k| {
            let diag = if j == k { C64::new(d1 * eps[j], 0.0) } else { C64::new(0.0, 0.0) };
            diag + z[j] * z[k].conj() * (d2 * eps[j] * eps[k])
        }))
    }

    /// Complex Hessian restricted to `T_Z X = {w : Σ ε z w = 0}` in an
    /// orthonormal basis; the second return value is that basis.
    pub fn tangent_hessian(&self, pt: &QuadricPoint, potential: Potential) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
        let m = self.ambient_hessian(pt, potential)?;
        let eps = epsilon(pt);
        let z = pt.coords();
        let a = DMatrix::from_fn(1, pt.n(), |_, j| z[j] * eps[j]);
        let basis = null_space(&a, TOL_RANK_REL)?;
        Ok((basis.adjoint() * m * &basis, basis))
    }
}

/// Step of the finite-difference Hessian.
pub const FD_STEP: f64 = 1e-4;

impl EnergyProfile {
    /// Complex Hessian of the potential (extended to `C^{p+q}` through `F`) on
    /// the columns of `basis`, by the four-point Laplacian
    /// `[f(Z±hw) + f(Z±ihw) − 4f(Z)] / 4h²` and polarization.
    pub fn finite_difference_hessian(
        &self,
        pt: &QuadricPoint,
        potential: Potential,
        basis: &DMatrix<C64>,
        step: f64,
    ) -> Result<DMatrix<C64>> {
        let z = pt.to_vector();
        let eps = epsilon(pt);
        let f = |v: &nalgebra::DVector<C64>| -> Result<f64> {
            let fv: f64 = v.iter().zip(&eps).map(|(c, e)| e * c.norm_sqr()).sum();
            self.potential_from_f(fv, potential)
        };
        let f0 = f(&z)?;
        let h = C64::new(step, 0.0);
        let ih = C64::new(0.0, step);
        let levi = |w: &nalgebra::DVector<C64>| -> Result<f64> {
            Ok((f(&(&z + w * h))? + f(&(&z - w * h))? + f(&(&z + w * ih))? + f(&(&z - w * ih))? - 4.0 * f0)
                / (4.0 * step * step))
        };
        let k = basis.ncols();
        let i = C64::new(0.0, 1.0);
        let mut out = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                let (va, vb) = (basis.column(a).into_owned(), basis.column(b).into_owned());
                let re = levi(&(&va + &vb))? - levi(&(&va - &vb))?;
                let im = levi(&(&va + &vb * i))? - levi(&(&va - &vb * i))?;
                out[(a, b)] = C64::new(0.25 * re, -0.25 * im);
            }
        }
        Ok(out)
    }

    /// Largest entrywise deviation between the closed-form and finite-difference
    /// tangent Hessians, relative to the largest closed-form entry.
    pub fn finite_difference_error(&self, pt: &QuadricPoint, potential: Potential) -> Result<f64> {
        let (closed, basis) = self.tangent_hessian(pt, potential)?;
        let fd = self.finite_difference_hessian(pt, potential, &basis, FD_STEP)?;
        let scale = closed.iter().fold(0.0f64, |a, v| a.max(v.norm()));
        let err = (&fd - &closed).iter().fold(0.0f64, |a, v| a.max(v.norm()));
        Ok(err / scale.max(f64::MIN_POSITIVE))
    }
}

pub fn transported_energy(pt: &QuadricPoint) -> Result<f64> {
    EnergyProfile::new(pt.p(), pt.q())?.energy(pt)
}

pub fn kahler_hessian(pt: &QuadricPoint) -> Result<DMatrix<C64>> {
    Ok(EnergyProfile::new(pt.p(), pt.q())?.tangent_hessian(pt, Potential::Energy)?.0)
}

/// Signature of the complex Hessian of `Ẽ` on the holomorphic tangent space.
pub fn kahler_hessian_signature(pt: &QuadricPoint) -> Result<SignatureTriple> {
    Ok(hermitian_signature(&kahler_hessian(pt)?)?.0)
}

/// `min |λ| / max |λ|` over the tangent Hessian of the potential.
pub fn monge_ampere_residual(pt: &QuadricPoint, potential: Potential) -> Result<f64> {
    let profile = EnergyProfile::new(pt.p(), pt.q())?;
    if let Potential::SqrtAbsEnergy = potential {
        if profile.energy(pt)?.abs() == 0.0 {
            return Err(Error::RegionBoundary("√|Ẽ| is not smooth on the null set".into()));
        }
    }
    let (h, _) = profile.tangent_hessian(pt, potential)?;
    let (_, eigs) = hermitian_signature(&h)?;
    let max = eigs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = eigs.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if max == 0.0 {
        return Err(Error::Degenerate("Hessian vanishes".into()));
    }
    Ok(min / max)
}
