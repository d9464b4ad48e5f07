//! The complex quadric `q(Z) = −1` in `C^{p+q}` as a complexification of the
//! hyperboloid `SO(p,q)₀ / SO(p,q−1)₀`: the invariant `F`, slices, orbit
//! labels, the polar map, Levi and Hessian signatures, and injectivity trials.

mod injectivity;
mod kahler;
mod levi;

pub use injectivity::{
    certificate, injectivity_trial, injectivity_trial_with_witness, polar_image, Certificate, SampleStrategy,
    TrialDomain, TrialReport, WitnessOutcome,
};
pub use kahler::{
    kahler_hessian, kahler_hessian_signature, monge_ampere_residual, transported_energy, EnergyProfile,
    EnergyRegion, Potential, FD_STEP,
};
pub use levi::{hermitian_signature, levi_form, levi_signature, LevelFunction, SignatureTriple};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_core::{expm, to_complex, C64, I};
use crate::symmetric_pair::SymmetricPairModel;
use crate::tolerances::TOL_ORBIT_BAND;

/// Quadric residual accepted for a point, relative to `1 + ‖Z‖²`.
pub const TOL_QUADRIC: f64 = 1e-9;
/// Below this (relative to `1 + ‖Z‖`) a real or imaginary part counts as zero.
pub const TOL_ZERO_PART: f64 = 1e-8;
/// Above this (relative to `1 + ‖Z‖`) a real or imaginary part counts as nonzero.
pub const TOL_NONZERO_PART: f64 = 1e-6;

fn signs(p: usize, q: usize) -> impl Iterator<Item = f64> {
    (0..p + q).map(move |j| if j < p { 1.0 } else { -1.0 })
}

/// `Σ ε_j a_j b_j` without conjugation.
pub fn bilinear(p: usize, a: &[C64], b: &[C64]) -> C64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(j, (x, y))| if j < p { x * y } else { -(x * y) })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadricPoint {
    p: usize,
    q: usize,
    z: Vec<C64>,
}

impl QuadricPoint {
    pub fn new(p: usize, q: usize, z: Vec<C64>) -> Result<Self> {
        if p == 0 || q == 0 || p + q < 3 {
            return Err(Error::InvalidArgument(format!("quadric needs p, q ≥ 1 and p+q ≥ 3, got ({p},{q})")));
        }
        if z.len() != p + q {
            return Err(Error::InvalidArgument(format!("expected {} coordinates, got {}", p + q, z.len())));
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let pt = QuadricPoint { p, q, z };
        let r = pt.quadric_residual();
        if r > TOL_QUADRIC * (1.0 + pt.norm_sq()) {
            return Err(Error::Numerics(format!("point is off the quadric by {r:.3e}")));
        }
        Ok(pt)
    }

    pub fn from_vector(p: usize, q: usize, z: &DVector<C64>) -> Result<Self> {
        QuadricPoint::new(p, q, z.iter().copied().collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn coords(&self) -> &[C64] {
        &self.z
    }

    pub fn to_vector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.z)
    }

    pub fn u(&self) -> Vec<f64> {
        self.z.iter().map(|c| c.re).collect()
    }

    pub fn v(&self) -> Vec<f64> {
        self.z.iter().map(|c| c.im).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.z.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `q(Z) = Σ ε_j z_j²`.
    pub fn form_value(&self) -> C64 {
        bilinear(self.p, &self.z, &self.z)
    }

    /// `|q(Z) + 1|`.
    pub fn quadric_residual(&self) -> f64 {
        (self.form_value() + 1.0).norm()
    }

    /// Real quadratic form of signature `(p,q)` on `u = Re Z`.
    pub fn q_u(&self) -> f64 {
        real_form(self.p, &self.u())
    }

    pub fn q_v(&self) -> f64 {
        real_form(self.p, &self.v())
    }

    /// Left action of a real matrix `g ∈ SO(p,q)`.
    pub fn translate(&self, g: &DMatrix<f64>) -> Result<QuadricPoint> {
        let z = to_complex(g) * self.to_vector();
        QuadricPoint::from_vector(self.p, self.q, &z)
    }
}

fn real_form(p: usize, x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(j, v)| if j < p { v * v } else { -v * v })
        .sum()
}

/// `F(Z) = Σ ε_j |z_j|²`.
pub fn f_invariant(pt: &QuadricPoint) -> f64 {
    pt.z.iter().zip(signs(pt.p, pt.q)).map(|(c, e)| e * c.norm_sqr()).sum()
}

fn basis_point(p: usize, q: usize, entries: &[(usize, C64)]) -> Result<QuadricPoint> {
    let mut z = vec![C64::new(0.0, 0.0); p + q];
    for &(k, v) in entries {
        z[k] = v;
    }
    QuadricPoint::new(p, q, z)
}

/// `x₀ = (0, …, 0, 1)`.
pub fn base_point_x0(p: usize, q: usize) -> Result<QuadricPoint> {
    basis_point(p, q, &[(p + q - 1, C64::new(1.0, 0.0))])
}

/// `y = (i, 0, …, 0)`.
pub fn base_point_y(p: usize, q: usize) -> Result<QuadricPoint> {
    basis_point(p, q, &[(0, I)])
}

/// Base point of the nilpotent orbit in `F = −1`: `z₁ = i`, `z_{p+1} = i`, `z_{p+q} = 1`.
pub fn base_point_n(p: usize, q: usize) -> Result<QuadricPoint> {
    if q < 2 {
        return Err(Error::InvalidArgument("the orbit through n needs q ≥ 2".into()));
    }
    basis_point(p, q, &[(0, I), (p, I), (p + q - 1, C64::new(1.0, 0.0))])
}

/// Base point of the nilpotent orbit in `F = 1`: `z₁ = i`, `z_p = 1`, `z_{p+1} = 1`.
pub fn base_point_m(p: usize, q: usize) -> Result<QuadricPoint> {
    if p < 2 {
        return Err(Error::InvalidArgument("the orbit through m needs p ≥ 2".into()));
    }
    basis_point(p, q, &[(0, I), (p - 1, C64::new(1.0, 0.0)), (p, C64::new(1.0, 0.0))])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceKind {
    Q,
    P,
    R,
}

impl std::str::FromStr for SliceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(SliceKind::Q),
            "P" | "p" => Ok(SliceKind::P),
            "R" | "r" => Ok(SliceKind::R),
            other => Err(Error::InvalidArgument(format!("unknown slice {other:?}"))),
        }
    }
}

/// Slice parametrizations, closed at their finite endpoints:
/// `Q(s) = (0,…,0, i sinh s, cosh s)` for `s ≤ 0`,
/// `P(t) = (i sin t, 0,…,0, cos t)` for `t ∈ [0, π/2]`,
/// `R(σ) = (i cosh σ, sinh σ, 0,…,0)` for `σ ≥ 0`.
pub fn slice_point(p: usize, q: usize, kind: SliceKind, parameter: f64) -> Result<QuadricPoint> {
    if !parameter.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = p + q;
    let re = |x: f64| C64::new(x, 0.0);
    match kind {
        SliceKind::Q => {
            if parameter > 0.0 {
                return Err(Error::InvalidArgument(format!("Q slice needs s ≤ 0, got {parameter}")));
            }
            if q < 2 {
                return Err(Error::InvalidArgument("Q slice needs q ≥ 2".into()));
            }
            basis_point(p, q, &[(n - 2, I * parameter.sinh()), (n - 1, re(parameter.cosh()))])
        }
        SliceKind::P => {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&parameter) {
                return Err(Error::InvalidArgument(format!("P slice needs t ∈ [0, π/2], got {parameter}")));
            }
            basis_point(p, q, &[(0, I * parameter.sin()), (n - 1, re(parameter.cos()))])
        }
        SliceKind::R => {
            if parameter < 0.0 {
                return Err(Error::InvalidArgument(format!("R slice needs σ ≥ 0, got {parameter}")));
            }
            if p < 2 {
                return Err(Error::InvalidArgument("R slice needs p ≥ 2".into()));
            }
            basis_point(p, q, &[(0, I * parameter.cosh()), (1, re(parameter.sinh()))])
        }
    }
}

/// Closed forms of `F` along the slices: `−cosh 2s`, `−cos 2t`, `cosh 2σ`.
pub fn slice_f_closed_form(kind: SliceKind, parameter: f64) -> f64 {
    match kind {
        SliceKind::Q => -(parameter.sinh().powi(2) + parameter.cosh().powi(2)),
        SliceKind::P => 1.0 - 2.0 * parameter.cos().powi(2),
        SliceKind::R => parameter.sinh().powi(2) + parameter.cosh().powi(2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitKind {
    ClosedQ,
    SymmetricGH,
    NilpotentN,
    ClosedP,
    NilpotentM,
    SymmetricGL,
    ClosedR,
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub kind: OrbitKind,
    /// `s < 0`, `t ∈ (0, π/2)` or `σ > 0` on the closed strata.
    pub parameter: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PartState {
    Zero,
    Nonzero,
    Gray,
}

fn part_state(x: &[f64], scale: f64) -> PartState {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n <= TOL_ZERO_PART * scale {
        PartState::Zero
    } else if n >= TOL_NONZERO_PART * scale {
        PartState::Nonzero
    } else {
        PartState::Gray
    }
}

/// Orbit label from `F` and the vanishing of `Re Z` or `Im Z` on the level sets `F = ±1`.
pub fn classify_orbit(pt: &QuadricPoint) -> OrbitLabel {
    let f = f_invariant(pt);
    let band = TOL_ORBIT_BAND * (1.0 + pt.norm_sq());
    let scale = 1.0 + pt.norm_sq().sqrt();
    let label = |kind, parameter| OrbitLabel { kind, parameter };
    if f < -1.0 - band {
        label(OrbitKind::ClosedQ, Some(-0.5 * (-f).acosh()))
    } else if f <= -1.0 + band {
        match part_state(&pt.v(), scale) {
            PartState::Zero => label(OrbitKind::SymmetricGH, None),
            PartState::Nonzero => label(OrbitKind::NilpotentN, None),
            PartState::Gray => label(OrbitKind::Unclassified, None),
        }
    } else if f < 1.0 - band {
        label(OrbitKind::ClosedP, Some(((1.0 - f) / 2.0).sqrt().acos()))
    } else if f <= 1.0 + band {
        match part_state(&pt.u(), scale) {
            PartState::Zero => label(OrbitKind::SymmetricGL, None),
            PartState::Nonzero => label(OrbitKind::NilpotentM, None),
            PartState::Gray => label(OrbitKind::Unclassified, None),
        }
    } else {
        label(OrbitKind::ClosedR, Some(0.5 * f.acosh()))
    }
}

/// `Z ∈ D ⇔ F(Z) < 1`.
pub fn in_domain_d(pt: &QuadricPoint) -> bool {
    f_invariant(pt) < 1.0
}

/// `Z ∈ D′ ⇔ −F(Z) < 1`.
pub fn in_domain_d_prime(pt: &QuadricPoint) -> bool {
    -f_invariant(pt) < 1.0
}

/// `τ = diag(1, …, 1, −1)`: the model whose `H^C` is the stabilizer of `x₀`.
pub fn check_hyperboloid_model(pair: &SymmetricPairModel) -> Result<()> {
    let n = pair.n();
    let t = pair.tau_signs();
    if t[..n - 1].iter().all(|&s| s == 1) && t[n - 1] == -1 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{} is not a hyperboloid model (τ must be diag(1,…,1,−1))",
            pair.family_tag()
        )))
    }
}

/// `[g, X] ↦ g · exp(iX) · x₀`.
pub fn polar_map_point(pair: &SymmetricPairModel, g: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<QuadricPoint> {
    check_hyperboloid_model(pair)?;
    pair.check_group(g)?;
    pair.check_q(x)?;
    let n = pair.n();
    let e = expm(&(to_complex(x) * I))?;
    let z = to_complex(g) * e.column(n - 1);
    QuadricPoint::from_vector(pair.p_sig(), pair.q_sig(), &z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_group_element, rng_for};
    use crate::symmetric_pair::hyperboloid_pair;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn f_examples() {
        assert_eq!(f_invariant(&base_point_x0(4, 3).unwrap()), -1.0);
        let p = slice_point(4, 3, SliceKind::P, FRAC_PI_4).unwrap();
        assert!(f_invariant(&p).abs() < 1e-15);
        let q = slice_point(4, 3, SliceKind::Q, -1.0).unwrap();
        assert!((f_invariant(&q) + 2f64.cosh()).abs() < 1e-14);
        assert!((f_invariant(&q) + 3.76220).abs() < 1e-5);
    }

    #[test]
    fn slice_endpoints() {
        assert_eq!(slice_point(3, 3, SliceKind::Q, 0.0).unwrap(), base_point_x0(3, 3).unwrap());
        let y = slice_point(3, 3, SliceKind::P, FRAC_PI_2).unwrap();
        assert!((y.to_vector() - base_point_y(3, 3).unwrap().to_vector()).norm() < 1e-15);
        assert!(slice_point(3, 3, SliceKind::R, 1.0).unwrap().quadric_residual() < 1e-14);
        assert!(slice_point(3, 3, SliceKind::Q, 0.1).is_err());
        assert!(slice_point(3, 3, SliceKind::P, 2.0).is_err());
        assert!(slice_point(3, 3, SliceKind::R, -0.1).is_err());
    }

    #[test]
    fn rejects_off_quadric() {
        let z = vec![C64::new(1.0, 0.0); 5];
        assert!(QuadricPoint::new(3, 2, z).is_err());
    }

    #[test]
    fn base_point_labels() {
        let (p, q) = (4, 3);
        assert_eq!(classify_orbit(&base_point_x0(p, q).unwrap()).kind, OrbitKind::SymmetricGH);
        assert_eq!(classify_orbit(&base_point_y(p, q).unwrap()).kind, OrbitKind::SymmetricGL);
        let n = base_point_n(p, q).unwrap();
        assert_eq!(n.q_v(), 0.0);
        assert_eq!(classify_orbit(&n).kind, OrbitKind::NilpotentN);
        assert_eq!(classify_orbit(&base_point_m(p, q).unwrap()).kind, OrbitKind::NilpotentM);
        let l = classify_orbit(&slice_point(p, q, SliceKind::P, 0.4).unwrap());
        assert_eq!(l.kind, OrbitKind::ClosedP);
        assert!((l.parameter.unwrap() - 0.4).abs() < 1e-12);
        let l = classify_orbit(&slice_point(p, q, SliceKind::Q, -0.7).unwrap());
        assert!((l.parameter.unwrap() + 0.7).abs() < 1e-12);
    }

    #[test]
    fn translates_keep_label() {
        let m = hyperboloid_pair(4, 3).unwrap();
        let r1 = slice_point(4, 3, SliceKind::R, 1.0).unwrap();
        for i in 0..10 {
            let g = random_group_element(&m, &mut rng_for(11, i)).unwrap();
            let l = classify_orbit(&r1.translate(&g).unwrap());
            assert_eq!(l.kind, OrbitKind::ClosedR);
            assert!((l.parameter.unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn polar_map_examples() {
        let m = hyperboloid_pair(3, 2).unwrap();
        let e = DMatrix::identity(5, 5);
        let x0 = polar_map_point(&m, &e, &DMatrix::zeros(5, 5)).unwrap();
        assert_eq!(x0, base_point_x0(3, 2).unwrap());
        let a0 = m.generator(0, 4).unwrap();
        for t in [0.2, 0.9, 1.4] {
            let z = polar_map_point(&m, &e, &(&a0 * t)).unwrap();
            let expected = slice_point(3, 2, SliceKind::P, t).unwrap();
            assert!((z.to_vector() - expected.to_vector()).norm() < 1e-12);
        }
        let other = crate::symmetric_pair::build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap();
        assert!(polar_map_point(&other, &DMatrix::identity(4, 4), &DMatrix::zeros(4, 4)).is_err());
    }
}
