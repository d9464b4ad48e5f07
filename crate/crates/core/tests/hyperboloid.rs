use ssx_core::hyperboloid::{
    base_point_m, base_point_y, classify_orbit, f_invariant, in_domain_d_prime, monge_ampere_residual,
    slice_point, transported_energy, EnergyProfile, OrbitKind, Potential, QuadricPoint, SliceKind,
};
use ssx_core::sampling::{random_group_element, rng_for};
use ssx_core::symmetric_pair::hyperboloid_pair;

fn sample_points(p: usize, q: usize) -> Vec<QuadricPoint> {
    let pair = hyperboloid_pair(p, q).unwrap();
    let mut out = Vec::new();
    for (i, (kind, par)) in [(SliceKind::P, 0.3), (SliceKind::P, 1.1), (SliceKind::Q, -0.4), (SliceKind::Q, -1.2)]
        .into_iter()
        .enumerate()
    {
        let g = random_group_element(&pair, &mut rng_for(21, i as u64)).unwrap();
        out.push(slice_point(p, q, kind, par).unwrap().translate(&g).unwrap());
    }
    out
}

#[test]
fn closed_form_hessian_matches_finite_differences() {
    for (p, q) in [(3, 3), (4, 3)] {
        let profile = EnergyProfile::new(p, q).unwrap();
        for pt in sample_points(p, q) {
            for pot in [Potential::Energy, Potential::SqrtAbsEnergy] {
                let err = profile.finite_difference_error(&pt, pot).unwrap();
                assert!(err <= 1e-4, "({p},{q}) {pot:?}: relative error {err:e}");
            }
        }
    }
}

#[test]
fn monge_ampere_on_translates() {
    for pt in sample_points(3, 3) {
        assert!(monge_ampere_residual(&pt, Potential::SqrtAbsEnergy).unwrap() < 1e-6);
        assert!(monge_ampere_residual(&pt, Potential::Energy).unwrap() > 1e-2);
    }
}

#[test]
fn energy_is_monotone_and_vanishes_at_the_seam() {
    let (p, q) = (3, 3);
    let mut last = 0.0;
    for k in 1..15 {
        let t = 0.1 * k as f64;
        let e = transported_energy(&slice_point(p, q, SliceKind::P, t).unwrap()).unwrap();
        assert!(e > last);
        last = e;
    }
    let mut last = 0.0;
    for k in 1..15 {
        let s = -0.1 * k as f64;
        let e = transported_energy(&slice_point(p, q, SliceKind::Q, s).unwrap()).unwrap();
        assert!(e < last);
        last = e;
    }
    let near_p = transported_energy(&slice_point(p, q, SliceKind::P, 1e-3).unwrap()).unwrap();
    let near_q = transported_energy(&slice_point(p, q, SliceKind::Q, -1e-3).unwrap()).unwrap();
    assert!(near_p.abs() < 1e-5 && near_q.abs() < 1e-5);
}

#[test]
fn energy_is_group_invariant() {
    let pair = hyperboloid_pair(4, 3).unwrap();
    let pt = slice_point(4, 3, SliceKind::P, 0.9).unwrap();
    let e0 = transported_energy(&pt).unwrap();
    for i in 0..10 {
        let g = random_group_element(&pair, &mut rng_for(5, i)).unwrap();
        let e1 = transported_energy(&pt.translate(&g).unwrap()).unwrap();
        assert!((e0 - e1).abs() < 1e-9);
    }
}

#[test]
fn scaled_potential_keeps_signature() {
    let pt = slice_point(3, 3, SliceKind::P, 0.5).unwrap();
    let base = EnergyProfile::new(3, 3).unwrap();
    let doubled = EnergyProfile {
        c_p: 2.0 * base.c_p,
        c_q: 2.0 * base.c_q,
        ..base
    };
    let sig = |prof: &EnergyProfile| {
        ssx_core::hyperboloid::hermitian_signature(&prof.tangent_hessian(&pt, Potential::Energy).unwrap().0)
            .unwrap()
            .0
    };
    assert_eq!(sig(&base), sig(&doubled));
}

#[test]
fn dual_domain_description() {
    let (p, q) = (4, 3);
    let pts = [
        slice_point(p, q, SliceKind::P, 0.2).unwrap(),
        slice_point(p, q, SliceKind::P, 1.3).unwrap(),
        slice_point(p, q, SliceKind::R, 0.8).unwrap(),
        base_point_m(p, q).unwrap(),
        base_point_y(p, q).unwrap(),
    ];
    for pt in &pts {
        assert!(in_domain_d_prime(pt), "F = {}", f_invariant(pt));
        assert!(matches!(
            classify_orbit(pt).kind,
            OrbitKind::ClosedP | OrbitKind::ClosedR | OrbitKind::NilpotentM | OrbitKind::SymmetricGL
        ));
    }
}
