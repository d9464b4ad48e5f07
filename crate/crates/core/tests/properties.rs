use nalgebra::DMatrix;
use proptest::prelude::*;

use ssx_core::domain_tests::{dphi_regular, energy, jordan_in_q, Regularity};
use ssx_core::hyperboloid::{
    classify_orbit, f_invariant, kahler_hessian_signature, levi_signature, slice_point, LevelFunction,
    OrbitKind, SignatureTriple, SliceKind,
};
use ssx_core::matrix_core::{expm_real, jordan_chevalley, SquareMatrix};
use ssx_core::root_lattice::{
    build_coroot_lattice, line_minimum, line_minimum_by_enumeration, shortest_vectors, LatticeScale, LatticeType,
};
use ssx_core::sampling::{random_algebra, random_group_element, random_q, rng_for};
use ssx_core::symmetric_pair::{build_so_pair, hyperboloid_pair, SymmetricPairModel};

fn models() -> Vec<SymmetricPairModel> {
    vec![
        hyperboloid_pair(3, 2).unwrap(),
        hyperboloid_pair(2, 2).unwrap(),
        build_so_pair(2, 2, &[-1, 1, -1, 1]).unwrap(),
        build_so_pair(3, 1, &[1, 1, -1, -1]).unwrap(),
    ]
}

fn trace_oracle(pair: &SymmetricPairModel, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (pair.n() as f64 - 2.0) * (x * y).trace()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn killing_form_matches_trace_oracle(seed in any::<u64>(), m in 0usize..4) {
        let pair = &models()[m];
        let mut rng = rng_for(seed, 0);
        let x = random_algebra(pair, &mut rng, 3.0);
        let y = random_algebra(pair, &mut rng, 3.0);
        let k = pair.killing(&x, &y);
        prop_assert!((k - trace_oracle(pair, &x, &y)).abs() < 1e-9 * (1.0 + k.abs()));
    }

    #[test]
    fn involutions_are_commuting_automorphisms(seed in any::<u64>(), m in 0usize..4) {
        let pair = &models()[m];
        let mut rng = rng_for(seed, 1);
        let x = random_algebra(pair, &mut rng, 2.0);
        let y = random_algebra(pair, &mut rng, 2.0);
        for f in [SymmetricPairModel::theta, SymmetricPairModel::tau] {
            let lhs = f(pair, &pair.bracket(&x, &y));
            let rhs = pair.bracket(&f(pair, &x), &f(pair, &y));
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + x.norm() * y.norm()));
            prop_assert!((f(pair, &f(pair, &x)) - &x).norm() < 1e-14);
        }
        prop_assert!((pair.theta(&pair.tau(&x)) - pair.tau(&pair.theta(&x))).norm() < 1e-14);
        let parts = pair.decompose(&x).unwrap();
        let sum: DMatrix<f64> = parts.parts.iter().fold(DMatrix::zeros(pair.n(), pair.n()), |a, b| a + b);
        prop_assert!((sum - &x).norm() < 1e-13);
    }

    #[test]
    fn exponential_lands_in_group(seed in any::<u64>(), m in 0usize..4) {
        let pair = &models()[m];
        let mut rng = rng_for(seed, 2);
        let x = random_algebra(pair, &mut rng, 2.0);
        let g = expm_real(&x).unwrap();
        let gi = expm_real(&(-&x)).unwrap();
        prop_assert!(pair.group_residual(&g) < 1e-10 * (1.0 + g.norm_squared()));
        prop_assert!((&g * gi - DMatrix::identity(pair.n(), pair.n())).norm() < 1e-10 * (1.0 + g.norm_squared()));
    }

    #[test]
    fn energy_is_ad_invariant(seed in any::<u64>(), m in 0usize..4) {
        let pair = &models()[m];
        let mut rng = rng_for(seed, 3);
        let x = random_q(pair, &mut rng, 2.0);
        let h = ssx_core::sampling::random_h_group_element(pair, &mut rng, 1.5).unwrap();
        let y = pair.adjoint_action(&h, &x);
        let (ex, ey) = (energy(pair, &x).unwrap(), energy(pair, &y).unwrap());
        prop_assert!((ex - ey).abs() < 1e-9 * (1.0 + ex.abs()));
    }

    #[test]
    fn jordan_parts_reassemble(seed in any::<u64>()) {
        let pair = build_so_pair(3, 2, &[1, 1, -1, -1, -1]).unwrap();
        let mut rng = rng_for(seed, 4);
        let x = random_q(&pair, &mut rng, 2.0);
        // Nearly colliding eigenvalues are reported rather than guessed.
        let (s, n) = match jordan_in_q(&pair, &x) {
            Ok(parts) => parts,
            Err(ssx_core::Error::AmbiguousClustering { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!((&s + &n - &x).norm() < 1e-8 * (1.0 + x.norm()));
        prop_assert!((&s * &n - &n * &s).norm() < 1e-8 * (1.0 + x.norm_squared()));
    }

    #[test]
    fn jordan_chevalley_on_random_matrices(entries in proptest::collection::vec(-2.0f64..2.0, 16)) {
        let m = SquareMatrix::from_real(&DMatrix::from_vec(4, 4, entries)).unwrap();
        if let Ok(jc) = jordan_chevalley(&m) {
            let a = m.as_matrix();
            prop_assert!((jc.semisimple.as_matrix() + jc.nilpotent.as_matrix() - a).norm() < 1e-8 * (1.0 + a.norm()));
            let nn = jc.nilpotent.as_matrix();
            prop_assert!((nn * nn * nn * nn).norm() < 1e-6 * (1.0 + a.norm()).powi(4));
        }
    }

    #[test]
    fn regularity_routes_agree(seed in any::<u64>(), m in 0usize..3) {
        let pair = &models()[m];
        let mut rng = rng_for(seed, 5);
        let x = random_q(pair, &mut rng, 4.0);
        let v = dphi_regular(pair, &x).unwrap();
        if v.is_decisive() {
            prop_assert!(v.routes_agree(), "{v:?}");
        }
        prop_assert!(v.dphi_regular_spectral != Regularity::Singular || !v.offending_eigenvalues.is_empty());
    }

    #[test]
    fn f_is_group_invariant(seed in any::<u64>(), t in 0.05f64..1.5, which in 0usize..3) {
        let (p, q) = (3, 3);
        let pair = hyperboloid_pair(p, q).unwrap();
        let kind = [SliceKind::Q, SliceKind::P, SliceKind::R][which];
        let par = if kind == SliceKind::Q { -t } else { t };
        let pt = slice_point(p, q, kind, par).unwrap();
        let g = random_group_element(&pair, &mut rng_for(seed, 6)).unwrap();
        let moved = pt.translate(&g).unwrap();
        let (f0, f1) = (f_invariant(&pt), f_invariant(&moved));
        prop_assert!((f0 - f1).abs() < 1e-9 * (1.0 + moved.norm_sq()));
        let (l0, l1) = (classify_orbit(&pt), classify_orbit(&moved));
        prop_assert_eq!(l0.kind, l1.kind);
        prop_assert!((l0.parameter.unwrap() - l1.parameter.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn levi_totals_and_hessian_signature(seed in any::<u64>(), t in 0.1f64..1.4, which in 0usize..2) {
        let (p, q) = (4, 3);
        let pair = hyperboloid_pair(p, q).unwrap();
        let g = random_group_element(&pair, &mut rng_for(seed, 7)).unwrap();
        let (kind, par) = if which == 0 { (SliceKind::P, t) } else { (SliceKind::Q, -t) };
        let pt = slice_point(p, q, kind, par).unwrap().translate(&g).unwrap();
        let levi = levi_signature(&pt, LevelFunction::F).unwrap();
        prop_assert_eq!(levi.total(), p + q - 2);
        prop_assert_eq!(kahler_hessian_signature(&pt).unwrap(), SignatureTriple::new(p, q - 1, 0));
    }

    #[test]
    fn line_minimum_agrees_with_enumeration(coeffs in proptest::collection::vec(-3i64..=3, 3), k in 1i64..4, ty in 0usize..3) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let (t, n) = [(LatticeType::A, 3), (LatticeType::B, 3), (LatticeType::D, 3)][ty];
        let l = build_coroot_lattice(t, n, LatticeScale::Unit).unwrap();
        let v = l.vector(coeffs.iter().map(|c| c * k).collect());
        let a = line_minimum(&l, &v).unwrap();
        let b = line_minimum_by_enumeration(&l, &v).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn enumeration_output_is_sorted_symmetric_and_bounded() {
    for (t, n) in [(LatticeType::A, 4), (LatticeType::B, 4), (LatticeType::D, 5), (LatticeType::E, 6)] {
        let l = build_coroot_lattice(t, n, LatticeScale::Unit).unwrap();
        let bound = l.default_bound();
        let vs = shortest_vectors(&l, bound).unwrap();
        assert!(vs.windows(2).all(|w| w[0].coeffs < w[1].coeffs));
        for v in &vs {
            assert!(v.norm_sq <= bound);
            assert_eq!(v.norm_sq, l.norm_sq(&v.coeffs));
            assert!(vs.binary_search_by(|w| w.coeffs.cmp(&v.negated().coeffs)).is_ok());
        }
    }
}

#[test]
fn orbit_labels_at_boundary_base_points() {
    let (p, q) = (3, 4);
    let pair = hyperboloid_pair(p, q).unwrap();
    let bases = [
        (ssx_core::hyperboloid::base_point_x0(p, q).unwrap(), OrbitKind::SymmetricGH),
        (ssx_core::hyperboloid::base_point_y(p, q).unwrap(), OrbitKind::SymmetricGL),
        (ssx_core::hyperboloid::base_point_n(p, q).unwrap(), OrbitKind::NilpotentN),
        (ssx_core::hyperboloid::base_point_m(p, q).unwrap(), OrbitKind::NilpotentM),
    ];
    for (pt, kind) in &bases {
        for i in 0..100 {
            let g = random_group_element(&pair, &mut rng_for(99, i)).unwrap();
            assert_eq!(classify_orbit(&pt.translate(&g).unwrap()).kind, *kind);
        }
    }
}
