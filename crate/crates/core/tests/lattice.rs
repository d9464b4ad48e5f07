use ssx_core::root_lattice::{
    b_series_half_difference, build_coroot_lattice, lemma_5_3_gamma0, minimal_vectors, verify_lemma_5_1,
    verify_lemma_5_2, verify_lemma_5_3, InvolutionKind, LatticeScale, LatticeType, LemmaVerdict,
};
use ssx_core::symmetric_pair::hyperboloid_pair;

#[test]
fn same_length_lattices_pass_with_admissible_involutions() {
    for n in 2..=5 {
        for kind in [InvolutionKind::Identity, InvolutionKind::DiagramFlip, InvolutionKind::NegatedFlip] {
            let r = verify_lemma_5_1(LatticeType::A, n, kind).unwrap();
            // The flip pairs the two middle generators when n is even; its negative
            // sends the middle generator to its opposite when n is odd.
            let expect_violation = (kind == InvolutionKind::DiagramFlip && n % 2 == 0)
                || (kind == InvolutionKind::NegatedFlip && n % 2 == 1);
            if expect_violation {
                assert!(matches!(r.verdict, LemmaVerdict::HypothesisViolated { .. }), "A{n} {kind}");
            } else {
                assert_eq!(r.verdict, LemmaVerdict::Pass, "A{n} {kind}: {r:?}");
            }
        }
    }
    for n in 3..=5 {
        for kind in [InvolutionKind::Identity, InvolutionKind::DiagramFlip] {
            let r = verify_lemma_5_1(LatticeType::D, n, kind).unwrap();
            assert_eq!(r.verdict, LemmaVerdict::Pass, "D{n} {kind}: {r:?}");
        }
    }
    let e6 = verify_lemma_5_1(LatticeType::E, 6, InvolutionKind::DiagramFlip).unwrap();
    assert_eq!(e6.verdict, LemmaVerdict::Pass);
}

#[test]
fn long_roots_are_exactly_the_shortest_in_b_series() {
    for n in 2..=5 {
        for i in 1..=n {
            let r = verify_lemma_5_2(n, i).unwrap();
            assert!(r.consistent, "{r:?}");
            assert_eq!(r.is_shortest, i < n);
        }
        assert!(b_series_half_difference(n).unwrap().is_half);
    }
}

#[test]
fn half_scale_minimum_is_a_quarter() {
    for (t, n) in [(LatticeType::A, 4), (LatticeType::B, 3), (LatticeType::D, 4)] {
        let unit = minimal_vectors(&build_coroot_lattice(t, n, LatticeScale::Unit).unwrap()).unwrap();
        let half = minimal_vectors(&build_coroot_lattice(t, n, LatticeScale::Half).unwrap()).unwrap();
        assert_eq!(unit.0 / 4, half.0);
        assert_eq!(unit.1.len(), half.1.len());
    }
}

#[test]
fn gamma0_values_are_large_multiples_of_pi() {
    for (p, q) in [(3, 2), (4, 2), (3, 3), (4, 4)] {
        let pair = hyperboloid_pair(p, q).unwrap();
        let (a0, gs) = lemma_5_3_gamma0(&pair).unwrap();
        for g in gs {
            let r = verify_lemma_5_3(&pair, &g.matrix(&a0)).unwrap();
            assert!(r.passed && r.integral, "{r:?}");
            assert!(r.alpha_value.abs() >= 2.0 * std::f64::consts::PI - 1e-9);
        }
    }
}
