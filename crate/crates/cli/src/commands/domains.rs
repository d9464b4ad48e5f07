use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use ssx_core::domain_tests::{Membership, Predicates, Regularity, RegularityVerdict};
use ssx_core::matrix_core::C64;
use ssx_core::sampling::{random_jordan_mixed_q, random_nilpotent_q, random_q, rng_for};
use ssx_core::symmetric_pair::SymmetricPairModel;
use ssx_core::tolerances::Tolerances;

use crate::report::{Claim, Outcome};
use crate::CliResult;

#[derive(Serialize)]
struct MembershipLine {
    index: usize,
    norm: f64,
    omega: Membership,
    omega_prime: Membership,
}

pub fn omega_check(
    pair: &SymmetricPairModel,
    samples: usize,
    max_norm: f64,
    seed: u64,
    tol: Tolerances,
) -> CliResult<Outcome> {
    let preds = Predicates::with_tolerances(pair, tol);
    let lines: Vec<MembershipLine> = (0..samples)
        .into_par_iter()
        .map(|i| -> ssx_core::Result<MembershipLine> {
            let x = random_q(pair, &mut rng_for(seed, i as u64), max_norm);
            Ok(MembershipLine {
                index: i,
                norm: x.norm(),
                omega: preds.in_omega(&x)?,
                omega_prime: preds.in_omega_prime(&x)?,
            })
        })
        .collect::<ssx_core::Result<_>>()?;
    let nested_violations = lines
        .iter()
        .filter(|l| l.omega_prime == Membership::Inside && l.omega != Membership::Inside)
        .count();
    let mut claims = vec![Claim::new(
        "omega-prime-inside-omega",
        "every sample inside ω′ is inside ω",
        nested_violations == 0,
        format!("{nested_violations} violations in {samples} samples"),
    )];

    // Thresholds along the unit boost, where the largest real ad-eigenvalue is |t|.
    let mut thresholds = serde_json::Value::Null;
    if let Some(a0) = pair.noncompact_cartan().ok().and_then(|c| c.unit_generator()) {
        let at = |t: f64| -> ssx_core::Result<(Membership, Membership)> {
            let x = &a0 * t;
            Ok((preds.in_omega(&x)?, preds.in_omega_prime(&x)?))
        };
        let below = at(FRAC_PI_2 - 0.07)?.0;
        let above = at(FRAC_PI_2 + 0.03)?.0;
        let below_prime = at(FRAC_PI_4 - 0.08)?.1;
        let above_prime = at(FRAC_PI_4 + 0.02)?.1;
        let ok = below == Membership::Inside
            && above == Membership::Outside
            && below_prime == Membership::Inside
            && above_prime == Membership::Outside;
        claims.push(Claim::new(
            "boost-thresholds",
            "t·A₀ leaves ω at |t| = π/2 and ω′ at |t| = π/4",
            ok,
            format!("ω: {below:?}/{above:?}, ω′: {below_prime:?}/{above_prime:?}"),
        ));
        thresholds = json!({ "omega": [below, above], "omega_prime": [below_prime, above_prime] });
    }
    let inside = lines.iter().filter(|l| l.omega == Membership::Inside).count();
    let inside_prime = lines.iter().filter(|l| l.omega_prime == Membership::Inside).count();
    Ok(Outcome {
        claims,
        data: json!({
            "family_tag": pair.family_tag(),
            "inside_omega": inside,
            "inside_omega_prime": inside_prime,
            "boost_thresholds": thresholds,
            "samples": lines,
        }),
        rows: Vec::new(),
    })
}

#[derive(Default, Serialize)]
struct RouteCounts {
    samples: usize,
    decisive: usize,
    agreeing: usize,
    indeterminate: usize,
    singular: usize,
    failures: usize,
    disagreements: Vec<usize>,
}

fn same_verdict(a: &RegularityVerdict, b: &RegularityVerdict) -> Option<bool> {
    if a.dphi_regular_spectral == Regularity::Indeterminate || b.dphi_regular_spectral == Regularity::Indeterminate {
        return None;
    }
    Some(a.dphi_regular_spectral == b.dphi_regular_spectral && a.dphi_regular_cosine == b.dphi_regular_cosine)
}

pub fn regularity(
    pair: &SymmetricPairModel,
    samples: usize,
    nilpotent_samples: usize,
    jordan_samples: usize,
    max_norm: f64,
    seed: u64,
    tol: Tolerances,
) -> CliResult<Outcome> {
    let preds = Predicates::with_tolerances(pair, tol);

    let verdicts: Vec<ssx_core::Result<RegularityVerdict>> = (0..samples)
        .into_par_iter()
        .map(|i| preds.dphi_regular(&random_q(pair, &mut rng_for(seed, i as u64), max_norm)))
        .collect();
    let mut routes = RouteCounts {
        samples,
        ..Default::default()
    };
    for (i, v) in verdicts.iter().enumerate() {
        match v {
            Err(_) => routes.failures += 1,
            Ok(v) if v.is_decisive() => {
                routes.decisive += 1;
                if v.routes_agree() {
                    routes.agreeing += 1;
                    if v.dphi_regular_spectral == Regularity::Singular {
                        routes.singular += 1;
                    }
                } else if routes.disagreements.len() < 10 {
                    routes.disagreements.push(i);
                }
            }
            Ok(_) => routes.indeterminate += 1,
        }
    }
    let mut claims = vec![Claim::new(
        "regularity-routes-agree",
        "spectral and cosine-kernel verdicts agree on every decisive sample",
        routes.decisive == routes.agreeing && routes.decisive > 0,
        format!("{}/{} decisive samples agree", routes.agreeing, routes.decisive),
    )];

    // Streams above `samples` keep the three sample families independent.
    let nil_base = samples as u64;
    let nilpotents: Vec<ssx_core::Result<Option<RegularityVerdict>>> = (0..nilpotent_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, nil_base + i as u64);
            match random_nilpotent_q(pair, &mut rng)? {
                Some(n) => preds.dphi_regular(&n).map(Some),
                None => Ok(None),
            }
        })
        .collect();
    let mut nil_regular = 0;
    let mut nil_total = 0;
    let mut nil_failures = 0;
    for v in &nilpotents {
        match v {
            Ok(Some(v)) => {
                nil_total += 1;
                if v.dphi_regular_spectral == Regularity::Regular && v.dphi_regular_cosine == Regularity::Regular {
                    nil_regular += 1;
                }
            }
            Ok(None) => {}
            Err(_) => nil_failures += 1,
        }
    }
    if nil_total > 0 || nil_failures > 0 {
        claims.push(Claim::new(
            "nilpotents-are-regular",
            "every sampled nilpotent X ∈ q is a regular point on both routes",
            nil_regular == nil_total && nil_failures == 0,
            format!("{nil_regular}/{nil_total} regular, {nil_failures} failures"),
        ));
    }

    let jordan_base = nil_base + nilpotent_samples as u64;
    let jordan: Vec<ssx_core::Result<Option<(Option<bool>, f64)>>> = (0..jordan_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, jordan_base + i as u64);
            let Some(x) = random_jordan_mixed_q(pair, &mut rng, max_norm)? else {
                return Ok(None);
            };
            let (s, n) = preds.jordan_in_q(&x)?;
            let vx = preds.dphi_regular(&x)?;
            let vs = preds.dphi_regular(&s)?;
            Ok(Some((same_verdict(&vx, &vs), n.norm())))
        })
        .collect();
    let (mut j_total, mut j_same, mut j_skipped, mut j_failures) = (0, 0, 0, 0);
    let mut j_nilpotent_norm_min = f64::INFINITY;
    for v in &jordan {
        match v {
            Ok(Some((Some(same), nn))) => {
                j_total += 1;
                j_nilpotent_norm_min = j_nilpotent_norm_min.min(*nn);
                if *same {
                    j_same += 1;
                }
            }
            Ok(Some((None, _))) => j_skipped += 1,
            Ok(None) => {}
            Err(_) => j_failures += 1,
        }
    }
    if j_total > 0 {
        claims.push(Claim::new(
            "verdict-depends-on-semisimple-part",
            "dφ verdict of X equals that of its semisimple part X_s",
            j_same == j_total,
            format!("{j_same}/{j_total} agree; {j_skipped} indeterminate, {j_failures} undecomposable"),
        ));
    }

    let offending: Vec<Vec<C64>> = verdicts
        .iter()
        .filter_map(|v| v.as_ref().ok())
        .filter(|v| v.dphi_regular_spectral == Regularity::Singular)
        .take(5)
        .map(|v| v.offending_eigenvalues.clone())
        .collect();
    Ok(Outcome {
        claims,
        data: json!({
            "family_tag": pair.family_tag(),
            "random_samples": routes,
            "nilpotent_samples": { "constructed": nil_total, "regular": nil_regular, "failures": nil_failures },
            "jordan_mixed_samples": {
                "compared": j_total,
                "agreeing": j_same,
                "indeterminate": j_skipped,
                "undecomposable": j_failures,
                "min_nilpotent_norm": if j_total > 0 { Some(j_nilpotent_norm_min) } else { None },
            },
            "singular_examples": offending,
        }),
        rows: Vec::new(),
    })
}
