use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use ddlift::combinatorics::binomial;
use ddlift::construct::{build, Construction, ConstructionSpec};
use ddlift::design::{AbstractDesign, Provenance};
use ddlift::document::DesignDocument;
use ddlift::field::{Elem, Field};
use ddlift::generators::{trivial_design, veronese_variety};
use ddlift::geometry::{canonical_embed, enumerate_points, ProjectivePoint};
use ddlift::lifting::{
    act, build_lifted_design, orbit, predict_product_lift, predicted_params, product_lift, LiftingContext,
    LiftingGroupElement, ProductLiftingSpec,
};
use ddlift::limits::Limits;
use ddlift::matrix::Matrix;
use ddlift::verify::{check_axioms, fingerprint, lambda_histogram};

fn gf(q: u64) -> Field {
    Field::of_order(q).unwrap()
}

/// (q, t, c) with a lifted NRC design small enough to verify exhaustively.
fn nrc_instance() -> impl Strategy<Value = (u64, u64, usize)> {
    prop_oneof![Just(2u64), Just(3), Just(4), Just(5)]
        .prop_flat_map(|q| (Just(q), 2..=(q + 1).min(4), 0usize..=2))
        .prop_filter("guard", |&(q, t, c)| (q + 1).pow(t as u32) * q.pow((c * t as usize) as u32) < 2_000_000)
}

fn random_matrix(field: &Field, rows: usize, cols: usize, codes: &[u32]) -> Matrix {
    let data = codes.iter().take(rows * cols).map(|&x| Elem(x % field.q())).collect();
    Matrix::new(rows, cols, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lifted_nrc_matches_prediction((q, t, c) in nrc_instance()) {
        let f = gf(q);
        let lim = Limits::default();
        let pts = veronese_variety(&f, 1, (t - 1) as u32, &lim).unwrap();
        let base = trivial_design(&f, pts, t, Provenance::generator("nrc", &[], Some(&f)), &lim).unwrap();
        let base_report = check_axioms(&base.to_divisible(), t, &lim).unwrap();
        prop_assert!(base_report.pass);
        let ctx = LiftingContext::new(base, c, lim).unwrap();
        let predicted = predicted_params(&ctx).unwrap();
        let d = build_lifted_design(&ctx).unwrap();
        let r = check_axioms(&d, t, &lim).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        prop_assert!(r.double_count);
        let qc = q.pow(c as u32);
        prop_assert_eq!(r.measured.s, Some(qc));
        prop_assert_eq!(r.measured.k, Some(q + 1));
        // beta = t for the curve, so lambda stays 1.
        prop_assert_eq!(r.measured.lambda, Some(1));
        prop_assert_eq!(u128::from(r.measured.s.unwrap()), predicted.s);
        prop_assert_eq!(u128::from(r.measured.lambda.unwrap()), predicted.lambda);
        prop_assert_eq!(d.v() as u128, predicted.v);
        prop_assert_eq!(d.b() as u128, predicted.block_count);
        // Double counting and histogram mass against independent counts.
        let subsets = binomial(q + 1, t) * u128::from(qc).pow(t as u32);
        prop_assert_eq!(r.counts.transversal_subsets, subsets);
        prop_assert_eq!(d.b() as u128 * binomial(q + 1, t), subsets);
        let mass: u64 = lambda_histogram(&d, t, &lim).unwrap().values().sum();
        prop_assert_eq!(u128::from(mass), subsets);
    }

    #[test]
    fn action_composes_additively(
        q in prop_oneof![Just(2u64), Just(3), Just(4)],
        d in 1usize..=3,
        c in 1usize..=2,
        codes in proptest::collection::vec(0u32..64, 16),
        codes2 in proptest::collection::vec(0u32..64, 16),
        pick in 0usize..1000,
    ) {
        let f = gf(q);
        let pts = enumerate_points(&f, d, &Limits::default()).unwrap();
        let x = canonical_embed(&pts[pick % pts.len()], d + c).unwrap();
        let g = LiftingGroupElement::new(random_matrix(&f, d + 1, c, &codes), d, c).unwrap();
        let h = LiftingGroupElement::new(random_matrix(&f, d + 1, c, &codes2), d, c).unwrap();
        let two_steps = act(&f, &act(&f, &x, &g).unwrap(), &h).unwrap();
        let one_step = act(&f, &x, &g.compose(&f, &h)).unwrap();
        prop_assert_eq!(two_steps, one_step);
    }

    #[test]
    fn product_lambda_scales_by_w_power(w in 1u64..=3) {
        let base = AbstractDesign::fano();
        let d = product_lift(&ProductLiftingSpec { base: base.clone(), w }, &Limits::default()).unwrap();
        let r = check_axioms(&d, 2, &Limits::default()).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.measured.lambda, Some(w));
        prop_assert_eq!(predict_product_lift(&base, w).unwrap().lambda, u128::from(w));
        prop_assert_eq!(r.measured.s, Some(w));
    }

    #[test]
    fn documents_round_trip_and_fingerprints_ignore_labels(which in 0usize..5, seed in 0u64..1000) {
        let lim = Limits::default();
        let (c, spec) = [
            (Construction::NrcLift, ConstructionSpec { q: Some(3), t: Some(3), c: Some(1), ..Default::default() }),
            (Construction::Quadric, ConstructionSpec { q: Some(4), ..Default::default() }),
            (Construction::Product, ConstructionSpec { w: Some(2), ..Default::default() }),
            (Construction::AffinePoly, ConstructionSpec { q: Some(4), t: Some(2), c: Some(1), ..Default::default() }),
            (Construction::NrcLift, ConstructionSpec { p: Some(2), e: Some(2), t: Some(3), c: Some(1), ..Default::default() }),
        ][which].clone();
        let d = build(c, &spec, &lim).unwrap().design;
        let doc = DesignDocument::from_design(&d, None);
        let text = doc.to_json();
        let parsed = DesignDocument::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_json(), text);
        prop_assert_eq!(parsed.to_design().unwrap(), d.clone());

        let mut perm: Vec<u32> = (0..d.v() as u32).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        let shuffled = d.relabeled(&perm);
        prop_assert_eq!(fingerprint(&shuffled, &lim).unwrap(), fingerprint(&d, &lim).unwrap());
    }
}

#[test]
fn orbits_partition_the_space_off_the_vertex() {
    for (q, d, c) in [(2u64, 2usize, 1usize), (3, 1, 2), (3, 2, 1), (4, 1, 1)] {
        let f = gf(q);
        let lim = Limits::default();
        let base = enumerate_points(&f, d, &lim).unwrap();
        let mut seen = BTreeSet::new();
        for x in &base {
            let o = orbit(&f, &canonical_embed(x, d + c).unwrap(), d, c).unwrap();
            assert_eq!(o.len(), (q as usize).pow(c as u32));
            for y in o {
                assert!(seen.insert(y), "orbits overlap");
            }
        }
        // Every point of PG(d+c,q) with a nonzero head lies in some orbit.
        let off_vertex: BTreeSet<ProjectivePoint> = enumerate_points(&f, d + c, &lim)
            .unwrap()
            .into_iter()
            .filter(|p| p.coords()[..=d].iter().any(|e| !e.is_zero()))
            .collect();
        assert_eq!(seen, off_vertex);
    }
}
