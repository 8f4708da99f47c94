//! Acceptance checks, one PASS/FAIL line each. Exits nonzero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ddlift::combinatorics::{binomial, for_each_subset};
use ddlift::design::{AbstractDesign, DivisibleDesign, Provenance};
use ddlift::field::Field;
use ddlift::generators::{
    min_covering_degree, trivial_design, veronese_map, veronese_variety, witt12_embedding, witt24_embedding,
    witt24_report, CoverMode, EmbeddedDesign,
};
use ddlift::geometry::{canonical_embed, enumerate_points, hyperplanes, is_independent, span, ProjectivePoint};
use ddlift::lifting::{
    act, affine_model_equivalence, affine_polynomial_dd, build_lifted_design, for_each_group_element,
    lifted_blocks_brute_force, product_lift, product_stabilizer_order, section_blocks, LiftingContext,
    ProductLiftingSpec,
};
use ddlift::limits::Limits;
use ddlift::matrix::rank_of;
use ddlift::verify::{check_axioms, check_hypersimple, fingerprint, VerificationReport};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf(q: u64) -> Field {
    Field::of_order(q).unwrap()
}

fn lim() -> Limits {
    Limits::default()
}

fn block_set(blocks: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    blocks.iter().cloned().collect()
}

fn check_lambda(r: &VerificationReport, lambda: u64, subsets: u128) -> Result<(), String> {
    ensure(r.pass, || format!("verifier failed: {r:?}"))?;
    ensure(r.measured.lambda == Some(lambda), || format!("measured lambda {:?}, expected {lambda}", r.measured.lambda))?;
    ensure(r.counts.transversal_subsets == subsets, || {
        format!("{} transversal subsets checked, expected {subsets}", r.counts.transversal_subsets)
    })
}

fn lift(base: EmbeddedDesign, c: usize) -> DivisibleDesign {
    build_lifted_design(&LiftingContext::new(base, c, lim()).unwrap()).unwrap()
}

fn nrc_base(q: u64, t: u64) -> EmbeddedDesign {
    let f = gf(q);
    let pts = veronese_variety(&f, 1, (t - 1) as u32, &lim()).unwrap();
    trivial_design(&f, pts, t, Provenance::generator("nrc", &[], Some(&f)), &lim()).unwrap()
}

fn ac1_witt12_embedding() -> Outcome {
    let w = witt12_embedding(&lim()).map_err(|e| e.to_string())?;
    let f = w.field().clone();
    ensure(w.v() == 12 && w.dim() == 5 && f.q() == 3, || "not 12 points of PG(5,3)".into())?;
    ensure(span(&f, w.points()).unwrap().rank() == 6, || "points do not span PG(5,3)".into())?;
    let idx: Vec<usize> = (0..12).collect();
    let (mut subsets, mut dependent) = (0u128, 0);
    for_each_subset(&idx, 5, |s| {
        subsets += 1;
        let pts: Vec<&ProjectivePoint> = s.iter().map(|&i| &w.points()[i]).collect();
        if !is_independent(&f, &pts) {
            dependent += 1;
        }
    });
    ensure(subsets == binomial(12, 5) && dependent == 0, || format!("{dependent} of {subsets} 5-subsets dependent"))?;
    let mut big = BTreeSet::new();
    for h in hyperplanes(&f, 5, &lim()).unwrap() {
        let section: Vec<u32> =
            (0..12u32).filter(|&i| h.contains(&f, &w.points()[i as usize])).collect();
        if section.len() >= 4 {
            ensure(section.len() == 6, || format!("hyperplane section of size {}", section.len()))?;
            big.insert(section);
        }
    }
    ensure(big.len() == 132, || format!("{} hyperplane sections of size >= 4", big.len()))?;
    ensure(big == block_set(w.blocks()), || "blocks differ from the large hyperplane sections".into())?;
    let r = check_axioms(&w.to_divisible(), 5, &lim()).map_err(|e| e.to_string())?;
    ensure(w.params().to_string() == "5-(1,6,1)", || format!("declared {}", w.params()))?;
    check_lambda(&r, 1, 792)?;
    Ok("12 points span PG(5,3), 792/792 5-subsets independent, 132 sections all of size 6, 5-(1,6,1)".into())
}

fn ac2_witt12_lift() -> Outcome {
    let base = witt12_embedding(&lim()).unwrap();
    let ctx = LiftingContext::new(base, 1, lim()).unwrap();
    let d = build_lifted_design(&ctx).unwrap();
    let expected_blocks = 132 * 3usize.pow(5);
    ensure(d.v() == 36 && d.b() == expected_blocks, || format!("v={} b={}", d.v(), d.b()))?;
    ensure(d.params().to_string() == "5-(3,6,1)", || format!("declared {}", d.params()))?;
    let brute = lifted_blocks_brute_force(&ctx).unwrap();
    ensure(block_set(&brute) == block_set(d.blocks()), || "orbit enumeration disagrees".into())?;
    let r = check_axioms(&d, 5, &lim()).unwrap();
    check_lambda(&r, 1, binomial(12, 5) * 3u128.pow(5))?;
    Ok(format!("5-(3,6,1), 36 points, {} blocks (orbit enumeration agrees), lambda=1 over 192456 subsets", d.b()))
}

fn ac3_witt12_points_trivial_lift() -> Outcome {
    let w = witt12_embedding(&lim()).unwrap();
    let f = w.field().clone();
    let base = trivial_design(&f, w.points().to_vec(), 5, Provenance::generator("w12", &[], Some(&f)), &lim()).unwrap();
    ensure(base.beta() == 6, || format!("beta = {}", base.beta()))?;
    let d = lift(base, 1);
    ensure(d.params().to_string() == "5-(3,12,3)", || format!("declared {}", d.params()))?;
    ensure(d.b() == 3usize.pow(6), || format!("{} blocks", d.b()))?;
    let r = check_axioms(&d, 5, &lim()).unwrap();
    check_lambda(&r, 3, binomial(12, 5) * 3u128.pow(5))?;
    Ok("5-(3,12,3), 729 blocks, lambda=3 over 192456 subsets".into())
}

fn ac4_nrc_lift() -> Outcome {
    let ctx = LiftingContext::new(nrc_base(3, 3), 1, lim()).unwrap();
    let d = build_lifted_design(&ctx).unwrap();
    ensure(d.params().to_string() == "3-(3,4,1)", || format!("declared {}", d.params()))?;
    ensure(d.v() == 12 && d.b() == 27, || format!("v={} b={}", d.v(), d.b()))?;
    let r = check_axioms(&d, 3, &lim()).unwrap();
    // 4 classes of 3: C(4,3) * 3^3 transversal triples.
    check_lambda(&r, 1, 4 * 27)?;
    let sections = section_blocks(&ctx).unwrap();
    ensure(block_set(&sections) == block_set(d.blocks()), || "cone sections differ from orbit blocks".into())?;
    Ok("3-(3,4,1), 12 points, 27 blocks, lambda=1 over 108 triples, sections = orbit blocks".into())
}

fn ac5_veronese() -> Outcome {
    let mut cases = 0;
    for (m, q) in [(1usize, 2u64), (1, 3), (2, 2), (2, 3)] {
        let f = gf(q);
        for t in 2..=q + 2 {
            let pts = veronese_variety(&f, m, (t - 1) as u32, &lim()).unwrap();
            let full = binomial(m as u64 + t - 1, m as u64) as usize;
            let spans = span(&f, &pts).unwrap().rank() == full;
            ensure(spans == (t <= q + 1), || format!("m={m} q={q} t={t}: spans={spans}"))?;
            cases += 1;
        }
    }
    let mut subsets = 0u64;
    for (m, q) in [(1usize, 2u64), (1, 3), (1, 4), (1, 5), (2, 2)] {
        let f = gf(q);
        let pts = enumerate_points(&f, m, &lim()).unwrap();
        for t in 2..=q + 1 {
            let images: Vec<ProjectivePoint> = pts.iter().map(|p| veronese_map(&f, p, (t - 1) as u32)).collect();
            let idx: Vec<usize> = (0..pts.len()).collect();
            let mut bad = None;
            for_each_subset(&idx, t as usize, |s| {
                subsets += 1;
                let sel: Vec<&ProjectivePoint> = s.iter().map(|&i| &images[i]).collect();
                if bad.is_none() && !is_independent(&f, &sel) {
                    bad = Some(s.to_vec());
                }
            });
            ensure(bad.is_none(), || format!("m={m} q={q} t={t}: dependent images {bad:?}"))?;
        }
    }
    Ok(format!("span iff t <= q+1 in {cases} cases; {subsets} t-subsets map to independent points"))
}

fn ac6_covering_degrees() -> Outcome {
    for (m, q) in [(1usize, 2u64), (1, 3), (2, 2)] {
        let f = gf(q);
        let proj = min_covering_degree(&f, m, CoverMode::Projective, &lim()).unwrap();
        let aff = min_covering_degree(&f, m, CoverMode::Affine, &lim()).unwrap();
        ensure(u64::from(proj) == q + 1 && u64::from(aff) == q, || {
            format!("m={m} q={q}: projective {proj}, affine {aff}")
        })?;
    }
    Ok("projective degree q+1 and affine degree q for (1,2), (1,3), (2,2)".into())
}

fn ac7_product_lift() -> Outcome {
    let base = AbstractDesign::fano();
    let d = product_lift(&ProductLiftingSpec { base, w: 2 }, &lim()).unwrap();
    ensure(d.v() == 14 && d.b() == 56, || format!("v={} b={}", d.v(), d.b()))?;
    ensure(d.params().to_string() == "2-(2,3,2)", || format!("declared {}", d.params()))?;
    let r = check_axioms(&d, 2, &lim()).unwrap();
    // 7 singleton classes doubled: C(7,2) * 2^2 transversal pairs.
    check_lambda(&r, 2, 21 * 4)?;
    let ratio = product_stabilizer_order(7, 2, 2).unwrap() / product_stabilizer_order(7, 2, 3).unwrap();
    ensure(r.measured.lambda == Some(ratio as u64), || format!("|G_Y|/|G_B| = {ratio}"))?;
    Ok("2-(2,3,2), 14 points, 56 blocks, lambda=2 = |G_Y|/|G_B|".into())
}

fn ac8_affine_model() -> Outcome {
    for (m, c, t, q) in [(1usize, 1usize, 3u64, 3u64), (1, 1, 2, 2), (1, 2, 2, 3)] {
        let ok = affine_model_equivalence(m, c, t, &gf(q), &lim()).map_err(|e| e.to_string())?;
        ensure(ok, || format!("(m,c,t,q)=({m},{c},{t},{q}): no coordinate-deletion isomorphism"))?;
    }
    for (t, q) in [(3u64, 3u64), (2, 2), (2, 3), (3, 4)] {
        let d = affine_polynomial_dd(1, 1, t, &gf(q), &lim()).unwrap();
        let r = check_axioms(&d, t, &lim()).unwrap();
        // t distinct abscissae times q^t ordinates.
        check_lambda(&r, 1, binomial(q, t) * u128::from(q).pow(t as u32))?;
    }
    Ok("coordinate deletion is an isomorphism in 3 cases; interpolation gives lambda=1 for m=c=1".into())
}

fn ac9_hypersimple() -> Outcome {
    let nrc = lift(nrc_base(3, 3), 1);
    let h = check_hypersimple(&nrc, 3, 1, &lim()).unwrap();
    ensure(h.pass, || format!("lifted NRC: {h:?}"))?;
    let w12 = lift(witt12_embedding(&lim()).unwrap(), 1);
    let h = check_hypersimple(&w12, 5, 1, &lim()).unwrap();
    ensure(h.pass, || format!("lifted W12: {h:?}"))?;
    let fano = product_lift(&ProductLiftingSpec { base: AbstractDesign::fano(), w: 2 }, &lim()).unwrap();
    let s = product_stabilizer_order(7, 2, 2).unwrap() / product_stabilizer_order(7, 2, 3).unwrap();
    let h = check_hypersimple(&fano, 2, s as u64, &lim()).unwrap();
    ensure(h.pass && s == 2, || format!("product Fano, s={s}: {h:?}"))?;
    let h1 = check_hypersimple(&fano, 2, 1, &lim()).unwrap();
    ensure(!h1.pass, || "product Fano should not be 1-hypersimple".into())?;
    Ok("lifted NRC and W12 are 1-hypersimple; product Fano is 2-hypersimple with s = #G_Y/#G_B".into())
}

fn ac10_stabilizers() -> Outcome {
    let mut checked = 0u64;
    for q in [2u64, 3] {
        let f = gf(q);
        for d in 1..=3usize {
            let pts = enumerate_points(&f, d, &lim()).unwrap();
            assert!(pts.len() <= 64);
            let lifted: Vec<Vec<ProjectivePoint>> = (1..=2)
                .map(|c| pts.iter().map(|p| canonical_embed(p, d + c).unwrap()).collect())
                .collect();
            for c in 1..=2usize {
                let emb = &lifted[c - 1];
                let mut masks: HashMap<u64, u128> = HashMap::new();
                for_each_group_element(&f, d, c, &lim(), |g| {
                    let mut mask = 0u64;
                    for (i, p) in emb.iter().enumerate() {
                        if act(&f, p, g).as_ref() == Ok(p) {
                            mask |= 1 << i;
                        }
                    }
                    *masks.entry(mask).or_default() += 1;
                })
                .unwrap();
                let idx: Vec<usize> = (0..pts.len()).collect();
                for u in 1..=d + 1 {
                    let want = u128::from(q).pow((c * (d + 1 - u)) as u32);
                    let mut bad = None;
                    for_each_subset(&idx, u, |s| {
                        let sel: Vec<&ProjectivePoint> = s.iter().map(|&i| &pts[i]).collect();
                        if bad.is_some() || !is_independent(&f, &sel) {
                            return;
                        }
                        let z = s.iter().fold(0u64, |m, &i| m | 1 << i);
                        let count: u128 = masks.iter().filter(|(&m, _)| m & z == z).map(|(_, &n)| n).sum();
                        checked += 1;
                        if count != want {
                            bad = Some((s.to_vec(), count));
                        }
                    });
                    ensure(bad.is_none(), || format!("q={q} d={d} c={c} u={u}: {bad:?}, expected {want}"))?;
                }
            }
        }
    }
    Ok(format!("{checked} independent subsets have stabilizer order q^(c(d-u+1))"))
}

fn ac11_witt24() -> Outcome {
    let w = witt24_embedding(&lim()).map_err(|e| e.to_string())?;
    let f = w.field().clone();
    ensure(w.v() == 24 && w.dim() == 11 && f.q() == 2, || "not 24 points of PG(11,2)".into())?;
    ensure(span(&f, w.points()).unwrap().rank() == 12, || "points do not span PG(11,2)".into())?;
    let idx: Vec<usize> = (0..24).collect();
    let (mut subsets, mut dependent) = (0u128, 0);
    for_each_subset(&idx, 5, |s| {
        subsets += 1;
        let pts: Vec<&ProjectivePoint> = s.iter().map(|&i| &w.points()[i]).collect();
        if !is_independent(&f, &pts) {
            dependent += 1;
        }
    });
    ensure(subsets == 42504 && dependent == 0, || format!("{dependent} of {subsets} 5-subsets dependent"))?;
    for b in w.blocks() {
        let rows: Vec<_> = b.iter().map(|&i| w.points()[i as usize].coords()).collect();
        ensure(rank_of(&f, &rows) == 7, || format!("octad {b:?} does not span a 6-dimensional subspace"))?;
    }
    // A 5-(24,8,1) design has C(24,5)/C(8,5) blocks.
    let steiner = (binomial(24, 5) / binomial(8, 5)) as usize;
    let report = witt24_report(&w);
    ensure(report.computed_blocks == steiner, || format!("{} octads, expected {steiner}", report.computed_blocks))?;
    ensure(report.discrepancy() && report.quoted_blocks == 758, || "quoted count not flagged".into())?;
    let r = check_axioms(&w.to_divisible(), 5, &lim()).unwrap();
    check_lambda(&r, 1, 42504)?;
    Ok(format!("24 points span PG(11,2), 42504/42504 independent, octads of rank 7; {report}"))
}

fn ac12_iterated_lift() -> Outcome {
    let once = lift(nrc_base(3, 3), 1);
    let again = EmbeddedDesign::from_design(&once, &lim()).map_err(|e| e.to_string())?;
    let twice = lift(again, 1);
    let direct = lift(nrc_base(3, 3), 2);
    ensure(twice.params() == direct.params(), || format!("{} vs {}", twice.params(), direct.params()))?;
    let (a, b) = (fingerprint(&twice, &lim()).unwrap(), fingerprint(&direct, &lim()).unwrap());
    ensure(a == b, || format!("fingerprints differ:\n{a:?}\n{b:?}"))?;
    let r = check_axioms(&twice, 3, &lim()).unwrap();
    ensure(r.pass, || "iterated lift fails verification".into())?;
    Ok(format!("two lifts by 1 and one lift by 2 agree: {}, v={}, b={}", direct.params(), direct.v(), direct.b()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1", ac1_witt12_embedding, Some(Duration::from_secs(5))),
        ("AC2", ac2_witt12_lift, Some(Duration::from_secs(60))),
        ("AC3", ac3_witt12_points_trivial_lift, Some(Duration::from_secs(60))),
        ("AC4", ac4_nrc_lift, Some(Duration::from_secs(1))),
        ("AC5", ac5_veronese, None),
        ("AC6", ac6_covering_degrees, None),
        ("AC7", ac7_product_lift, Some(Duration::from_secs(1))),
        ("AC8", ac8_affine_model, None),
        ("AC9", ac9_hypersimple, None),
        ("AC10", ac10_stabilizers, None),
        ("AC11", ac11_witt24, Some(Duration::from_secs(300))),
        ("AC12", ac12_iterated_lift, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("{name} PASS ({elapsed:.2?}) {detail}"),
            Err(why) => {
                failed += 1;
                println!("{name} FAIL ({elapsed:.2?}) {why}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
