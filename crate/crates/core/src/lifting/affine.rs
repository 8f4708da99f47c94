//! Graphs of polynomial maps `GF(q)^m -> GF(q)^c` of degree below `t`, and their
//! identification with a lift of the Veronese image of AG(m,q).

use std::collections::BTreeSet;

use crate::combinatorics::binomial;
use crate::design::{DesignParams, DivisibleDesign, Method, PointTable, Provenance};
use crate::field::{Elem, Field};
use crate::generators::{eval_monomials, exponent_sequences, trivial_design, EmbeddedDesign};
use crate::geometry::{for_each_vector, vector_count, ProjectivePoint};
use crate::limits::{checked_pow, GuardExceeded, Limits};

use super::{build_lifted_design, LiftError, LiftingContext, PredictedParams};

fn check_args(m: usize, t: u64, q: u32) -> Result<(), LiftError> {
    if m == 0 {
        return Err(LiftError::Input("m must be at least 1".into()));
    }
    if t == 0 || t > u64::from(q) {
        return Err(LiftError::Input(format!("the polynomial model needs 1 <= t <= q, got t = {t}, q = {q}")));
    }
    Ok(())
}

/// `d = C(m+t-1, m) - 1`: one less than the number of monomials of degree below `t`.
fn veronese_dim(m: usize, t: u64) -> usize {
    (binomial(m as u64 + t - 1, m as u64) - 1) as usize
}

/// `t-(q^c, q^m, q^{c(d-t+1)})` on `q^{m+c}` points with `q^{c(d+1)}` blocks.
pub fn predict_affine_polynomial_dd(m: usize, c: usize, t: u64, field: &Field) -> Result<PredictedParams, LiftError> {
    let q = field.q();
    check_args(m, t, q)?;
    let d = veronese_dim(m, t) as u64;
    let q = u64::from(q);
    let c = c as u64;
    let pow = |e: u64, what| {
        checked_pow(q, e).ok_or(LiftError::Guard(GuardExceeded { what, required: u128::MAX, limit: u128::MAX }))
    };
    Ok(PredictedParams {
        t,
        s: pow(c, "q^c")?,
        k: u64::try_from(pow(m as u64, "q^m")?).map_err(|_| LiftError::Input("q^m too large".into()))?,
        lambda: pow(c * (d + 1 - t), "lambda")?,
        v: pow(m as u64 + c, "point count")?,
        block_count: pow(c * (d + 1), "block count")?,
    })
}

/// Points `GF(q)^{m+c}` in lexicographic order; classes are the fibres over the
/// first `m` coordinates; blocks are the graphs `{(x, f_1(x), ..., f_c(x))}` of all
/// `c`-tuples of polynomials in `m` variables of total degree at most `t-1`.
pub fn affine_polynomial_dd(
    m: usize,
    c: usize,
    t: u64,
    field: &Field,
    limits: &Limits,
) -> Result<DivisibleDesign, LiftError> {
    let predicted = predict_affine_polynomial_dd(m, c, t, field)?;
    GuardExceeded::check("affine points", predicted.v, limits.max_points)?;
    GuardExceeded::check("polynomial graphs", predicted.block_count, limits.max_blocks)?;
    let q = field.q();
    // Monomials x_1^{e_1} ... x_m^{e_m} of degree < t, via the homogenized exponent order.
    let exps = exponent_sequences(m, (t - 1) as u32);
    let nmono = exps.len();
    let mut args = Vec::new();
    for_each_vector(q, m, |x| args.push(x.to_vec()));
    let evals: Vec<Vec<Elem>> = args
        .iter()
        .map(|x| {
            let mut h = vec![Elem::ONE];
            h.extend_from_slice(x);
            eval_monomials(field, &exps, &h)
        })
        .collect();
    let fibre = predicted.s as u32;
    let mut points = Vec::with_capacity(predicted.v as usize);
    for_each_vector(q, m + c, |p| points.push(p.to_vec()));
    let classes: Vec<Vec<u32>> = (0..args.len() as u32).map(|i| ((i * fibre)..((i + 1) * fibre)).collect()).collect();
    let mut blocks = Vec::with_capacity(predicted.block_count as usize);
    for_each_vector(q, nmono * c, |coeffs| {
        let block: Vec<u32> = evals
            .iter()
            .enumerate()
            .map(|(i, ev)| {
                let rank = (0..c).fold(0u32, |acc, j| {
                    let y = field.dot(ev, &coeffs[j * nmono..(j + 1) * nmono]);
                    acc * q + y.0
                });
                i as u32 * fibre + rank
            })
            .collect();
        blocks.push(block);
    });
    blocks.sort_unstable();
    let provenance = Provenance {
        method: Method::AffinePoly,
        base: crate::design::BaseDescriptor::named("polynomial_graphs", &[("m", m as u64), ("t", t)]),
        c: Some(c as u64),
        w: None,
        field: Some(field.spec().clone()),
    };
    Ok(DivisibleDesign::new(
        PointTable::Affine { field: field.clone(), dim: m + c, points },
        classes,
        blocks,
        predicted.design_params()?,
        provenance,
    )?)
}

/// One-block design on the Veronese images of the points `(1, x)` of AG(m,q), degree `t-1`.
pub fn affine_veronese_base(m: usize, t: u64, field: &Field, limits: &Limits) -> Result<EmbeddedDesign, LiftError> {
    check_args(m, t, field.q())?;
    let exps = exponent_sequences(m, (t - 1) as u32);
    let count = vector_count(field.q(), m).unwrap_or(u128::MAX);
    GuardExceeded::check("points of AG(m,q)", count, limits.max_points)?;
    let mut points = Vec::new();
    for_each_vector(field.q(), m, |x| {
        let mut h = vec![Elem::ONE];
        h.extend_from_slice(x);
        points.push(ProjectivePoint::normalize(field, &eval_monomials(field, &exps, &h)).expect("leading 1"));
    });
    let prov = Provenance::generator("affine_veronese", &[("m", m as u64), ("t", t)], Some(field));
    Ok(trivial_design(field, points, t, prov, limits)?)
}

/// Lifts the affine Veronese base by `c`, deletes coordinate 0 and the `d - m`
/// coordinates after `x_1..x_m`, and checks that this is a bijection onto
/// `GF(q)^{m+c}` carrying blocks and classes onto those of [`affine_polynomial_dd`].
pub fn affine_model_equivalence(m: usize, c: usize, t: u64, field: &Field, limits: &Limits) -> Result<bool, LiftError> {
    let base = affine_veronese_base(m, t, field, limits)?;
    let d = base.dim();
    let lifted = build_lifted_design(&LiftingContext::new(base, c, *limits)?)?;
    let model = affine_polynomial_dd(m, c, t, field, limits)?;
    let PointTable::Projective { points, .. } = lifted.points() else {
        return Err(LiftError::Input("lifted design has no coordinates".into()));
    };
    let q = field.q();
    let mut image = Vec::with_capacity(points.len());
    for p in points {
        let x = p.coords();
        let kept = x[1..=m].iter().chain(&x[d + 1..]);
        image.push(kept.fold(0u32, |acc, e| acc * q + e.0));
    }
    // The model lists GF(q)^{m+c} lexicographically, so a point's index is its base-q value.
    let distinct: BTreeSet<u32> = image.iter().copied().collect();
    if distinct.len() != model.v() || distinct.iter().any(|&i| i as usize >= model.v()) {
        return Ok(false);
    }
    let map_sets = |sets: &[Vec<u32>]| -> BTreeSet<Vec<u32>> {
        sets.iter()
            .map(|s| {
                let mut out: Vec<u32> = s.iter().map(|&i| image[i as usize]).collect();
                out.sort_unstable();
                out
            })
            .collect()
    };
    let as_set = |sets: &[Vec<u32>]| -> BTreeSet<Vec<u32>> { sets.iter().cloned().collect() };
    let params_match = {
        let (a, b): (DesignParams, DesignParams) = (lifted.params(), model.params());
        a == b
    };
    Ok(params_match
        && map_sets(lifted.blocks()) == as_set(model.blocks())
        && map_sets(lifted.classes()) == as_set(model.classes()))
}
