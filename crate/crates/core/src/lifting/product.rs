//! Product lifting: points `X̄ × W`, blocks are the sets whose projection is a
//! base block and which meet every fibre above it exactly once.

use crate::design::{AbstractDesign, DesignParams, DivisibleDesign, Method, PointTable, Provenance};
use crate::limits::{checked_pow, GuardExceeded, Limits};

use super::{derived_provenance, LiftError, PredictedParams};

/// Base design and fibre size `w >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLiftingSpec {
    pub base: AbstractDesign,
    pub w: u64,
}

/// Order of `G = G_1 × ... × G_v`, each `G_i` cyclic of order `w` acting regularly on its fibre.
pub fn product_group_order(v: usize, w: u64) -> Option<u128> {
    checked_pow(w, v as u64)
}

/// Order of the stabilizer of a transversal `u`-set of base points lifted to the fibres:
/// `|G| / w^u`.
pub fn product_stabilizer_order(v: usize, w: u64, u: usize) -> Option<u128> {
    if u > v {
        return None;
    }
    checked_pow(w, (v - u) as u64)
}

/// Parameters of the product lift: `lambda = lambda̅ |G_Y| / |G_B|` with `|Y| = t`, `|B| = k`.
pub fn predict_product_lift(base: &AbstractDesign, w: u64) -> Result<PredictedParams, LiftError> {
    if w == 0 {
        return Err(LiftError::Input("w must be at least 1".into()));
    }
    let p = base.params();
    let (t, k, v) = (p.t as usize, p.k as usize, base.v());
    if k < t {
        return Err(LiftError::Hypothesis(format!("k = {k} < t = {t}")));
    }
    let overflow = |what| LiftError::Guard(GuardExceeded { what, required: u128::MAX, limit: u128::MAX });
    // Both stabilizer orders share the factor w^{v-k}; divide it out before forming the ratio.
    let ratio = match (product_stabilizer_order(v, w, t), product_stabilizer_order(v, w, k)) {
        (Some(gy), Some(gb)) => gy / gb,
        _ => checked_pow(w, (k - t) as u64).ok_or_else(|| overflow("w^{k-t}"))?,
    };
    let blocks_per_base = checked_pow(w, k as u64).ok_or_else(|| overflow("w^k"))?;
    Ok(PredictedParams {
        t: p.t,
        s: u128::from(p.s) * u128::from(w),
        k: p.k,
        lambda: u128::from(p.lambda).checked_mul(ratio).ok_or_else(|| overflow("lambda"))?,
        v: (v as u128) * u128::from(w),
        block_count: blocks_per_base.checked_mul(base.blocks().len() as u128).ok_or_else(|| overflow("block count"))?,
    })
}

/// The product lift. Point `(x, j)` has index `x w + j` and label `[x, j]`.
pub fn product_lift(spec: &ProductLiftingSpec, limits: &Limits) -> Result<DivisibleDesign, LiftError> {
    let ProductLiftingSpec { base, w } = spec;
    let w = *w;
    let predicted = predict_product_lift(base, w)?;
    GuardExceeded::check("product points", predicted.v, limits.max_points)?;
    GuardExceeded::check("product blocks", predicted.block_count, limits.max_blocks)?;
    let params: DesignParams = predicted.design_params()?;
    let wu = w as u32;
    let labels: Vec<Vec<u32>> = (0..base.v() as u32).flat_map(|x| (0..wu).map(move |j| vec![x, j])).collect();
    let classes: Vec<Vec<u32>> = base
        .classes()
        .iter()
        .map(|c| {
            let mut out: Vec<u32> = c.iter().flat_map(|&x| (x * wu)..(x * wu + wu)).collect();
            out.sort_unstable();
            out
        })
        .collect();
    let mut blocks = Vec::with_capacity(predicted.block_count as usize);
    for b in base.blocks() {
        let mut choice = vec![0u32; b.len()];
        'choices: loop {
            blocks.push(b.iter().zip(&choice).map(|(&x, &j)| x * wu + j).collect::<Vec<u32>>());
            for slot in choice.iter_mut().rev() {
                *slot += 1;
                if *slot < wu {
                    continue 'choices;
                }
                *slot = 0;
            }
            break;
        }
    }
    blocks.sort_unstable();
    let provenance = derived_provenance(
        Method::ProductLift,
        &Provenance::generator(base.name(), &[], None),
        None,
        Some(w),
        None,
    );
    Ok(DivisibleDesign::new(PointTable::Labels(labels), classes, blocks, params, provenance)?)
}
