use std::collections::HashSet;

use crate::combinatorics::{for_each_subset, for_each_transversal, transversal_count};
use crate::design::{class_index, AbstractDesign, BaseDescriptor, Method, DesignParams, DivisibleDesign, PointTable, Provenance};
use crate::field::{Elem, Field};
use crate::geometry::{is_independent, ProjectivePoint};
use crate::limits::{GuardExceeded, Limits};
use crate::matrix::rank_of;

use super::veronese::normal_rational_curve;
use super::GeneratorError;

/// A divisible design whose points are points of PG(d,q), ready to serve as a lifting base.
///
/// Construction checks: points are distinct and canonical; classes partition the
/// points and all have size `s`; blocks are transversal of size `k` and all have
/// the same rank `beta`; every transversal `t`-subset is independent; `t <= v/s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedDesign {
    field: Field,
    dim: usize,
    points: Vec<ProjectivePoint>,
    classes: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    params: DesignParams,
    beta: usize,
    provenance: Provenance,
}

impl EmbeddedDesign {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Field,
        dim: usize,
        points: Vec<ProjectivePoint>,
        mut classes: Vec<Vec<u32>>,
        mut blocks: Vec<Vec<u32>>,
        params: DesignParams,
        provenance: Provenance,
        limits: &Limits,
    ) -> Result<Self, GeneratorError> {
        let v = points.len();
        let mut seen = HashSet::with_capacity(v);
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim || !p.is_canonical() || p.coords().iter().any(|e| !field.contains(*e)) {
                return Err(GeneratorError::Input(format!("point {i} = {p} is not a canonical point of PG({dim},q)")));
            }
            if !seen.insert(p) {
                return Err(GeneratorError::Input(format!("point {i} = {p} is repeated")));
            }
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        let class_of = class_index(v, &classes)?;
        if let Some(ci) = classes.iter().position(|c| c.len() as u64 != params.s) {
            return Err(GeneratorError::Invariant(format!(
                "class {ci} has {} points, expected s = {}",
                classes[ci].len(),
                params.s
            )));
        }
        if params.t == 0 || params.t * params.s > v as u64 {
            return Err(GeneratorError::Invariant(format!("t = {} violates 1 <= t <= v/s", params.t)));
        }
        if blocks.is_empty() {
            return Err(GeneratorError::Invariant("design has no blocks".into()));
        }
        let mut beta = None;
        for (bi, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            if b.len() as u64 != params.k {
                return Err(GeneratorError::Invariant(format!("block {bi} has {} points, expected k = {}", b.len(), params.k)));
            }
            if let Some(&x) = b.iter().find(|&&x| x as usize >= v) {
                return Err(GeneratorError::Input(format!("block {bi} refers to point {x} >= v = {v}")));
            }
            let mut cls: Vec<u32> = b.iter().map(|&x| class_of[x as usize]).collect();
            cls.sort_unstable();
            if cls.windows(2).any(|w| w[0] == w[1]) {
                return Err(GeneratorError::Invariant(format!("block {bi} is not transversal")));
            }
            let rows: Vec<&[Elem]> = b.iter().map(|&x| points[x as usize].coords()).collect();
            let rank = rank_of(&field, &rows);
            match beta {
                None => beta = Some(rank),
                Some(r) if r != rank => {
                    return Err(GeneratorError::Invariant(format!(
                        "blocks span subspaces of different dimensions: block 0 has rank {r}, block {bi} has rank {rank}"
                    )))
                }
                _ => {}
            }
        }
        let t = params.t as usize;
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        GuardExceeded::check("transversal t-subsets", transversal_count(&sizes, t), limits.max_subsets)?;
        let mut witness = None;
        for_each_transversal(&classes, t, |ys| {
            if witness.is_none() {
                let refs: Vec<&ProjectivePoint> = ys.iter().map(|&y| &points[y as usize]).collect();
                if !is_independent(&field, &refs) {
                    witness = Some(ys.to_vec());
                }
            }
        });
        if let Some(mut points) = witness {
            points.sort_unstable();
            return Err(GeneratorError::DependentSubset { size: t, points });
        }
        Ok(Self { field, dim, points, classes, blocks, params, beta: beta.unwrap(), provenance })
    }

    /// Reads a projective divisible design (e.g. the output of a lift) as a new base.
    pub fn from_design(d: &DivisibleDesign, limits: &Limits) -> Result<Self, GeneratorError> {
        let PointTable::Projective { field, dim, points } = d.points() else {
            return Err(GeneratorError::Input("design has no projective coordinates".into()));
        };
        let prov = Provenance {
            method: Method::Generator,
            base: BaseDescriptor { name: "design".into(), args: Default::default(), from: Some(Box::new(d.provenance().clone())) },
            c: None,
            w: None,
            field: Some(field.spec().clone()),
        };
        Self::new(
            field.clone(),
            *dim,
            points.clone(),
            d.classes().to_vec(),
            d.blocks().to_vec(),
            d.params(),
            prov,
            limits,
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    /// Common rank of the blocks (projective span dimension plus one).
    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn v(&self) -> usize {
        self.points.len()
    }

    /// Rank of the whole point set.
    pub fn point_rank(&self) -> usize {
        let rows: Vec<&[Elem]> = self.points.iter().map(|p| p.coords()).collect();
        rank_of(&self.field, &rows)
    }

    /// True iff the points generate the ambient PG(d,q).
    pub fn spans_ambient(&self) -> bool {
        self.point_rank() == self.dim + 1
    }

    pub fn to_divisible(&self) -> DivisibleDesign {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        DivisibleDesign::new(
            PointTable::Projective { field: self.field.clone(), dim: self.dim, points: self.points.clone() },
            self.classes.clone(),
            blocks,
            self.params,
            self.provenance.clone(),
        )
        .expect("validated at construction")
    }
}

/// The one-block design on `points`: singleton classes, parameters `t-(1, k, 1)`.
pub fn trivial_design(
    field: &Field,
    points: Vec<ProjectivePoint>,
    t: u64,
    base: Provenance,
    limits: &Limits,
) -> Result<EmbeddedDesign, GeneratorError> {
    let k = points.len() as u64;
    if t == 0 || t > k {
        return Err(GeneratorError::Input(format!("need 1 <= t <= {k}, got t = {t}")));
    }
    let dim = points.first().map(|p| p.dim()).ok_or_else(|| GeneratorError::Input("empty point set".into()))?;
    // Fast pre-check with a witness in original point order.
    let refs: Vec<&ProjectivePoint> = points.iter().collect();
    let mut witness = None;
    let idx: Vec<u32> = (0..points.len() as u32).collect();
    for_each_subset(&idx, t as usize, |s| {
        if witness.is_none() {
            let sub: Vec<&ProjectivePoint> = s.iter().map(|&i| refs[i as usize]).collect();
            if !is_independent(field, &sub) {
                witness = Some(s.to_vec());
            }
        }
    });
    if let Some(points) = witness {
        return Err(GeneratorError::DependentSubset { size: t as usize, points });
    }
    let mut prov = base;
    prov.base.name = format!("trivial({})", prov.base.name);
    EmbeddedDesign::new(
        field.clone(),
        dim,
        points,
        (0..k as u32).map(|i| vec![i]).collect(),
        vec![(0..k as u32).collect()],
        DesignParams { t, s: 1, k, lambda: 1 },
        prov,
        limits,
    )
}

/// Places an abstract design on the normal rational curve of PG(t-1,q): point `i`
/// goes to the `i`-th curve point (enumeration order of PG(1,q)).
pub fn embed_in_nrc(d: &AbstractDesign, field: &Field, limits: &Limits) -> Result<EmbeddedDesign, GeneratorError> {
    let t = d.params().t;
    if t < 2 {
        return Err(GeneratorError::Input("embedding in a normal rational curve needs t >= 2".into()));
    }
    let q1 = u64::from(field.q()) + 1;
    if (d.v() as u64) > q1 {
        return Err(GeneratorError::Input(format!("v = {} exceeds q+1 = {q1} curve points", d.v())));
    }
    let curve = normal_rational_curve(field, (t - 1) as u32, limits)?;
    let points = curve.into_iter().take(d.v()).collect();
    EmbeddedDesign::new(
        field.clone(),
        (t - 1) as usize,
        points,
        d.classes().to_vec(),
        d.blocks().to_vec(),
        d.params(),
        Provenance::generator(&format!("nrc({})", d.name()), &[("t", t), ("q", u64::from(field.q()))], Some(field)),
        limits,
    )
}
