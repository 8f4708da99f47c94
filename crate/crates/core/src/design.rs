//! Incidence structures shared by the constructions, the verifier and the document layer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Field, FieldSpec};
use crate::geometry::ProjectivePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("{what} {index}: point index {point} is out of range (v = {v})")]
    IndexOutOfRange { what: &'static str, index: usize, point: u32, v: usize },
    #[error("{what} {index} repeats point {point}")]
    RepeatedPoint { what: &'static str, index: usize, point: u32 },
    #[error("point {0} lies in more than one class")]
    OverlappingClasses(u32),
    #[error("point {0} lies in no class")]
    UnclassifiedPoint(u32),
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("{0}")]
    Axiom(String),
}

/// Declared parameters `t-(s, k, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    pub t: u64,
    pub s: u64,
    pub k: u64,
    pub lambda: u64,
}

impl std::fmt::Display for DesignParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.s, self.k, self.lambda)
    }
}

/// How the points of a design are realized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointTable {
    /// Canonical points of PG(dim, q).
    Projective { field: Field, dim: usize, points: Vec<ProjectivePoint> },
    /// Vectors of GF(q)^dim.
    Affine { field: Field, dim: usize, points: Vec<Vec<Elem>> },
    /// Abstract labels, e.g. `[base point, fibre index]` for product lifting.
    Labels(Vec<Vec<u32>>),
}

impl PointTable {
    pub fn len(&self) -> usize {
        match self {
            PointTable::Projective { points, .. } => points.len(),
            PointTable::Affine { points, .. } => points.len(),
            PointTable::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> Option<&Field> {
        match self {
            PointTable::Projective { field, .. } | PointTable::Affine { field, .. } => Some(field),
            PointTable::Labels(_) => None,
        }
    }

    /// Abstract labels `[0], [1], ...`.
    pub fn plain(v: usize) -> Self {
        PointTable::Labels((0..v as u32).map(|i| vec![i]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// A base design produced directly by a generator.
    Generator,
    MatrixLift,
    ProductLift,
    AffinePoly,
    Sections,
}

/// Named input of a construction with its integer arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDescriptor {
    pub name: String,
    #[serde(default)]
    pub args: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<Box<Provenance>>,
}

impl BaseDescriptor {
    pub fn named(name: &str, args: &[(&str, u64)]) -> Self {
        Self {
            name: name.to_string(),
            args: args.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            from: None,
        }
    }
}

/// Construction record stored alongside every design.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub method: Method,
    pub base: BaseDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
}

impl Provenance {
    pub fn generator(name: &str, args: &[(&str, u64)], field: Option<&Field>) -> Self {
        Self {
            method: Method::Generator,
            base: BaseDescriptor::named(name, args),
            c: None,
            w: None,
            field: field.map(|f| f.spec().clone()),
        }
    }
}

/// Checks that `classes` partitions `0..v` and returns the class index of every point.
pub fn class_index(v: usize, classes: &[Vec<u32>]) -> Result<Vec<u32>, DesignError> {
    let mut class_of = vec![u32::MAX; v];
    for (ci, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(DesignError::EmptyClass(ci));
        }
        for &x in class {
            let slot = class_of
                .get_mut(x as usize)
                .ok_or(DesignError::IndexOutOfRange { what: "class", index: ci, point: x, v })?;
            if *slot != u32::MAX {
                return Err(DesignError::OverlappingClasses(x));
            }
            *slot = ci as u32;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == u32::MAX) {
        return Err(DesignError::UnclassifiedPoint(x as u32));
    }
    Ok(class_of)
}

fn normalize_blocks(v: usize, blocks: &mut [Vec<u32>]) -> Result<(), DesignError> {
    for (bi, b) in blocks.iter_mut().enumerate() {
        b.sort_unstable();
        for w in b.windows(2) {
            if w[0] == w[1] {
                return Err(DesignError::RepeatedPoint { what: "block", index: bi, point: w[0] });
            }
        }
        if let Some(&x) = b.last().filter(|&&x| x as usize >= v) {
            return Err(DesignError::IndexOutOfRange { what: "block", index: bi, point: x, v });
        }
    }
    Ok(())
}

/// A divisible design as produced by a construction: points, classes, blocks and declared parameters.
///
/// Construction checks only the structure (classes partition the points, block
/// entries are in range). The axioms are the verifier's business.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibleDesign {
    points: PointTable,
    classes: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    params: DesignParams,
    provenance: Provenance,
}

impl DivisibleDesign {
    pub fn new(
        points: PointTable,
        mut classes: Vec<Vec<u32>>,
        mut blocks: Vec<Vec<u32>>,
        params: DesignParams,
        provenance: Provenance,
    ) -> Result<Self, DesignError> {
        let v = points.len();
        for c in &mut classes {
            c.sort_unstable();
        }
        class_index(v, &classes)?;
        normalize_blocks(v, &mut blocks)?;
        Ok(Self { points, classes, blocks, params, provenance })
    }

    pub fn v(&self) -> usize {
        self.points.len()
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn points(&self) -> &PointTable {
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

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn class_of(&self) -> Vec<u32> {
        class_index(self.v(), &self.classes).expect("validated at construction")
    }

    /// Replaces the block list, e.g. to build a tampered copy in tests.
    pub fn with_blocks(mut self, mut blocks: Vec<Vec<u32>>) -> Result<Self, DesignError> {
        normalize_blocks(self.v(), &mut blocks)?;
        self.blocks = blocks;
        Ok(self)
    }

    pub fn with_params(mut self, params: DesignParams) -> Self {
        self.params = params;
        self
    }

    /// Applies the point permutation `perm[old] = new`, keeping labels attached to points.
    pub fn relabeled(&self, perm: &[u32]) -> Self {
        assert_eq!(perm.len(), self.v());
        let map = |set: &Vec<u32>| {
            let mut s: Vec<u32> = set.iter().map(|&x| perm[x as usize]).collect();
            s.sort_unstable();
            s
        };
        let mut inverse = vec![0usize; perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new as usize] = old;
        }
        let points = match &self.points {
            PointTable::Projective { field, dim, points } => PointTable::Projective {
                field: field.clone(),
                dim: *dim,
                points: inverse.iter().map(|&o| points[o].clone()).collect(),
            },
            PointTable::Affine { field, dim, points } => PointTable::Affine {
                field: field.clone(),
                dim: *dim,
                points: inverse.iter().map(|&o| points[o].clone()).collect(),
            },
            PointTable::Labels(l) => PointTable::Labels(inverse.iter().map(|&o| l[o].clone()).collect()),
        };
        Self {
            points,
            classes: self.classes.iter().map(map).collect(),
            blocks: self.blocks.iter().map(map).collect(),
            params: self.params,
            provenance: self.provenance.clone(),
        }
    }
}

/// A design on the abstract point set `0..v`, used as a base for product lifting
/// and for embedding into a normal rational curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractDesign {
    v: usize,
    classes: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    params: DesignParams,
    name: String,
}

impl AbstractDesign {
    /// Validates the structural axioms: transversal blocks of size `k`, classes of size `s`, `t <= v/s`.
    pub fn new(
        v: usize,
        mut classes: Vec<Vec<u32>>,
        mut blocks: Vec<Vec<u32>>,
        params: DesignParams,
        name: impl Into<String>,
    ) -> Result<Self, DesignError> {
        for c in &mut classes {
            c.sort_unstable();
        }
        let class_of = class_index(v, &classes)?;
        normalize_blocks(v, &mut blocks)?;
        if let Some(ci) = classes.iter().position(|c| c.len() as u64 != params.s) {
            return Err(DesignError::Axiom(format!(
                "class {ci} has {} points, declared s = {}",
                classes[ci].len(),
                params.s
            )));
        }
        for (bi, b) in blocks.iter().enumerate() {
            if b.len() as u64 != params.k {
                return Err(DesignError::Axiom(format!("block {bi} has {} points, declared k = {}", b.len(), params.k)));
            }
            let mut seen: Vec<u32> = b.iter().map(|&x| class_of[x as usize]).collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(DesignError::Axiom(format!("block {bi} is not transversal")));
            }
        }
        if params.t == 0 || params.t * params.s > v as u64 {
            return Err(DesignError::Axiom(format!("t = {} violates 1 <= t <= v/s", params.t)));
        }
        Ok(Self { v, classes, blocks, params, name: name.into() })
    }

    /// The Fano plane as a 2-(1,3,1) design on seven points.
    pub fn fano() -> Self {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        Self::new(
            7,
            (0..7).map(|i| vec![i]).collect(),
            lines.iter().map(|l| l.to_vec()).collect(),
            DesignParams { t: 2, s: 1, k: 3, lambda: 1 },
            "fano",
        )
        .expect("Fano plane is well formed")
    }

    pub fn v(&self) -> usize {
        self.v
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

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn to_divisible(&self) -> DivisibleDesign {
        DivisibleDesign::new(
            PointTable::plain(self.v),
            self.classes.clone(),
            self.blocks.clone(),
            self.params,
            Provenance::generator(&self.name, &[], None),
        )
        .expect("validated")
    }
}

impl TryFrom<&DivisibleDesign> for AbstractDesign {
    type Error = DesignError;

    fn try_from(d: &DivisibleDesign) -> Result<Self, DesignError> {
        AbstractDesign::new(d.v(), d.classes.clone(), d.blocks.clone(), d.params, d.provenance.base.name.clone())
    }
}
