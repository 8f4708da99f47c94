//! Lifting by the elementary abelian group of matrices
//! `[[I_{d+1}, M], [0, I_c]]` acting on PG(d+c, q), product lifting, and the
//! affine polynomial-graph model.

mod affine;
mod build;
mod product;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::design::{BaseDescriptor, DesignError, DesignParams, Method, Provenance};
use crate::field::{Elem, Field};
use crate::generators::{EmbeddedDesign, GeneratorError};
use crate::geometry::{
    canonical_embed, for_each_vector, is_independent, project_through_vertex, vector_count, vertex_subspace,
    GeometryError, ProjectivePoint, Subspace,
};
use crate::limits::{checked_pow, GuardExceeded, Limits};
use crate::matrix::{Matrix, MatrixError};

pub use affine::{affine_model_equivalence, affine_polynomial_dd, affine_veronese_base, predict_affine_polynomial_dd};
pub use build::{build_lifted_design, build_section_design, lifted_blocks_brute_force, section_blocks};
pub use product::{
    predict_product_lift, product_group_order, product_lift, product_stabilizer_order, ProductLiftingSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("hypothesis (i) fails: base points have rank {rank}, they must span PG({dim},q)")]
    BaseNotSpanning { rank: usize, dim: usize },
    #[error("lifting hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl LiftError {
    pub fn guard(&self) -> Option<&GuardExceeded> {
        match self {
            LiftError::Guard(g) | LiftError::Geometry(GeometryError::Guard(g)) => Some(g),
            LiftError::Generator(e) => e.guard(),
            _ => None,
        }
    }
}

/// The group element with matrix `M` ((d+1) x c): `(h | y) -> (h | y + h M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftingGroupElement {
    m: Matrix,
}

impl LiftingGroupElement {
    pub fn new(m: Matrix, d: usize, c: usize) -> Result<Self, LiftError> {
        if m.rows() != d + 1 || m.cols() != c {
            return Err(LiftError::Dimension(format!(
                "group element must be {}x{c}, got {}x{}",
                d + 1,
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { m })
    }

    pub fn identity(d: usize, c: usize) -> Self {
        Self { m: Matrix::zeros(d + 1, c) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Group product, which is matrix addition.
    pub fn compose(&self, field: &Field, other: &Self) -> Self {
        let data: Vec<Elem> = (0..self.m.rows())
            .flat_map(|i| (0..self.m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| field.add(self.m[(i, j)], other.m[(i, j)]))
            .collect();
        Self { m: Matrix::new(self.m.rows(), self.m.cols(), data).expect("same shape") }
    }

    pub fn d(&self) -> usize {
        self.m.rows() - 1
    }

    pub fn c(&self) -> usize {
        self.m.cols()
    }
}

/// Calls `f` on every element of the group for `(d, c)` over `field`.
pub fn for_each_group_element(
    field: &Field,
    d: usize,
    c: usize,
    limits: &Limits,
    mut f: impl FnMut(&LiftingGroupElement),
) -> Result<(), LiftError> {
    let size = vector_count(field.q(), (d + 1) * c).unwrap_or(u128::MAX);
    GuardExceeded::check("lifting group elements", size, limits.max_group_elements)?;
    for_each_vector(field.q(), (d + 1) * c, |entries| {
        let g = LiftingGroupElement { m: Matrix::new(d + 1, c, entries.to_vec()).expect("shape") };
        f(&g);
    });
    Ok(())
}

/// Image of `x` under `g`. Points of the vertex `S` are fixed.
pub fn act(field: &Field, x: &ProjectivePoint, g: &LiftingGroupElement) -> Result<ProjectivePoint, LiftError> {
    let (d, c) = (g.d(), g.c());
    if x.coords().len() != d + c + 1 {
        return Err(LiftError::Dimension(format!(
            "point {x} has {} coordinates, the group acts on PG({},q)",
            x.coords().len(),
            d + c
        )));
    }
    let (h, y) = x.coords().split_at(d + 1);
    if h.iter().all(|e| e.is_zero()) {
        return Ok(x.clone());
    }
    let shift = g.m.left_mul_vec(field, h);
    let mut coords = h.to_vec();
    coords.extend(y.iter().zip(&shift).map(|(&a, &b)| field.add(a, b)));
    // The head is untouched and already starts with 1, so the image is canonical.
    Ok(ProjectivePoint::from_canonical(coords))
}

/// Base design plus lift count `c`; the lifted space is PG(d+c, q).
#[derive(Debug, Clone)]
pub struct LiftingContext {
    base: EmbeddedDesign,
    c: usize,
    vertex: Option<Subspace>,
    limits: Limits,
}

impl LiftingContext {
    /// Checks that the base points span PG(d,q). Independence of transversal
    /// t-subsets and the common block rank are checked when the base is built.
    pub fn new(base: EmbeddedDesign, c: usize, limits: Limits) -> Result<Self, LiftError> {
        let rank = base.point_rank();
        if rank != base.dim() + 1 {
            return Err(LiftError::BaseNotSpanning { rank, dim: base.dim() });
        }
        if (base.beta() as u64) < base.params().t {
            return Err(LiftError::Hypothesis(format!(
                "blocks have rank {} < t = {}",
                base.beta(),
                base.params().t
            )));
        }
        let vertex = if c == 0 { None } else { Some(vertex_subspace(base.dim(), c)?) };
        Ok(Self { base, c, vertex, limits })
    }

    pub fn base(&self) -> &EmbeddedDesign {
        &self.base
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn d(&self) -> usize {
        self.base.dim()
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> usize {
        self.base.dim() + self.c
    }

    /// The vertex `S`, absent when `c = 0`.
    pub fn vertex(&self) -> Option<&Subspace> {
        self.vertex.as_ref()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Number of points in each orbit, `q^c`.
    pub fn fibre_size(&self) -> u128 {
        checked_pow(u64::from(self.field().q()), self.c as u64).unwrap_or(u128::MAX)
    }
}

/// Orbit of `x` under the group: every point with the same head and an arbitrary
/// tail, ordered lexicographically by tail.
pub fn orbit(field: &Field, x: &ProjectivePoint, d: usize, c: usize) -> Result<Vec<ProjectivePoint>, LiftError> {
    if x.coords().len() != d + c + 1 {
        return Err(LiftError::Dimension(format!("point {x} is not in PG({},q)", d + c)));
    }
    let head = project_through_vertex(field, x, d, c)?;
    let mut out = Vec::new();
    for_each_vector(field.q(), c, |tail| {
        let mut coords = head.coords().to_vec();
        coords.extend_from_slice(tail);
        out.push(ProjectivePoint::from_canonical(coords));
    });
    Ok(out)
}

/// Orbit of `x` computed by applying every group element; sorted.
pub fn orbit_brute_force(
    field: &Field,
    x: &ProjectivePoint,
    d: usize,
    c: usize,
    limits: &Limits,
) -> Result<Vec<ProjectivePoint>, LiftError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut err = None;
    for_each_group_element(field, d, c, limits, |g| match act(field, x, g) {
        Ok(p) => {
            seen.insert(p);
        }
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(seen.into_iter().collect())
}

/// The unique group element taking each `y` in `ys` to its projection in PG(d,q).
///
/// With `(L | M)` the stacked coordinates of `ys`, the matrix is `-L^{-1} M`.
pub fn transversal_mapper(
    field: &Field,
    ys: &[ProjectivePoint],
    d: usize,
    c: usize,
) -> Result<LiftingGroupElement, LiftError> {
    if ys.len() != d + 1 {
        return Err(LiftError::Input(format!("need d+1 = {} points, got {}", d + 1, ys.len())));
    }
    let n = d + c;
    if let Some(y) = ys.iter().find(|y| y.dim() != n) {
        return Err(LiftError::Dimension(format!("point {y} is not in PG({n},q)")));
    }
    let heads: Vec<&[Elem]> = ys.iter().map(|y| &y.coords()[..=d]).collect();
    let tails: Vec<&[Elem]> = ys.iter().map(|y| &y.coords()[d + 1..]).collect();
    let l = Matrix::from_rows(&heads, d + 1)?;
    let m = Matrix::from_rows(&tails, c)?;
    let l_inv = l.inverse(field).map_err(|e| match e {
        MatrixError::Singular { rank, .. } => LiftError::Hypothesis(format!(
            "the points together with the vertex do not span PG({n},q): head matrix has rank {rank} < {}",
            d + 1
        )),
        other => other.into(),
    })?;
    let mg = l_inv.mul(field, &m)?.neg(field);
    LiftingGroupElement::new(mg, d, c)
}

/// Order of the pointwise stabilizer of an independent `u`-subset of PG(d,q): `q^{c(d-u+1)}`.
pub fn stabilizer_size(field: &Field, z: &[ProjectivePoint], d: usize, c: usize) -> Result<u128, LiftError> {
    if let Some(p) = z.iter().find(|p| p.dim() != d) {
        return Err(LiftError::Dimension(format!("point {p} is not in PG({d},q)")));
    }
    let refs: Vec<&ProjectivePoint> = z.iter().collect();
    if !is_independent(field, &refs) {
        return Err(LiftError::Input(format!("the {} points are dependent", z.len())));
    }
    let exp = (c * (d + 1 - z.len())) as u64;
    checked_pow(u64::from(field.q()), exp)
        .ok_or(LiftError::Guard(GuardExceeded { what: "stabilizer order", required: u128::MAX, limit: u128::MAX }))
}

/// Counts group elements fixing every point of `z` (points of PG(d,q)) by trying them all.
pub fn stabilizer_size_brute_force(
    field: &Field,
    z: &[ProjectivePoint],
    d: usize,
    c: usize,
    limits: &Limits,
) -> Result<u128, LiftError> {
    let lifted: Vec<ProjectivePoint> = z.iter().map(|p| canonical_embed(p, d + c)).collect::<Result<_, _>>()?;
    let mut count = 0u128;
    for_each_group_element(field, d, c, limits, |g| {
        if lifted.iter().all(|p| act(field, p, g).as_ref() == Ok(p)) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Parameters of a lifted design, with counts in u128 so large `c` can be predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedParams {
    pub t: u64,
    pub s: u128,
    pub k: u64,
    pub lambda: u128,
    pub v: u128,
    pub block_count: u128,
}

impl PredictedParams {
    pub fn design_params(&self) -> Result<DesignParams, LiftError> {
        let too_big = |what| LiftError::Guard(GuardExceeded { what, required: u128::MAX, limit: u64::MAX.into() });
        Ok(DesignParams {
            t: self.t,
            s: u64::try_from(self.s).map_err(|_| too_big("class size"))?,
            k: self.k,
            lambda: u64::try_from(self.lambda).map_err(|_| too_big("lambda"))?,
        })
    }
}

impl fmt::Display for PredictedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-({},{},{}) v={} blocks={}",
            self.t, self.s, self.k, self.lambda, self.v, self.block_count
        )
    }
}

fn overflow(what: &'static str) -> LiftError {
    LiftError::Guard(GuardExceeded { what, required: u128::MAX, limit: u128::MAX })
}

/// Lifted parameters from the base data alone:
/// `t-(q^c s, k, q^{c(beta-t)} lambda)` on `q^c v` points with `b q^{c beta}` blocks.
pub fn lift_params(
    base: DesignParams,
    beta: usize,
    v: usize,
    b: usize,
    q: u32,
    c: usize,
) -> Result<PredictedParams, LiftError> {
    if (beta as u64) < base.t {
        return Err(LiftError::Hypothesis(format!("blocks have rank {beta} < t = {}", base.t)));
    }
    let q = u64::from(q);
    let c = c as u64;
    let fibre = checked_pow(q, c).ok_or_else(|| overflow("q^c"))?;
    let lambda_factor = checked_pow(q, c * (beta as u64 - base.t)).ok_or_else(|| overflow("q^{c(beta-t)}"))?;
    let block_factor = checked_pow(q, c * beta as u64).ok_or_else(|| overflow("q^{c beta}"))?;
    let mul = |a: u128, b: u128, what| a.checked_mul(b).ok_or_else(|| overflow(what));
    Ok(PredictedParams {
        t: base.t,
        s: mul(fibre, base.s.into(), "class size")?,
        k: base.k,
        lambda: mul(lambda_factor, base.lambda.into(), "lambda")?,
        v: mul(fibre, v as u128, "point count")?,
        block_count: mul(block_factor, b as u128, "block count")?,
    })
}

/// Parameters the lift of `ctx` is guaranteed to have; `c = 0` gives the base parameters.
pub fn predicted_params(ctx: &LiftingContext) -> Result<PredictedParams, LiftError> {
    let base = ctx.base();
    lift_params(base.params(), base.beta(), base.v(), base.blocks().len(), ctx.field().q(), ctx.c())
}

/// Provenance of a design derived from `base` by `method`.
pub(crate) fn derived_provenance(
    method: Method,
    base: &Provenance,
    c: Option<u64>,
    w: Option<u64>,
    field: Option<&Field>,
) -> Provenance {
    let from = (base.method != Method::Generator || base.base.from.is_some()).then(|| Box::new(base.clone()));
    Provenance {
        method,
        base: BaseDescriptor { name: base.base.name.clone(), args: base.base.args.clone(), from },
        c,
        w,
        field: field.map(|f| f.spec().clone()),
    }
}
