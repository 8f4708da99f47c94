//! Materializing lifted designs: points, classes and blocks.

use std::collections::{BTreeSet, HashMap};

use crate::combinatorics::Combinations;
use crate::design::{DivisibleDesign, Method, PointTable};
use crate::field::{Elem, Field};
use crate::geometry::{canonical_embed, for_each_vector, project_through_vertex, vector_count, ProjectivePoint};
use crate::limits::GuardExceeded;
use crate::matrix::{rank_of, Matrix};

use super::{act, derived_provenance, for_each_group_element, orbit, predicted_params, LiftError, LiftingContext};

/// Integer value of a vector of field elements read as base-q digits.
fn tail_rank(q: u32, tail: &[Elem]) -> u32 {
    tail.iter().fold(0u32, |acc, e| acc * q + e.0)
}

/// Points of the lifted design: base point `i` with tail of rank `r` gets index `i q^c + r`.
fn lifted_points(ctx: &LiftingContext) -> Result<Vec<ProjectivePoint>, LiftError> {
    let (d, c, n) = (ctx.d(), ctx.c(), ctx.n());
    let v = (ctx.base().v() as u128).saturating_mul(ctx.fibre_size());
    GuardExceeded::check("lifted points", v, ctx.limits().max_points)?;
    let mut out = Vec::with_capacity(v as usize);
    for p in ctx.base().points() {
        out.extend(orbit(ctx.field(), &canonical_embed(p, n)?, d, c)?);
    }
    Ok(out)
}

/// Index lookup for lifted points.
struct PointIndex {
    base: HashMap<ProjectivePoint, u32>,
    q: u32,
    fibre: u32,
    d: usize,
    c: usize,
}

impl PointIndex {
    fn new(ctx: &LiftingContext) -> Self {
        let base = ctx.base().points().iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        Self { base, q: ctx.field().q(), fibre: ctx.fibre_size() as u32, d: ctx.d(), c: ctx.c() }
    }

    fn index(&self, field: &Field, x: &ProjectivePoint) -> Option<u32> {
        let head = project_through_vertex(field, x, self.d, self.c).ok()?;
        // Only canonical heads are base points, so the tail needs no rescaling.
        if head.coords() != &x.coords()[..=self.d] {
            return None;
        }
        let i = *self.base.get(&head)?;
        Some(i * self.fibre + tail_rank(self.q, &x.coords()[self.d + 1..]))
    }
}

fn lifted_classes(ctx: &LiftingContext) -> Vec<Vec<u32>> {
    let fibre = ctx.fibre_size() as u32;
    ctx.base()
        .classes()
        .iter()
        .map(|class| {
            let mut out: Vec<u32> = class.iter().flat_map(|&i| (i * fibre)..(i * fibre + fibre)).collect();
            out.sort_unstable();
            out
        })
        .collect()
}

/// Blocks of the lift, one per base block and tail assignment on an independent
/// `beta`-subset of it. Sorted, without duplicates.
fn direct_blocks(ctx: &LiftingContext) -> Result<Vec<Vec<u32>>, LiftError> {
    let field = ctx.field();
    let base = ctx.base();
    let (d, c, q) = (ctx.d(), ctx.c(), field.q());
    let beta = base.beta();
    let per_block = vector_count(q, beta * c).unwrap_or(u128::MAX);
    let total = per_block.saturating_mul(base.blocks().len() as u128);
    GuardExceeded::check("lifted blocks", total, ctx.limits().max_blocks)?;
    let fibre = ctx.fibre_size() as u32;
    let mut blocks = Vec::with_capacity(total as usize);
    for block in base.blocks() {
        let coords: Vec<&[Elem]> = block.iter().map(|&x| base.points()[x as usize].coords()).collect();
        // Greedy independent beta-subset Z of the block.
        let mut z: Vec<&[Elem]> = Vec::with_capacity(beta);
        for &row in &coords {
            z.push(row);
            if rank_of(field, &z) < z.len() {
                z.pop();
            }
        }
        debug_assert_eq!(z.len(), beta);
        let zm = Matrix::from_rows(&z, d + 1)?;
        let (_, pivots) = zm.row_space_basis(field);
        let square: Vec<Vec<Elem>> = z.iter().map(|r| pivots.iter().map(|&j| r[j]).collect()).collect();
        let inv = Matrix::from_rows(&square, beta)?.inverse(field)?;
        // Coefficients of every block point in terms of Z.
        let mu: Vec<Vec<Elem>> = coords
            .iter()
            .map(|x| {
                let xp: Vec<Elem> = pivots.iter().map(|&j| x[j]).collect();
                inv.left_mul_vec(field, &xp)
            })
            .collect();
        for_each_vector(q, beta * c, |a| {
            let mut out: Vec<u32> = block
                .iter()
                .zip(&mu)
                .map(|(&x, m)| {
                    let mut rank = 0u32;
                    for j in 0..c {
                        let mut y = Elem::ZERO;
                        for (zi, &coef) in m.iter().enumerate() {
                            y = field.add(y, field.mul(coef, a[zi * c + j]));
                        }
                        rank = rank * q + y.0;
                    }
                    x * fibre + rank
                })
                .collect();
            out.sort_unstable();
            blocks.push(out);
        });
    }
    blocks.sort_unstable();
    blocks.dedup();
    Ok(blocks)
}

/// The lifted design of `ctx`: union of the orbits of the base points, classes
/// above the base classes, and the images of the base blocks under the group.
/// The declared parameters are the predicted ones.
pub fn build_lifted_design(ctx: &LiftingContext) -> Result<DivisibleDesign, LiftError> {
    let blocks = direct_blocks(ctx)?;
    assemble(ctx, blocks, Method::MatrixLift)
}

/// The same design with blocks taken as sections of the cone by complements of the vertex.
pub fn build_section_design(ctx: &LiftingContext) -> Result<DivisibleDesign, LiftError> {
    let blocks = section_blocks(ctx)?;
    assemble(ctx, blocks, Method::Sections)
}

fn assemble(ctx: &LiftingContext, blocks: Vec<Vec<u32>>, method: Method) -> Result<DivisibleDesign, LiftError> {
    let base = ctx.base();
    if ctx.c() == 0 {
        return Ok(base.to_divisible());
    }
    let params = predicted_params(ctx)?.design_params()?;
    let points = lifted_points(ctx)?;
    let provenance =
        derived_provenance(method, base.provenance(), Some(ctx.c() as u64), None, Some(ctx.field()));
    Ok(DivisibleDesign::new(
        PointTable::Projective { field: ctx.field().clone(), dim: ctx.n(), points },
        lifted_classes(ctx),
        blocks,
        params,
        provenance,
    )?)
}

/// Lifted blocks obtained by applying every group element to every base block.
pub fn lifted_blocks_brute_force(ctx: &LiftingContext) -> Result<Vec<Vec<u32>>, LiftError> {
    let field = ctx.field();
    let base = ctx.base();
    let (d, c, n) = (ctx.d(), ctx.c(), ctx.n());
    let index = PointIndex::new(ctx);
    let embedded: Vec<ProjectivePoint> =
        base.points().iter().map(|p| canonical_embed(p, n)).collect::<Result<_, _>>()?;
    let mut out = BTreeSet::new();
    let mut err = None;
    for_each_group_element(field, d, c, ctx.limits(), |g| {
        for block in base.blocks() {
            let mut image = Vec::with_capacity(block.len());
            for &x in block {
                match act(field, &embedded[x as usize], g) {
                    Ok(y) => image.push(index.index(field, &y).expect("images stay in the cone")),
                    Err(e) => err = Some(e),
                }
            }
            image.sort_unstable();
            out.insert(image);
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(out.into_iter().collect())
}

/// Sections `X ∩ D` of the cone by every `d`-dimensional subspace `D` disjoint
/// from the vertex. The base must be a single block containing all base points.
///
/// Subspaces are enumerated as reduced echelon bases, so the count is the
/// Gaussian binomial `[d+c+1, d+1]_q`, checked against the group-element cap.
pub fn section_blocks(ctx: &LiftingContext) -> Result<Vec<Vec<u32>>, LiftError> {
    let base = ctx.base();
    if base.blocks().len() != 1 || base.blocks()[0].len() != base.v() {
        return Err(LiftError::Hypothesis(
            "section blocks need a base with one block containing every point".into(),
        ));
    }
    let Some(vertex) = ctx.vertex() else {
        return Ok(base.blocks().to_vec());
    };
    let field = ctx.field();
    let q = field.q();
    let (d, n) = (ctx.d(), ctx.n());
    let rows = d + 1;
    let cols = n + 1;
    let mut subspaces = 0u128;
    let mut combos = Combinations::new(cols, rows);
    while let Some(piv) = combos.next_subset() {
        let free: usize = piv.iter().enumerate().map(|(i, &p)| cols - 1 - p - (rows - 1 - i)).sum();
        subspaces = subspaces.saturating_add(vector_count(q, free).unwrap_or(u128::MAX));
    }
    GuardExceeded::check("subspaces of PG(n,q)", subspaces, ctx.limits().max_group_elements)?;

    let points = lifted_points(ctx)?;
    let mut blocks = BTreeSet::new();
    let mut combos = Combinations::new(cols, rows);
    while let Some(piv) = combos.next_subset() {
        let piv = piv.to_vec();
        let free_slots: Vec<(usize, usize)> = (0..rows)
            .flat_map(|i| ((piv[i] + 1)..cols).filter(|j| !piv.contains(j)).map(move |j| (i, j)))
            .collect();
        let mut fail = None;
        for_each_vector(q, free_slots.len(), |vals| {
            if fail.is_some() {
                return;
            }
            let mut m = Matrix::zeros(rows, cols);
            for (i, &p) in piv.iter().enumerate() {
                m[(i, p)] = Elem::ONE;
            }
            for (&(i, j), &v) in free_slots.iter().zip(vals) {
                m[(i, j)] = v;
            }
            let joined: Vec<&[Elem]> = m.iter_rows().chain(vertex.basis().iter_rows()).collect();
            if rank_of(field, &joined) != cols {
                return;
            }
            let eq = m.kernel(field);
            let section: Vec<u32> = (0..points.len() as u32)
                .filter(|&i| on_equations(field, &eq, &points[i as usize]))
                .collect();
            if section.len() != base.v() {
                fail = Some(section.len());
                return;
            }
            blocks.insert(section);
        });
        if let Some(size) = fail {
            return Err(LiftError::Hypothesis(format!(
                "a complement of the vertex meets the cone in {size} points, expected {}",
                base.v()
            )));
        }
    }
    Ok(blocks.into_iter().collect())
}

fn on_equations(field: &Field, eq: &Matrix, x: &ProjectivePoint) -> bool {
    eq.iter_rows().all(|row| field.dot(row, x.coords()).is_zero())
}
