//! Veronese mapping, normal rational curves and the covering-degree computation.

use crate::field::{Elem, Field};
use crate::geometry::{enumerate_points, for_each_vector, vector_count, ProjectivePoint};
use crate::limits::{GuardExceeded, Limits};
use crate::matrix::Matrix;

use super::GeneratorError;

/// Exponent vector `(e_0, ..., e_m)` of a monomial `x_0^{e_0} ... x_m^{e_m}`.
pub type ExponentSequence = Vec<u32>;

/// All exponent sequences of length `m+1` summing to `r`, in descending lexicographic order.
///
/// The order starts `(r,0,...,0), (r-1,1,0,...,0), ..., (r-1,0,...,0,1)`, so the
/// Veronese image of an affine point `(1, x_1, ..., x_m)` reads `(1, x_1, ..., x_m, ...)`.
pub fn exponent_sequences(m: usize, r: u32) -> Vec<ExponentSequence> {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<ExponentSequence>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(prefix, remaining - first, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m + 1), r, m + 1, &mut out);
    out
}

/// Evaluates every monomial of `exponents` at the coordinate vector `x`.
pub fn eval_monomials(field: &Field, exponents: &[ExponentSequence], x: &[Elem]) -> Vec<Elem> {
    exponents
        .iter()
        .map(|e| {
            e.iter()
                .zip(x)
                .fold(Elem::ONE, |acc, (&ei, &xi)| field.mul(acc, field.pow(xi, u64::from(ei))))
        })
        .collect()
}

/// Image of `p` under the degree-`r` Veronese map into PG(C(m+r,m)-1, q).
pub fn veronese_map(field: &Field, p: &ProjectivePoint, r: u32) -> ProjectivePoint {
    let exps = exponent_sequences(p.dim(), r);
    let y = eval_monomials(field, &exps, p.coords());
    ProjectivePoint::normalize(field, &y).expect("a monomial x_i^r is nonzero at every point")
}

/// The Veronese variety of PG(m,q) under degree-`r` monomials, in the enumeration order of PG(m,q).
pub fn veronese_variety(field: &Field, m: usize, r: u32, limits: &Limits) -> Result<Vec<ProjectivePoint>, GeneratorError> {
    let exps = exponent_sequences(m, r);
    let pts = enumerate_points(field, m, limits)?;
    Ok(pts
        .iter()
        .map(|p| ProjectivePoint::normalize(field, &eval_monomials(field, &exps, p.coords())).expect("nonzero"))
        .collect())
}

/// The normal rational curve in PG(r,q): `q+1` points.
pub fn normal_rational_curve(field: &Field, r: u32, limits: &Limits) -> Result<Vec<ProjectivePoint>, GeneratorError> {
    veronese_variety(field, 1, r, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Homogeneous forms vanishing on all of PG(m,q).
    Projective,
    /// Polynomials of bounded total degree vanishing on all of AG(m,q).
    Affine,
}

/// Smallest degree of a nonzero polynomial vanishing at every point of the space.
///
/// Projective mode uses homogeneous monomials of degree `r` evaluated at the
/// canonical representatives; affine mode uses all monomials in `m` variables of
/// total degree at most `r`. The answer is the first `r` whose evaluation matrix
/// has a nontrivial kernel.
pub fn min_covering_degree(field: &Field, m: usize, mode: CoverMode, limits: &Limits) -> Result<u32, GeneratorError> {
    let rows: Vec<Vec<Elem>> = match mode {
        CoverMode::Projective => enumerate_points(field, m, limits)?.into_iter().map(|p| p.into_coords()).collect(),
        CoverMode::Affine => {
            let count = vector_count(field.q(), m).unwrap_or(u128::MAX);
            GuardExceeded::check("points of AG(m,q)", count, limits.max_points)?;
            let mut pts = Vec::new();
            // Homogenize with x_0 = 1 so the same exponent sequences serve both modes.
            for_each_vector(field.q(), m, |v| {
                let mut h = vec![Elem::ONE];
                h.extend_from_slice(v);
                pts.push(h);
            });
            pts
        }
    };
    GuardExceeded::check("evaluation matrix rows", rows.len() as u128, limits.max_matrix_side as u64)?;
    for r in 1.. {
        let exps = exponent_sequences(m, r);
        GuardExceeded::check("evaluation matrix columns", exps.len() as u128, limits.max_matrix_side as u64)?;
        let evals: Vec<Vec<Elem>> = rows.iter().map(|x| eval_monomials(field, &exps, x)).collect();
        let matrix = Matrix::from_rows(&evals, exps.len())?;
        if matrix.rank(field) < exps.len() {
            return Ok(r);
        }
    }
    unreachable!()
}
