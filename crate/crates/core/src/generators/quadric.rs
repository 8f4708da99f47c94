//! The elliptic quadric of PG(3,q) and its Möbius plane of plane sections.

use crate::design::{DesignParams, Provenance};
use crate::field::{Elem, Field};
use crate::geometry::{enumerate_points, hyperplanes, ProjectivePoint};
use crate::limits::Limits;

use super::embedded::EmbeddedDesign;
use super::GeneratorError;

/// Smallest `(b, c)` (by element code) such that `z^2 + b z + c` has no root in GF(q).
/// Then `x^2 + b x y + c y^2` is an irreducible binary quadratic form.
pub fn irreducible_binary_form(field: &Field) -> Option<(Elem, Elem)> {
    for b in field.elements() {
        for c in field.elements() {
            let has_root = field
                .elements()
                .any(|z| field.add(field.add(field.mul(z, z), field.mul(b, z)), c).is_zero());
            if !has_root {
                return Some((b, c));
            }
        }
    }
    None
}

/// The `q^2+1` points of `x0 x1 + phi(x2, x3) = 0` with blocks the `q+1`-point plane sections:
/// a 3-(1, q+1, 1) design (the Möbius plane) with blocks of rank 3.
pub fn elliptic_quadric(field: &Field, limits: &Limits) -> Result<EmbeddedDesign, GeneratorError> {
    let q = field.q();
    let (b, c) = irreducible_binary_form(field)
        .ok_or_else(|| GeneratorError::Invariant("no irreducible binary quadratic form".into()))?;
    let form = |x: &[Elem]| {
        let phi = field.add(
            field.add(field.mul(x[2], x[2]), field.mul(b, field.mul(x[2], x[3]))),
            field.mul(c, field.mul(x[3], x[3])),
        );
        field.add(field.mul(x[0], x[1]), phi)
    };
    let points: Vec<ProjectivePoint> =
        enumerate_points(field, 3, limits)?.into_iter().filter(|p| form(p.coords()).is_zero()).collect();
    let expected = u64::from(q) * u64::from(q) + 1;
    if points.len() as u64 != expected {
        return Err(GeneratorError::Invariant(format!("quadric has {} points, expected {expected}", points.len())));
    }
    let mut blocks = Vec::new();
    for h in hyperplanes(field, 3, limits)? {
        let section: Vec<u32> =
            (0..points.len() as u32).filter(|&i| h.contains(field, &points[i as usize])).collect();
        match section.len() {
            1 => {}
            n if n as u32 == q + 1 => blocks.push(section),
            n => return Err(GeneratorError::Invariant(format!("plane section of size {n}"))),
        }
    }
    let v = points.len() as u32;
    let d = EmbeddedDesign::new(
        field.clone(),
        3,
        points,
        (0..v).map(|i| vec![i]).collect(),
        blocks,
        DesignParams { t: 3, s: 1, k: u64::from(q) + 1, lambda: 1 },
        Provenance::generator("quadric", &[("q", u64::from(q))], Some(field)),
        limits,
    )?;
    if d.beta() != 3 {
        return Err(GeneratorError::Invariant(format!("circles have rank {}, expected 3", d.beta())));
    }
    Ok(d)
}
