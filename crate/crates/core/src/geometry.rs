//! Points and subspaces of PG(n,q).
//!
//! A point is stored by its canonical representative: the homogeneous
//! coordinate vector whose leftmost nonzero entry is 1. Subspaces are stored by
//! a reduced echelon basis, so structural equality is set equality.
//!
//! The lifting constructions work inside PG(d+c, q), where the first `d+1`
//! coordinates carry the base space PG(d,q) and the last `c` coordinates span
//! the vertex subspace.

use std::fmt;

use thiserror::Error;

use crate::field::{Elem, Field};
use crate::limits::{checked_pow, GuardExceeded, Limits};
use crate::matrix::{rank_of, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("coordinate {code} is not an element of GF({q})")]
    BadCoordinate { code: u32, q: u32 },
    #[error("point has {got} coordinates, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("point {0} lies in the vertex subspace")]
    InVertex(String),
    #[error("vertex subspace needs c >= 1")]
    EmptyVertex,
    #[error("cannot embed PG({from},q) into PG({to},q)")]
    BadEmbedding { from: usize, to: usize },
    #[error("span of an empty point set")]
    EmptySpan,
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
}

/// Canonical representative of a point of PG(n,q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Elem>,
}

impl ProjectivePoint {
    /// Scales `v` so that its leftmost nonzero coordinate is 1.
    pub fn normalize(field: &Field, v: &[Elem]) -> Result<Self, GeometryError> {
        if let Some(bad) = v.iter().find(|e| !field.contains(**e)) {
            return Err(GeometryError::BadCoordinate { code: bad.0, q: field.q() });
        }
        let lead = *v.iter().find(|e| !e.is_zero()).ok_or(GeometryError::ZeroVector)?;
        if lead == Elem::ONE {
            return Ok(Self { coords: v.to_vec() });
        }
        let inv = field.inv(lead).expect("nonzero");
        Ok(Self { coords: v.iter().map(|&x| field.mul(x, inv)).collect() })
    }

    /// Wraps coordinates already in canonical form.
    pub(crate) fn from_canonical(coords: Vec<Elem>) -> Self {
        debug_assert!(coords.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE));
        Self { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_canonical(&self) -> bool {
        self.coords.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.0)?;
        }
        write!(f, ")")
    }
}

/// Index of a point in a design's point table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u32);

/// Number of points of PG(n,q), `(q^{n+1}-1)/(q-1)`.
pub fn point_count(n: usize, q: u32) -> u128 {
    let q = u128::from(q);
    (0..=n).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1))
}

/// Calls `f` on every vector of GF(q)^len in lexicographic order.
pub fn for_each_vector(q: u32, len: usize, mut f: impl FnMut(&[Elem])) {
    let mut v = vec![Elem::ZERO; len];
    loop {
        f(&v);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i].0 + 1 < q {
                v[i].0 += 1;
                break;
            }
            v[i] = Elem::ZERO;
        }
    }
}

/// All points of PG(n,q) in lexicographic order of their canonical coordinates.
pub fn enumerate_points(field: &Field, n: usize, limits: &Limits) -> Result<Vec<ProjectivePoint>, GeometryError> {
    let count = point_count(n, field.q());
    GuardExceeded::check("points of PG(n,q)", count, limits.max_points)?;
    let mut out = Vec::with_capacity(count as usize);
    // Leading 1 at position `lead`; later positions free. A larger `lead` sorts first.
    for lead in (0..=n).rev() {
        for_each_vector(field.q(), n - lead, |tail| {
            let mut coords = vec![Elem::ZERO; n + 1];
            coords[lead] = Elem::ONE;
            coords[lead + 1..].copy_from_slice(tail);
            out.push(ProjectivePoint { coords });
        });
    }
    Ok(out)
}

/// A subspace of PG(n,q) held by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn from_vectors<R: AsRef<[Elem]>>(field: &Field, vectors: &[R], ambient_dim: usize) -> Self {
        let m = Matrix::from_rows(vectors, ambient_dim + 1).expect("coordinate vectors of equal length");
        Self { basis: m.row_space_basis(field).0 }
    }

    pub fn whole(n: usize) -> Self {
        Self { basis: Matrix::identity(n + 1) }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Vector-space dimension (rank).
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn dim(&self) -> isize {
        self.basis.rows() as isize - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols() - 1
    }

    pub fn contains(&self, field: &Field, x: &ProjectivePoint) -> bool {
        let mut rows: Vec<&[Elem]> = self.basis.iter_rows().collect();
        rows.push(x.coords());
        rank_of(field, &rows) == self.rank()
    }

    /// Smallest subspace containing both.
    pub fn join(&self, field: &Field, other: &Subspace) -> Subspace {
        let rows: Vec<&[Elem]> = self.basis.iter_rows().chain(other.basis.iter_rows()).collect();
        Self::from_vectors(field, &rows, self.ambient_dim())
    }

    /// Linear equations cutting out the subspace, one per row.
    pub fn equations(&self, field: &Field) -> Matrix {
        self.basis.kernel(field)
    }
}

/// Smallest subspace containing `points`.
pub fn span(field: &Field, points: &[ProjectivePoint]) -> Result<Subspace, GeometryError> {
    let first = points.first().ok_or(GeometryError::EmptySpan)?;
    let rows: Vec<&[Elem]> = points.iter().map(|p| p.coords()).collect();
    Ok(Subspace::from_vectors(field, &rows, first.dim()))
}

/// True iff the coordinate vectors are linearly independent.
pub fn is_independent(field: &Field, points: &[&ProjectivePoint]) -> bool {
    let rows: Vec<&[Elem]> = points.iter().map(|p| p.coords()).collect();
    rank_of(field, &rows) == points.len()
}

/// The vertex `x_0 = ... = x_d = 0` in PG(d+c, q): span of the last `c` unit vectors.
pub fn vertex_subspace(d: usize, c: usize) -> Result<Subspace, GeometryError> {
    if c == 0 {
        return Err(GeometryError::EmptyVertex);
    }
    let mut basis = Matrix::zeros(c, d + c + 1);
    for j in 0..c {
        basis[(j, d + 1 + j)] = Elem::ONE;
    }
    Ok(Subspace { basis })
}

/// Projection of PG(d+c,q) minus the vertex onto PG(d,q): keep the first `d+1` coordinates.
pub fn project_through_vertex(
    field: &Field,
    x: &ProjectivePoint,
    d: usize,
    c: usize,
) -> Result<ProjectivePoint, GeometryError> {
    if x.coords.len() != d + c + 1 {
        return Err(GeometryError::WrongLength { expected: d + c + 1, got: x.coords.len() });
    }
    ProjectivePoint::normalize(field, &x.coords[..=d]).map_err(|_| GeometryError::InVertex(x.to_string()))
}

/// PG(d,q) as the subspace `x_{d+1} = ... = x_n = 0` of PG(n,q).
pub fn canonical_embed(x: &ProjectivePoint, n: usize) -> Result<ProjectivePoint, GeometryError> {
    let d = x.dim();
    if n < d {
        return Err(GeometryError::BadEmbedding { from: d, to: n });
    }
    let mut coords = x.coords.clone();
    coords.resize(n + 1, Elem::ZERO);
    Ok(ProjectivePoint { coords })
}

/// A hyperplane given by its normalized dual coordinates `a`: points with `a . x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: ProjectivePoint,
}

impl Hyperplane {
    pub fn new(normal: ProjectivePoint) -> Self {
        Self { normal }
    }

    pub fn normal(&self) -> &ProjectivePoint {
        &self.normal
    }

    pub fn contains(&self, field: &Field, x: &ProjectivePoint) -> bool {
        field.dot(self.normal.coords(), x.coords()).is_zero()
    }

    pub fn subspace(&self, field: &Field) -> Subspace {
        let eq = Matrix::from_rows(&[self.normal.coords()], self.normal.coords().len()).unwrap();
        Subspace { basis: eq.kernel(field).row_space_basis(field).0 }
    }
}

/// All hyperplanes of PG(n,q), in the enumeration order of their dual coordinates.
pub fn hyperplanes(field: &Field, n: usize, limits: &Limits) -> Result<Vec<Hyperplane>, GeometryError> {
    Ok(enumerate_points(field, n, limits)?.into_iter().map(Hyperplane::new).collect())
}

/// Packs a canonical coordinate vector into an integer key (base q digits).
pub fn point_key(q: u32, coords: &[Elem]) -> u128 {
    coords.iter().fold(0u128, |acc, e| acc * u128::from(q) + u128::from(e.0))
}

/// `q^len` vectors exist in GF(q)^len; `None` on overflow.
pub fn vector_count(q: u32, len: usize) -> Option<u128> {
    checked_pow(u64::from(q), len as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn pt(f: &Field, v: &[i64]) -> ProjectivePoint {
        let v: Vec<Elem> = v.iter().map(|&x| f.from_int(x)).collect();
        ProjectivePoint::normalize(f, &v).unwrap()
    }

    fn ints(p: &ProjectivePoint) -> Vec<u32> {
        p.coords().iter().map(|e| e.0).collect()
    }

    #[test]
    fn normalize_examples() {
        let f3 = gf(3);
        assert_eq!(ints(&pt(&f3, &[0, 2, 1])), vec![0, 1, 2]);
        assert_eq!(ints(&pt(&f3, &[1, 0, 0])), vec![1, 0, 0]);
        assert_eq!(ints(&pt(&f3, &[2, 2])), vec![1, 1]);
        assert_eq!(
            ProjectivePoint::normalize(&f3, &[Elem::ZERO, Elem::ZERO]),
            Err(GeometryError::ZeroVector)
        );
        assert!(matches!(
            ProjectivePoint::normalize(&f3, &[Elem(5)]),
            Err(GeometryError::BadCoordinate { .. })
        ));
    }

    #[test]
    fn normalize_is_scale_invariant_on_pg23() {
        let f3 = gf(3);
        for_each_vector(3, 3, |v| {
            if v.iter().all(|e| e.is_zero()) {
                return;
            }
            let p = ProjectivePoint::normalize(&f3, v).unwrap();
            assert_eq!(ProjectivePoint::normalize(&f3, p.coords()).unwrap(), p);
            for lambda in [Elem(1), Elem(2)] {
                let scaled: Vec<Elem> = v.iter().map(|&x| f3.mul(x, lambda)).collect();
                assert_eq!(ProjectivePoint::normalize(&f3, &scaled).unwrap(), p);
            }
        });
    }

    #[test]
    fn enumeration_counts_and_order() {
        let lim = Limits::default();
        let pts = enumerate_points(&gf(2), 1, &lim).unwrap();
        assert_eq!(pts.iter().map(ints).collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_points(&gf(3), 2, &lim).unwrap().len(), 13);
        assert_eq!(enumerate_points(&gf(3), 5, &lim).unwrap().len(), 364);
        for (q, n) in [(2u64, 3usize), (3, 3), (4, 2), (5, 2), (7, 1), (9, 2)] {
            let f = gf(q);
            let pts = enumerate_points(&f, n, &lim).unwrap();
            assert_eq!(pts.len() as u128, point_count(n, f.q()));
            assert!(pts.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
            assert!(pts.iter().all(|p| p.is_canonical()));
        }
        let tight = Limits { max_points: 12, ..Limits::default() };
        assert!(matches!(enumerate_points(&gf(3), 2, &tight), Err(GeometryError::Guard(_))));
    }

    #[test]
    fn span_and_independence() {
        let f2 = gf(2);
        let f3 = gf(3);
        let one = span(&f3, &[pt(&f3, &[1, 2, 0])]).unwrap();
        assert_eq!(one.dim(), 0);
        let line = span(&f3, &[pt(&f3, &[1, 0, 0]), pt(&f3, &[0, 1, 0])]).unwrap();
        assert_eq!(line.dim(), 1);
        let eq = line.equations(&f3);
        assert_eq!(eq.rows(), 1);
        assert_eq!(eq.row(0), &[Elem(0), Elem(0), Elem(1)]);
        assert!(line.contains(&f3, &pt(&f3, &[1, 1, 0])));
        assert!(!line.contains(&f3, &pt(&f3, &[1, 1, 1])));

        let a = pt(&f2, &[1, 0]);
        let b = pt(&f2, &[0, 1]);
        let c = pt(&f2, &[1, 1]);
        assert!(is_independent(&f2, &[&a]));
        assert!(!is_independent(&f2, &[&a, &b, &c]));
        assert!(span(&f2, &[]).is_err());
    }

    #[test]
    fn vertex_and_projection() {
        let f3 = gf(3);
        let s = vertex_subspace(2, 1).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.contains(&f3, &pt(&f3, &[0, 0, 0, 1])));
        let s = vertex_subspace(1, 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.ambient_dim(), 3);
        assert!(s.contains(&f3, &pt(&f3, &[0, 0, 1, 2])));
        assert_eq!(vertex_subspace(3, 0), Err(GeometryError::EmptyVertex));

        let x = pt(&f3, &[1, 2, 0, 2]);
        assert_eq!(ints(&project_through_vertex(&f3, &x, 2, 1).unwrap()), vec![1, 2, 0]);
        let x = pt(&f3, &[0, 1, 2, 1]);
        assert_eq!(ints(&project_through_vertex(&f3, &x, 2, 1).unwrap()), vec![0, 1, 2]);
        let s_pt = pt(&f3, &[0, 0, 0, 1]);
        assert!(matches!(project_through_vertex(&f3, &s_pt, 2, 1), Err(GeometryError::InVertex(_))));
    }

    #[test]
    fn embed_examples() {
        let f3 = gf(3);
        assert_eq!(ints(&canonical_embed(&pt(&f3, &[1, 1]), 2).unwrap()), vec![1, 1, 0]);
        assert_eq!(ints(&canonical_embed(&pt(&f3, &[0, 1, 2]), 4).unwrap()), vec![0, 1, 2, 0, 0]);
        let p = pt(&f3, &[1, 2]);
        assert_eq!(canonical_embed(&p, 1).unwrap(), p);
        assert!(canonical_embed(&p, 0).is_err());
    }

    #[test]
    fn projection_inverts_embedding_and_fibres_have_q_to_c_points() {
        let lim = Limits::default();
        for (q, d, c) in [(2u64, 2usize, 1usize), (3, 1, 2), (3, 2, 1), (4, 1, 1)] {
            let f = gf(q);
            for x in enumerate_points(&f, d, &lim).unwrap() {
                let up = canonical_embed(&x, d + c).unwrap();
                assert_eq!(project_through_vertex(&f, &up, d, c).unwrap(), x);
            }
            let big = enumerate_points(&f, d + c, &lim).unwrap();
            let mut fibres = std::collections::HashMap::new();
            for y in &big {
                if let Ok(img) = project_through_vertex(&f, y, d, c) {
                    *fibres.entry(img).or_insert(0u64) += 1;
                }
            }
            assert_eq!(fibres.len() as u128, point_count(d, f.q()));
            assert!(fibres.values().all(|&n| n == q.pow(c as u32)));
        }
    }

    #[test]
    fn hyperplane_counts() {
        let lim = Limits::default();
        let f2 = gf(2);
        assert_eq!(hyperplanes(&f2, 1, &lim).unwrap().len(), 3);
        let fano = hyperplanes(&f2, 2, &lim).unwrap();
        assert_eq!(fano.len(), 7);
        let pts = enumerate_points(&f2, 2, &lim).unwrap();
        for h in &fano {
            assert_eq!(pts.iter().filter(|p| h.contains(&f2, p)).count(), 3);
            assert_eq!(h.subspace(&f2).dim(), 1);
        }
        assert_eq!(hyperplanes(&gf(3), 5, &lim).unwrap().len(), 364);
    }
}
