//! Canonical JSON documents for designs, and the plain-text matrix format.
//!
//! Keys are written in a fixed order and every number is an integer, so two
//! builds of the same design produce identical bytes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{class_index, DesignParams, DivisibleDesign, PointTable, Provenance};
use crate::field::{Elem, Field, FieldSpec};
use crate::geometry::ProjectivePoint;
use crate::matrix::Matrix;
use crate::verify::Fingerprint;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing schema_version")]
    MissingVersion,
    #[error("unsupported schema_version {found} (this build reads version {SCHEMA_VERSION})")]
    UnsupportedVersion { found: String },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("matrix line {line}: {message}")]
    Matrix { line: usize, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Invalid { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Projective,
    Affine,
    Label,
}

/// One coordinate: a residue for prime fields and labels, a coefficient vector
/// (low degree first) for extension fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Residue(u32),
    Coeffs(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDocument {
    pub schema_version: u64,
    pub field: Option<FieldSpec>,
    pub ambient_dim: Option<usize>,
    pub point_kind: PointKind,
    pub points: Vec<Vec<Coordinate>>,
    pub classes: Vec<Vec<u32>>,
    pub blocks: Vec<Vec<u32>>,
    pub params: DesignParams,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
}

fn encode(field: &Field, coords: &[Elem]) -> Vec<Coordinate> {
    coords
        .iter()
        .map(|&e| if field.degree() == 1 { Coordinate::Residue(e.0) } else { Coordinate::Coeffs(field.coeffs(e)) })
        .collect()
}

fn decode(field: &Field, coords: &[Coordinate], path: &str) -> Result<Vec<Elem>, DocumentError> {
    coords
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let r = match c {
                Coordinate::Residue(x) if field.degree() == 1 => field.element(*x),
                Coordinate::Coeffs(cs) if field.degree() > 1 => field.from_coeffs(cs),
                _ => {
                    return Err(invalid(
                        format!("{path}[{j}]"),
                        if field.degree() == 1 {
                            "expected a residue"
                        } else {
                            "expected a coefficient array"
                        },
                    ))
                }
            };
            r.map_err(|e| invalid(format!("{path}[{j}]"), e.to_string()))
        })
        .collect()
}

impl DesignDocument {
    pub fn from_design(d: &DivisibleDesign, fingerprint: Option<Fingerprint>) -> Self {
        let (field, ambient_dim, point_kind, points) = match d.points() {
            PointTable::Projective { field, dim, points } => (
                Some(field.spec().clone()),
                Some(*dim),
                PointKind::Projective,
                points.iter().map(|p| encode(field, p.coords())).collect(),
            ),
            PointTable::Affine { field, dim, points } => (
                Some(field.spec().clone()),
                Some(*dim),
                PointKind::Affine,
                points.iter().map(|p| encode(field, p)).collect(),
            ),
            PointTable::Labels(labels) => (
                None,
                None,
                PointKind::Label,
                labels.iter().map(|l| l.iter().map(|&x| Coordinate::Residue(x)).collect()).collect(),
            ),
        };
        Self {
            schema_version: SCHEMA_VERSION,
            field,
            ambient_dim,
            point_kind,
            points,
            classes: d.classes().to_vec(),
            blocks: d.blocks().to_vec(),
            params: d.params(),
            provenance: d.provenance().clone(),
            fingerprint,
        }
    }

    /// Compact canonical JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        match value.get("schema_version") {
            None => return Err(DocumentError::MissingVersion),
            Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
            Some(v) => return Err(DocumentError::UnsupportedVersion { found: v.to_string() }),
        }
        let doc: Self = serde_path_to_error::deserialize(value).map_err(|e| DocumentError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        doc.validate()?;
        Ok(doc)
    }

    /// Checks everything except the design axioms.
    pub fn validate(&self) -> Result<(), DocumentError> {
        self.to_design().map(|_| ())
    }

    pub fn to_design(&self) -> Result<DivisibleDesign, DocumentError> {
        let v = self.points.len();
        let table = match self.point_kind {
            PointKind::Label => {
                if self.ambient_dim.is_some() {
                    return Err(invalid("ambient_dim", "must be null for labelled points"));
                }
                let mut labels = Vec::with_capacity(v);
                for (i, p) in self.points.iter().enumerate() {
                    let mut l = Vec::with_capacity(p.len());
                    for (j, c) in p.iter().enumerate() {
                        match c {
                            Coordinate::Residue(x) => l.push(*x),
                            Coordinate::Coeffs(_) => return Err(invalid(format!("points[{i}][{j}]"), "labels are integers")),
                        }
                    }
                    labels.push(l);
                }
                PointTable::Labels(labels)
            }
            kind => {
                let spec = self.field.as_ref().ok_or_else(|| invalid("field", "required for coordinate points"))?;
                let spec = FieldSpec::new(spec.p, spec.e, spec.modulus.clone())
                    .map_err(|e| invalid("field", e.to_string()))?;
                let field = Field::new(spec);
                let dim = self.ambient_dim.ok_or_else(|| invalid("ambient_dim", "required for coordinate points"))?;
                let len = if kind == PointKind::Projective { dim + 1 } else { dim };
                let mut coords = Vec::with_capacity(v);
                for (i, p) in self.points.iter().enumerate() {
                    let path = format!("points[{i}]");
                    if p.len() != len {
                        return Err(invalid(path, format!("expected {len} coordinates, got {}", p.len())));
                    }
                    coords.push(decode(&field, p, &path)?);
                }
                if kind == PointKind::Projective {
                    let mut points = Vec::with_capacity(v);
                    for (i, c) in coords.into_iter().enumerate() {
                        let p = ProjectivePoint::normalize(&field, &c)
                            .map_err(|e| invalid(format!("points[{i}]"), e.to_string()))?;
                        if p.coords() != c.as_slice() {
                            return Err(invalid(format!("points[{i}]"), "not in canonical form (leading nonzero must be 1)"));
                        }
                        points.push(p);
                    }
                    PointTable::Projective { field, dim, points }
                } else {
                    PointTable::Affine { field, dim, points: coords }
                }
            }
        };
        for (ci, c) in self.classes.iter().enumerate() {
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("classes[{ci}]"), "not sorted ascending"));
            }
        }
        class_index(v, &self.classes).map_err(|e| invalid("classes", e.to_string()))?;
        for (bi, b) in self.blocks.iter().enumerate() {
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("blocks[{bi}]"), "not sorted ascending"));
            }
            if let Some(&x) = b.iter().find(|&&x| x as usize >= v) {
                return Err(invalid(format!("blocks[{bi}]"), format!("point index {x} out of range (v = {v})")));
            }
        }
        DivisibleDesign::new(table, self.classes.clone(), self.blocks.clone(), self.params, self.provenance.clone())
            .map_err(|e| invalid("design", e.to_string()))
    }
}

/// Reads a matrix over `field` from text: either a JSON array of rows, or one row
/// per line of whitespace-separated entries. Blank lines and `#` comments are
/// skipped. Prime-field entries may be any integer and are reduced; extension
/// field entries are element codes below `q`.
pub fn parse_matrix(field: &Field, text: &str) -> Result<Matrix, DocumentError> {
    let rows: Vec<(usize, Vec<i64>)> = if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<i64>> = serde_json::from_str(text)
            .map_err(|e| DocumentError::Matrix { line: e.line(), message: e.to_string() })?;
        rows.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect()
    } else {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| DocumentError::Matrix { line: i + 1, message: format!("'{tok}' is not an integer") })
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push((i + 1, row));
        }
        out
    };
    let Some((_, first)) = rows.first() else {
        return Err(DocumentError::Matrix { line: 1, message: "matrix is empty".into() });
    };
    let cols = first.len();
    let mut data = Vec::with_capacity(rows.len() * cols);
    for (line, row) in &rows {
        if row.len() != cols {
            return Err(DocumentError::Matrix {
                line: *line,
                message: format!("row has {} entries, expected {cols}", row.len()),
            });
        }
        for &x in row {
            let e = if field.degree() == 1 {
                field.from_int(x)
            } else {
                let code = u32::try_from(x).ok().filter(|&c| c < field.q()).ok_or_else(|| DocumentError::Matrix {
                    line: *line,
                    message: format!("{x} is not an element code of GF({})", field.q()),
                })?;
                Elem(code)
            };
            data.push(e);
        }
    }
    Matrix::new(rows.len(), cols, data).map_err(|e| DocumentError::Matrix { line: 1, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::AbstractDesign;

    #[test]
    fn label_document_round_trip() {
        let d = AbstractDesign::fano().to_divisible();
        let doc = DesignDocument::from_design(&d, None);
        let text = doc.to_json();
        assert!(text.starts_with("{\"schema_version\":1,\"field\":null,\"ambient_dim\":null,\"point_kind\":\"label\""));
        let back = DesignDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_design().unwrap(), d);
        assert!(!text.contains('.'));
    }

    #[test]
    fn extension_field_coordinates() {
        let f = Field::of_order(4).unwrap();
        let p = ProjectivePoint::normalize(&f, &[Elem(1), Elem(3)]).unwrap();
        let d = DivisibleDesign::new(
            PointTable::Projective { field: f.clone(), dim: 1, points: vec![p] },
            vec![vec![0]],
            vec![vec![0]],
            DesignParams { t: 1, s: 1, k: 1, lambda: 1 },
            Provenance::generator("x", &[], Some(&f)),
        )
        .unwrap();
        let doc = DesignDocument::from_design(&d, None);
        let text = doc.to_json();
        assert!(text.contains("\"points\":[[[1,0],[1,1]]]"), "{text}");
        assert_eq!(DesignDocument::parse(&text).unwrap().to_design().unwrap(), d);
    }

    #[test]
    fn parse_errors() {
        let d = AbstractDesign::fano().to_divisible();
        let text = DesignDocument::from_design(&d, None).to_json();
        let unsorted = text.replacen("[0,1,2]", "[1,0,2]", 1);
        match DesignDocument::parse(&unsorted) {
            Err(DocumentError::Invalid { path, .. }) => assert_eq!(path, "blocks[0]"),
            other => panic!("{other:?}"),
        }
        let v2 = text.replacen("\"schema_version\":1", "\"schema_version\":2", 1);
        assert!(matches!(DesignDocument::parse(&v2), Err(DocumentError::UnsupportedVersion { .. })));
        let bad_t = text.replacen("\"t\":2", "\"t\":\"two\"", 1);
        match DesignDocument::parse(&bad_t) {
            Err(DocumentError::Schema { path, .. }) => assert_eq!(path, "params.t"),
            other => panic!("{other:?}"),
        }
        let broken = text.replacen("{", "{\n\n", 1).replacen("\"blocks\"", "\"blocks\" ::", 1);
        assert!(matches!(DesignDocument::parse(&broken), Err(DocumentError::Syntax { line: 3, .. })));
    }

    #[test]
    fn matrix_text() {
        let f = Field::of_order(3).unwrap();
        let m = parse_matrix(&f, "# comment\n1 0 2\n\n0 1 -1\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m[(1, 2)], Elem(2));
        assert_eq!(parse_matrix(&f, "[[1,2],[0,1]]").unwrap()[(0, 1)], Elem(2));
        assert!(matches!(parse_matrix(&f, "1 0\n1 x\n"), Err(DocumentError::Matrix { line: 2, .. })));
        assert!(matches!(parse_matrix(&f, "1 0\n1\n"), Err(DocumentError::Matrix { line: 2, .. })));
    }
}
