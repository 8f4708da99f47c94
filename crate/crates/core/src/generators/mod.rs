//! Base point sets and base designs embedded in PG(d,q).

mod code;
mod embedded;
mod golay;
mod quadric;
mod veronese;

use thiserror::Error;

use crate::design::DesignError;
use crate::field::FieldError;
use crate::geometry::GeometryError;
use crate::limits::GuardExceeded;
use crate::matrix::MatrixError;

pub use code::{code_point_set, codewords, min_weight_of_kernel, min_weight_of_row_space};
pub use embedded::{embed_in_nrc, trivial_design, EmbeddedDesign};
pub use golay::{
    binary_golay_generator, icosahedron_adjacency, ternary_golay_generator, witt12_embedding, witt24_embedding,
    witt24_report, Witt24Report, W24_QUOTED_BLOCK_COUNT,
};
pub use quadric::{elliptic_quadric, irreducible_binary_form};
pub use veronese::{
    eval_monomials, exponent_sequences, min_covering_degree, normal_rational_curve, veronese_map, veronese_variety,
    CoverMode, ExponentSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error("dependent {size}-subset of points: {points:?}")]
    DependentSubset { size: usize, points: Vec<u32> },
    #[error("no dependent {size}-subset exists (the minimum weight is larger than t+1)")]
    NoDependentSubset { size: usize },
    #[error("construction invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl GeneratorError {
    pub fn guard(&self) -> Option<&GuardExceeded> {
        match self {
            GeneratorError::Guard(g) | GeneratorError::Geometry(GeometryError::Guard(g)) => Some(g),
            _ => None,
        }
    }
}
