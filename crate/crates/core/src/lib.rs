//! Construction and exhaustive verification of t-divisible designs obtained by
//! lifting base designs embedded in finite projective spaces.

pub mod combinatorics;
pub mod construct;
pub mod design;
pub mod document;
pub mod field;
pub mod generators;
pub mod geometry;
pub mod limits;
pub mod matrix;
pub mod lifting;
pub mod verify;
