//! Dense matrices over a finite field: rank, reduced echelon form, inversion, kernels.

use thiserror::Error;

use crate::field::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is singular: rank {rank} < {size} (deficiency {})", size - rank)]
    Singular { rank: usize, size: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix side {side} exceeds the configured maximum {limit}")]
    TooLarge { side: usize, limit: usize },
}

/// Row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows. `cols` is needed when `rows` is empty.
    pub fn from_rows<R: AsRef<[Elem]>>(rows: &[R], cols: usize) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(MatrixError::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Convenience for tests and constants: integer entries mapped through `Z -> GF(p)`.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv: Vec<Vec<Elem>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::from_rows(&conv, cols).expect("ragged integer matrix")
    }

    pub fn check_side(&self, limit: usize) -> Result<(), MatrixError> {
        let side = self.rows.max(self.cols);
        if side > limit {
            return Err(MatrixError::TooLarge { side, limit });
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, field: &Field, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = field.add(out[(i, j)], field.mul(a, rhs[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = field.add(*o, field.mul(a, self[(i, j)]));
            }
        }
        out
    }

    pub fn neg(&self, field: &Field) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| field.neg(x)).collect() }
    }

    /// In-place Gauss-Jordan elimination; returns the pivot columns.
    fn eliminate(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = field.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let sub = field.mul(factor, self[(r, j)]);
                    self[(i, j)] = field.sub(self[(i, j)], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form, same shape, zero rows last.
    pub fn reduced_echelon(&self, field: &Field) -> Matrix {
        let mut m = self.clone();
        m.eliminate(field);
        m
    }

    /// Reduced echelon form with zero rows dropped, plus the pivot columns.
    pub fn row_space_basis(&self, field: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(field);
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().eliminate(field).len()
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug[(i, n + i)] = Elem::ONE;
        }
        let pivots = aug.eliminate(field);
        let rank = pivots.iter().filter(|&&c| c < n).count();
        if rank < n {
            return Err(MatrixError::Singular { rank, size: n });
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&aug.row(i)[n..]);
        }
        Ok(inv)
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per row.
    pub fn kernel(&self, field: &Field) -> Matrix {
        let (rref, pivots) = self.row_space_basis(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis[(b, f)] = Elem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                basis[(b, pc)] = field.neg(rref[(i, f)]);
            }
        }
        basis
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;

    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a list of equal-length vectors.
pub fn rank_of<R: AsRef<[Elem]>>(field: &Field, vectors: &[R]) -> usize {
    let cols = vectors.first().map_or(0, |v| v.as_ref().len());
    Matrix::from_rows(vectors, cols).map_or(0, |m| m.rank(field))
}
