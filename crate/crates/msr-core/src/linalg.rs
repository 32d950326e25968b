//! Dense vectors and matrices over a [`FieldSpec`], with elimination-based
//! solving, rank, and block assembly.
//!
//! Everything is deliberately dense and textbook: the parity-check blocks
//! this crate manipulates are at most a few hundred rows at desk scale,
//! and arithmetic over GF(q) is exact, so partial pivoting only has to
//! find *a* nonzero entry. Pivot choice is the lowest-index nonzero row,
//! which keeps every run bit-reproducible.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use crate::gf::{FieldElement, FieldSpec};
use crate::{Error, Result};

/// Column vector over one field.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    field: Arc<FieldSpec>,
    elems: Vec<FieldElement>,
}

impl Vector {
    pub fn new(field: Arc<FieldSpec>, elems: Vec<FieldElement>) -> Self {
        Vector { field, elems }
    }

    pub fn zeros(field: Arc<FieldSpec>, len: usize) -> Self {
        Vector {
            field,
            elems: vec![FieldElement::ZERO; len],
        }
    }

    /// Builds from raw residue values; panics if any value is out of range.
    pub fn from_values(field: Arc<FieldSpec>, values: &[u64]) -> Self {
        let elems = values.iter().map(|&v| field.element(v)).collect();
        Vector { field, elems }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|e| e.is_zero())
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.elems[i]
    }

    pub fn set(&mut self, i: usize, v: FieldElement) {
        self.elems[i] = v;
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        same_field(&self.field, &other.field);
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector add: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let elems = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Vector {
            field: self.field.clone(),
            elems,
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        same_field(&self.field, &other.field);
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector sub: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let elems = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(Vector {
            field: self.field.clone(),
            elems,
        })
    }

    pub fn scale(&self, s: FieldElement) -> Vector {
        let elems = self.elems.iter().map(|&a| self.field.mul(a, s)).collect();
        Vector {
            field: self.field.clone(),
            elems,
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Row-major dense matrix over one field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) {
    assert!(
        Arc::ptr_eq(a, b) || a == b,
        "operands belong to different fields: {a} vs {b}"
    );
}

impl Matrix {
    pub fn new(
        field: Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Self {
        assert_eq!(rows * cols, entries.len(), "matrix shape/entry mismatch");
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(field: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    /// Builds from raw residue values in row-major order.
    pub fn from_values(field: Arc<FieldSpec>, rows: usize, cols: usize, values: &[u64]) -> Self {
        assert_eq!(rows * cols, values.len());
        let entries = values.iter().map(|&v| field.element(v)).collect();
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_slice(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        same_field(&self.field, &other.field);
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mat_mul: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other[(l, j)]);
                    out[(i, j)] = f.add(out[(i, j)], prod);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        same_field(&self.field, v.field());
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "mul_vec: {}x{} * {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        let mut out = Vector::zeros(self.field.clone(), self.rows);
        for i in 0..self.rows {
            let mut acc = FieldElement::ZERO;
            for (j, &x) in v.as_slice().iter().enumerate() {
                acc = f.add(acc, f.mul(self[(i, j)], x));
            }
            out.set(i, acc);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        same_field(&self.field, &other.field);
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Matrix::new(
            self.field.clone(),
            self.rows,
            self.cols,
            entries,
        ))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        same_field(&self.field, &other.field);
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(Matrix::new(
            self.field.clone(),
            self.rows,
            self.cols,
            entries,
        ))
    }

    pub fn scale(&self, s: FieldElement) -> Matrix {
        let entries = self.entries.iter().map(|&a| self.field.mul(a, s)).collect();
        Matrix::new(self.field.clone(), self.rows, self.cols, entries)
    }

    /// Copy of the rectangle [r0, r1) x [c0, c1).
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut out = Matrix::zeros(self.field.clone(), r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    /// Row rank by forward elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let f = work.field.clone();
        let mut pivot_row = 0usize;
        for col in 0..work.cols {
            if pivot_row == work.rows {
                break;
            }
            let found = (pivot_row..work.rows).find(|&r| !work[(r, col)].is_zero());
            let Some(r) = found else { continue };
            work.swap_rows(pivot_row, r);
            let inv = f.inv(work[(pivot_row, col)]).expect("nonzero pivot");
            for j in col..work.cols {
                work[(pivot_row, j)] = f.mul(work[(pivot_row, j)], inv);
            }
            for r2 in pivot_row + 1..work.rows {
                let factor = work[(r2, col)];
                if factor.is_zero() {
                    continue;
                }
                for j in col..work.cols {
                    let sub = f.mul(factor, work[(pivot_row, j)]);
                    work[(r2, j)] = f.sub(work[(r2, j)], sub);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// True iff the matrix is square with full rank.
    pub fn is_nonsingular(&self) -> bool {
        assert_eq!(
            self.rows, self.cols,
            "non-singularity is for square matrices"
        );
        self.rank() == self.rows
    }

    /// Solves A x = b for square non-singular A.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        same_field(&self.field, b.field());
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {}x{} with rhs {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let rhs = Matrix::new(self.field.clone(), b.len(), 1, b.as_slice().to_vec());
        let x = self.solve_matrix(&rhs)?;
        Ok(Vector::new(self.field.clone(), x.entries))
    }

    /// Solves A X = B column-wise for square non-singular A.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        same_field(&self.field, &b.field);
        if self.rows != self.cols || b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_matrix: {}x{} with rhs {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let n = self.rows;
        let f = self.field.clone();
        // Gauss-Jordan on the augmented matrix [A | B]
        let mut aug = Matrix::zeros(f.clone(), n, n + b.cols);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            for j in 0..b.cols {
                aug[(i, n + j)] = b[(i, j)];
            }
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !aug[(r, col)].is_zero())
                .ok_or(Error::Singular)?;
            aug.swap_rows(col, pivot);
            let inv = f.inv(aug[(col, col)])?;
            for j in col..n + b.cols {
                aug[(col, j)] = f.mul(aug[(col, j)], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = aug[(r, col)];
                if factor.is_zero() {
                    continue;
                }
                for j in col..n + b.cols {
                    let sub = f.mul(factor, aug[(col, j)]);
                    aug[(r, j)] = f.sub(aug[(r, j)], sub);
                }
            }
        }
        Ok(aug.submatrix(0, n, n, n + b.cols))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve_matrix(&Matrix::identity(self.field.clone(), self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Concatenates a grid of blocks into one dense matrix.
///
/// Blocks in each grid row must share a height and blocks in each grid
/// column must share a width.
pub fn assemble_blocks(grid: &[Vec<Matrix>]) -> Result<Matrix> {
    if grid.is_empty() || grid[0].is_empty() {
        return Err(Error::DimensionMismatch("empty block grid".into()));
    }
    let field = grid[0][0].field.clone();
    let block_cols = grid[0].len();
    let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
    let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
    for row in grid {
        if row.len() != block_cols {
            return Err(Error::DimensionMismatch("ragged block grid".into()));
        }
    }
    for (bi, row) in grid.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            same_field(&field, &block.field);
            if block.rows != heights[bi] || block.cols != widths[bj] {
                return Err(Error::DimensionMismatch(format!(
                    "block ({bi},{bj}) is {}x{}, expected {}x{}",
                    block.rows, block.cols, heights[bi], widths[bj]
                )));
            }
        }
    }
    let total_rows: usize = heights.iter().sum();
    let total_cols: usize = widths.iter().sum();
    let mut out = Matrix::zeros(field, total_rows, total_cols);
    let mut row_off = 0usize;
    for (bi, row) in grid.iter().enumerate() {
        let mut col_off = 0usize;
        for block in row {
            for i in 0..block.rows {
                for j in 0..block.cols {
                    out[(row_off + i, col_off + j)] = block[(i, j)];
                }
            }
            col_off += block.cols;
        }
        row_off += heights[bi];
    }
    Ok(out)
}
