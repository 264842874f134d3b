//! Minimal dense real matrix, row-major. The layer math needs nothing more
//! than row iteration and elementwise updates, so this stays deliberately
//! small instead of pulling in a linear-algebra dependency.

use crate::{NnError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(NnError::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(NnError::InvalidInput("ragged rows".into()));
        }
        let m = Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        };
        if m.rows == 0 || m.cols == 0 {
            return Err(NnError::InvalidInput("empty matrix".into()));
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(NnError::InvalidInput(format!(
                "flat data of length {} does not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `self -= step * other`, shapes must match.
    pub fn subtract_scaled(&mut self, other: &Matrix, step: f64) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(NnError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= step * b;
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<()> {
        if let Some(i) = self.data.iter().position(|v| !v.is_finite()) {
            return Err(NnError::InvalidInput(format!(
                "non-finite entry at row {} col {}",
                i / self.cols,
                i % self.cols
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_indexing() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.row(0), &[1.0, 2.0]);
        assert_eq!(m, Matrix::from_flat(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap());
    }

    #[test]
    fn bad_shapes_are_rejected() {
        assert!(Matrix::zeros(0, 3).is_err());
        assert!(Matrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(Matrix::from_flat(2, 2, vec![0.0; 3]).is_err());
        assert!(Matrix::from_rows(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn subtract_scaled_is_elementwise() {
        let mut m = Matrix::identity(2).unwrap();
        let g = Matrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        m.subtract_scaled(&g, 0.5).unwrap();
        assert_eq!(m.data(), &[0.0, 0.0, 0.0, -1.0]);
        let wrong = Matrix::zeros(1, 2).unwrap();
        assert!(m.subtract_scaled(&wrong, 1.0).is_err());
    }
}
