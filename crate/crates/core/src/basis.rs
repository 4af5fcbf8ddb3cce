use std::fmt;

use nalgebra::DMatrix;

use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::lp::p_norm;

/// A square matrix whose rows are candidate basis vectors of `l^n_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMatrix {
    n: usize,
    /// row-major
    data: Vec<f64>,
    p: PExponent,
}

impl BasisMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, p: PExponent) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(AuerbachError::Shape("basis matrix must have at least one row".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(AuerbachError::Shape(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_row_major(n, data, p)
    }

    pub fn from_row_major(n: usize, data: Vec<f64>, p: PExponent) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(AuerbachError::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(AuerbachError::Domain("matrix has non-finite entries".into()));
        }
        Ok(BasisMatrix { n, data, p })
    }

    pub fn from_matrix(m: &DMatrix<f64>, p: PExponent) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(AuerbachError::Shape(format!(
                "matrix is not square: {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let data = (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])).collect();
        Self::from_row_major(n, data, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn with_p(&self, p: PExponent) -> Self {
        BasisMatrix { p, ..self.clone() }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn row_norms(&self) -> Vec<f64> {
        self.rows().map(|r| p_norm(r, self.p)).collect()
    }

    /// Every row rescaled to unit `p`-norm; zero rows are left untouched.
    pub fn normalized_rows(&self) -> Self {
        let mut data = self.data.clone();
        for row in data.chunks_mut(self.n) {
            let norm = p_norm(row, self.p);
            if norm > 0.0 {
                row.iter_mut().for_each(|v| *v /= norm);
            }
        }
        BasisMatrix { data, ..self.clone() }
    }

    /// Same rows renormalized for a different exponent.
    pub fn renormalized(&self, p: PExponent) -> Self {
        self.with_p(p).normalized_rows()
    }

    pub fn map_entries(&self, f: impl Fn(f64) -> f64) -> Self {
        BasisMatrix { data: self.data.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    /// Largest entrywise distance to `other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &BasisMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for BasisMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.9}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
