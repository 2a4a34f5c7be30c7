use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::error::LinalgError;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from a row-major entry list; the length must be `dim²`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.len() != dim * dim {
            return Err(LinalgError::BadEntryCount {
                dim,
                len: entries.len(),
            });
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Build from nested rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(LinalgError::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        Ok(ComplexMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.at(r, col)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.at(r, c).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> ComplexMatrix {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product. Panics on dimension mismatch; public entry points
    /// validate dimensions before reaching this.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let other_row = other.row(k);
                let out_row = &mut out.entries[r * n..(r + 1) * n];
                for c in 0..n {
                    out_row[c] += a * other_row[c];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "apply dimension mismatch");
        (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Kronecker product, `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        let m = other.dim;
        let mut out = ComplexMatrix::zeros(n * m);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.at(r1, c1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.set(r1 * m + r2, c1 * m + c2, a * other.at(r2, c2));
                    }
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            for c in 0..self.dim {
                let z = self.at(r, c);
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0)], vec![]]);
        assert!(matches!(err, Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(3.0, -1.0)],
            vec![c(0.0, 5.0), c(-2.0, 0.0)],
        ])
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a.at(0, 1), c(0.0, -5.0));
        assert_eq!(a.at(1, 0), c(3.0, 1.0));
        assert_eq!(a.at(0, 0), c(1.0, -2.0));
    }

    #[test]
    fn matmul_matches_hand_computation() {
        let x = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let y = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        // σx σy = i σz
        let p = &x * &y;
        assert_eq!(p.at(0, 0), c(0.0, 1.0));
        assert_eq!(p.at(1, 1), c(0.0, -1.0));
        assert_eq!(p.at(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i2.kron(&i3), ComplexMatrix::identity(6));
    }

    #[test]
    fn trace_and_norm() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 2.0)],
            vec![c(0.0, -2.0), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(m.trace(), c(4.0, 0.0));
        assert!((m.frobenius_norm() - (1.0f64 + 4.0 + 4.0 + 9.0).sqrt()).abs() < 1e-15);
    }
}
