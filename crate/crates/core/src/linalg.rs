//! Dense symmetric matrices and Cholesky factorization of principal
//! submatrices.
//!
//! This is the numerical engine behind the log-determinant style objectives:
//! log-determinants are read off the Cholesky diagonal, single-element
//! extensions use the Schur complement, and single-element deletions use the
//! identity `det(A with row/col i removed) = det(A) * (A^{-1})_{ii}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense symmetric `n x n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    /// Builds from rows, checking squareness and symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let mut a = Vec::with_capacity(n * n);
        for row in rows {
            a.extend_from_slice(row);
        }
        let m = Self { n, a };
        m.check_symmetric()?;
        Ok(m)
    }

    /// Builds from `f(i, j)`; the caller must supply a symmetric function.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        let m = Self { n, a };
        m.check_symmetric()?;
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 }).expect("identity is symmetric")
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let (x, y) = (self.get(i, j), self.get(j, i));
                let scale = 1.0_f64.max(libm::fabs(x)).max(libm::fabs(y));
                if libm::fabs(x - y) > 1e-9 * scale {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Sum of column `j`.
    pub fn col_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// Cholesky factor of the principal submatrix indexed by `idx`.
    /// Returns `None` when the submatrix is not (numerically) positive
    /// definite.
    pub fn cholesky_sub(&self, idx: &[usize]) -> Option<SubCholesky> {
        let s = idx.len();
        let mut l = alloc::vec![0.0; s * s];
        // Gather the submatrix into the lower triangle, then factor in place.
        for i in 0..s {
            for j in 0..=i {
                l[i * s + j] = self.get(idx[i], idx[j]);
            }
        }
        for j in 0..s {
            let mut d = l[j * s + j];
            for k in 0..j {
                d -= l[j * s + k] * l[j * s + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let dj = libm::sqrt(d);
            l[j * s + j] = dj;
            for i in (j + 1)..s {
                let mut v = l[i * s + j];
                for k in 0..j {
                    v -= l[i * s + k] * l[j * s + k];
                }
                l[i * s + j] = v / dj;
            }
        }
        Some(SubCholesky { s, l })
    }

    /// `log det` of the principal submatrix; the empty submatrix has
    /// determinant 1 by convention, contributing 0.
    pub fn logdet_sub(&self, idx: &[usize]) -> Result<f64> {
        if idx.is_empty() {
            return Ok(0.0);
        }
        self.cholesky_sub(idx)
            .map(|c| c.logdet())
            .ok_or(Error::NotPositiveDefinite)
    }

    /// Schur complement of extending the factored submatrix `idx` by element
    /// `e`: `a_ee - v^T A_idx^{-1} v`. `log` of this value is the
    /// log-determinant gain of adding row/column `e`.
    pub fn schur_extend(&self, chol: &SubCholesky, idx: &[usize], e: usize) -> f64 {
        let s = idx.len();
        let mut v: Vec<f64> = idx.iter().map(|&p| self.get(p, e)).collect();
        chol.solve_lower(&mut v);
        let mut schur = self.get(e, e);
        for k in 0..s {
            schur -= v[k] * v[k];
        }
        schur
    }
}

/// Cholesky factor `L` (lower triangular) of an `s x s` principal submatrix.
pub struct SubCholesky {
    s: usize,
    l: Vec<f64>,
}

impl SubCholesky {
    #[inline]
    pub fn dim(&self) -> usize {
        self.s
    }

    /// `log det A = 2 Σ log L_kk`.
    pub fn logdet(&self) -> f64 {
        (0..self.s)
            .map(|k| 2.0 * libm::log(self.l[k * self.s + k]))
            .sum()
    }

    /// Forward substitution `L y = b`, in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        let s = self.s;
        debug_assert_eq!(b.len(), s);
        for i in 0..s {
            let mut v = b[i];
            for k in 0..i {
                v -= self.l[i * s + k] * b[k];
            }
            b[i] = v / self.l[i * s + i];
        }
    }

    /// Diagonal of `A^{-1}` for the factored submatrix:
    /// `(A^{-1})_{jj} = || L^{-1} e_j ||^2`.
    pub fn inverse_diagonal(&self) -> Vec<f64> {
        let s = self.s;
        let mut out = alloc::vec![0.0; s];
        let mut w = alloc::vec![0.0; s];
        for j in 0..s {
            w[j] = 1.0 / self.l[j * s + j];
            let mut acc = w[j] * w[j];
            for i in (j + 1)..s {
                let mut v = 0.0;
                for k in j..i {
                    v -= self.l[i * s + k] * w[k];
                }
                w[i] = v / self.l[i * s + i];
                acc += w[i] * w[i];
            }
            out[j] = acc;
        }
        out
    }
}
