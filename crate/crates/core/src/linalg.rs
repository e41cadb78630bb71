//! Small dense linear algebra: LU with partial pivoting, determinant,
//! inverse, solve and column-dependence detection.
//!
//! Matrices here are at most a few dozen columns wide.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot smaller than this times the largest
/// absolute entry of the input is treated as zero.
pub const PIVOT_TOL: f64 = 1e-12;

/// Relative residual below which a Gram-matrix column is considered a
/// linear combination of the preceding columns.
pub const DEPENDENCE_TOL: f64 = 1e-10;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
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

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.row_iter().map(|r| dot(r, v)).collect())
    }

    /// `selfᵀ v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (r, &w) in self.row_iter().zip(v) {
            for (o, x) in out.iter_mut().zip(r) {
                *o += x * w;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    pub fn push_row(&mut self, row: &[f64]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `XᵀX`, exactly symmetric.
pub fn xtx(x: &Matrix) -> Matrix {
    let p = x.cols;
    let mut g = Matrix::zeros(p, p);
    for r in x.row_iter() {
        for i in 0..p {
            let ri = r[i];
            if ri == 0.0 {
                continue;
            }
            for j in i..p {
                g[(i, j)] += ri * r[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            g[(i, j)] = g[(j, i)];
        }
    }
    g
}

/// LU factorization `PA = LU` with partial (row) pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    /// L below the diagonal (unit diagonal implied), U on and above.
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Fails with `SingularMatrix` naming the first column (as `#k`,
    /// 0-based) whose pivot falls under the threshold.
    pub fn factor(m: &Matrix) -> Result<Lu> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows, m.cols
            )));
        }
        let n = m.rows;
        let tol = PIVOT_TOL * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (piv, big) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if big <= tol || big == 0.0 {
                return Err(Error::singular([format!("#{k}")]));
            }
            if piv != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm, sign })
    }

    pub fn det(&self) -> f64 {
        (0..self.n).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    /// `ln |det|`, for matrices whose determinant over- or underflows.
    pub fn ln_abs_det(&self) -> f64 {
        (0..self.n).map(|i| self.lu[(i, i)].abs().ln()).sum()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for a {n}x{n} system",
                b.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e).expect("dimension checked");
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Determinant and inverse in one factorization.
pub fn lu_det_inv(m: &Matrix) -> Result<(f64, Matrix)> {
    let lu = Lu::factor(m)?;
    Ok((lu.det(), lu.inverse()))
}

pub fn det(m: &Matrix) -> Result<f64> {
    Lu::factor(m).map(|lu| lu.det())
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    Lu::factor(m).map(|lu| lu.inverse())
}

pub fn solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(m)?.solve(b)
}

/// Indices of columns of `X` that are (numerically) linear combinations of
/// earlier columns, found by Gaussian elimination on the Gram matrix in
/// column order with dependent columns skipped.
pub fn dependent_columns(x: &Matrix) -> Vec<usize> {
    let g = xtx(x);
    let p = g.cols;
    // rows of the reduced factor for accepted pivots: (column, scaled row)
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut dependent = Vec::new();
    for k in 0..p {
        let mut row: Vec<f64> = (0..p).map(|j| g[(k, j)]).collect();
        for (c, b) in &basis {
            let f = row[*c];
            for j in 0..p {
                row[j] -= f * b[j];
            }
        }
        let d = row[k];
        if g[(k, k)] == 0.0 || d <= DEPENDENCE_TOL * g[(k, k)] {
            dependent.push(k);
            continue;
        }
        let scaled: Vec<f64> = row.iter().map(|v| v / d).collect();
        basis.push((k, scaled));
    }
    dependent
}

pub fn rank(x: &Matrix) -> usize {
    x.cols - dependent_columns(x).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let x = Matrix::from_rows(&[[1.0], [1.0]]);
        assert_eq!(xtx(&x), Matrix::from_rows(&[[2.0]]));
        assert_eq!(xtx(&Matrix::identity(3)), Matrix::identity(3));

        let (d, inv) = lu_det_inv(&Matrix::diag(&[2.0, 4.0])).unwrap();
        assert_eq!(d, 8.0);
        assert_eq!(inv, Matrix::diag(&[0.5, 0.25]));
        let (d, inv) = lu_det_inv(&Matrix::identity(5)).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(inv, Matrix::identity(5));
    }

    #[test]
    fn solve_small() {
        assert_eq!(solve(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let m = Matrix::from_rows(&[[2.0, 0.0], [0.0, 4.0]]);
        assert_eq!(solve(&m, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn singular_is_reported() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(Lu::factor(&m), Err(Error::SingularMatrix { .. })));
        assert!(matches!(Lu::factor(&Matrix::zeros(2, 2)), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn row_swap_flips_sign() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 0.5], [3.0, -1.0, 2.0], [0.0, 4.0, 1.0]]);
        let mut s = m.clone();
        for j in 0..3 {
            s.data.swap(j, 3 + j);
        }
        let (a, b) = (det(&m).unwrap(), det(&s).unwrap());
        assert!((a + b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn dependent_columns_found() {
        let x = Matrix::from_rows(&[
            [1.0, 0.0, 1.0, 2.0],
            [1.0, 1.0, 2.0, 0.0],
            [1.0, 2.0, 3.0, 1.0],
            [1.0, 3.0, 4.0, 5.0],
        ]);
        assert_eq!(dependent_columns(&x), vec![2]);
        assert_eq!(rank(&x), 3);
        let z = Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0]]);
        assert_eq!(dependent_columns(&z), vec![1]);
    }
}
