//! Dense row-major matrices over either backend.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s = s.clone() + self[(i, j)].clone();
            }
        }
        sums
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_defect(tol).is_none()
    }

    /// First position where the matrix fails to be symmetric.
    pub fn symmetry_defect(&self, tol: f64) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if !self[(i, j)].near(&self[(j, i)], tol) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Entrywise equality within `tol` (exact for rationals).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.near(b, tol))
    }

    /// Largest entrywise absolute difference, in binary64.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Rows and columns permuted: `out[i][j] = self[p[i]][p[j]]`.
    pub fn permuted(&self, p: &[usize]) -> Self {
        assert!(self.is_square() && p.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(p[i], p[j])].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn nonnegative(&self, tol: f64) -> bool {
        self.data.iter().all(|x| !x.is_negative_beyond(tol))
    }

    /// Text format: `rows cols`, then the entries in row-major order,
    /// separated by any whitespace.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let mut dim = |what: &str| -> Result<usize> {
            let t = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            t.parse().map_err(|_| Error::Parse(format!("bad {what} `{t}`")))
        };
        let (rows, cols) = (dim("row count")?, dim("column count")?);
        if rows == 0 || cols == 0 {
            return Err(Error::Parse("matrix must be nonempty".into()));
        }
        let data = tokens.map(T::parse_text).collect::<Result<Vec<T>>>()?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!("expected {} entries, found {}", rows * cols, data.len())));
        }
        if data.iter().any(|x| !x.is_finite_value()) {
            return Err(Error::NonFiniteWeight);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_text).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl Matrix<Rational> {
    /// Rank by fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !num_traits::Zero::is_zero(&m[(r, col)]))
            else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(rank * m.cols + j, pivot * m.cols + j);
            }
            let p = m[(rank, col)].clone();
            for r in 0..m.rows {
                if r == rank || num_traits::Zero::is_zero(&m[(r, col)]) {
                    continue;
                }
                let factor = m[(r, col)].clone() / p.clone();
                for j in col..m.cols {
                    let v = m[(r, j)].clone() - factor.clone() * m[(rank, j)].clone();
                    m[(r, j)] = v;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// `diag(d) * self * diag(e)`.
    pub fn scaled(&self, d: &[f64], e: &[f64]) -> Self {
        assert_eq!((d.len(), e.len()), (self.rows, self.cols));
        Self::from_fn(self.rows, self.cols, |i, j| d[i] * self[(i, j)] * e[j])
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Negative entries no smaller than `-tol` are set to zero.
    pub fn clamp_small_negatives(&self, tol: f64) -> Self {
        self.map(|&x| if x < 0.0 && x >= -tol { 0.0 } else { x })
    }
}

/// Serialized as an array of rows.
impl serde::Serialize for Matrix<f64> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn product_and_transpose() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let i = Matrix::<f64>::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(a.transpose()[(0, 1)], 3.0);
        assert_eq!(a.row_sums(), vec![3.0, 7.0]);
        assert_eq!(a.col_sums(), vec![4.0, 6.0]);
    }

    #[test]
    fn exact_rank() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(1, 2), rat(0, 1), rat(1, 1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::<Rational>::identity(4).rank(), 4);
    }

    #[test]
    fn rejects_ragged() {
        assert!(Matrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(Matrix::<f64>::from_rows(vec![]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = Matrix::<f64>::parse_text("2 3\n1 2.5 0\n# comment\n-1 4 1e-3\n").unwrap();
        assert_eq!(m.row(1), &[-1.0, 4.0, 1e-3]);
        assert_eq!(Matrix::<f64>::parse_text(&m.to_text()).unwrap(), m);
        assert!(Matrix::<f64>::parse_text("2 2\n1 2 3").is_err());
        assert!(Matrix::<f64>::parse_text("0 2\n").is_err());
        assert!(Matrix::<f64>::parse_text("1 1\nx").is_err());
    }
}
