use std::fmt;
use std::ops::{Index, IndexMut};

use crate::{Error, Result};

pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Dense row-major integer matrix with overflow-checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i128]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows<T: Copy + Into<i128>>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| x.into()).collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = add(out[(i, j)], mul(a, other[(k, j)])?)?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[i128]) -> Result<Vec<i128>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![0i128; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = add(*o, mul(x, self[(i, j)])?)?;
            }
        }
        Ok(out)
    }

    /// Bilinear form `u^T M v`.
    pub fn pair(&self, u: &[i128], v: &[i128]) -> Result<i128> {
        let mu = self.left_apply(u)?;
        if v.len() != mu.len() {
            return Err(Error::Dimension("pairing length".into()));
        }
        mu.iter()
            .zip(v)
            .try_fold(0i128, |acc, (&a, &b)| add(acc, mul(a, b)?))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Gram matrix `B M B^T` of the rows of `basis` under the form `self`.
    pub fn congruence(&self, basis: &IntMatrix) -> Result<IntMatrix> {
        basis.mul(self)?.mul(&basis.transpose())
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Result<i128> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = sub(mul(a[(i, j)], a[(k, k)])?, mul(a[(i, k)], a[(k, j)])?)?;
                    a[(i, j)] = num / prev;
                }
            }
            prev = a[(k, k)];
        }
        mul(sign, a[(n - 1, n - 1)])
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        for c in 0..self.cols {
            let v = add(self[(dst, c)], mul(k, self[(src, c)])?)?;
            self[(dst, c)] = v;
        }
        Ok(())
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        for r in 0..self.rows {
            let v = add(self[(r, dst)], mul(k, self[(r, src)])?)?;
            self[(r, dst)] = v;
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = -self[(i, c)];
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i128;

    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 0], &[0, 3]]).determinant().unwrap(), 6);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), -1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant().unwrap(), -3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(&[vec![1i64, 2], vec![3]]).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = m(&[&[i64::MAX, i64::MAX], &[i64::MAX, i64::MAX]]);
        let mut x = big.clone();
        for _ in 0..3 {
            match x.mul(&big) {
                Ok(y) => x = y,
                Err(e) => {
                    assert!(matches!(e, Error::Overflow));
                    return;
                }
            }
        }
        panic!("expected overflow");
    }

    #[test]
    fn congruence_of_identity_basis() {
        let g = m(&[&[-2, 1], &[1, -2]]);
        assert_eq!(g.congruence(&IntMatrix::identity(2)).unwrap(), g);
    }
}
