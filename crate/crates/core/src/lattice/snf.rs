use super::matrix::{mul, sub, IntMatrix};
use crate::{Error, Result};

/// `d = p * m * q` with `p`, `q` unimodular and `d` diagonal in
/// divisibility order, zeros last. `q_inv` is kept so that row spaces can
/// be read off without a second inversion.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }

    /// The invariant factors greater than one.
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal().into_iter().filter(|&x| x > 1).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    p: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl Reducer {
    fn row_add(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        self.a.add_row(dst, src, k)?;
        self.p.add_row(dst, src, k)
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
    }

    fn row_neg(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p.negate_row(i);
    }

    fn col_add(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        self.a.add_col(dst, src, k)?;
        self.q.add_col(dst, src, k)?;
        self.q_inv.add_row(src, dst, k.checked_neg().ok_or(Error::Overflow)?)
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` (from `t` on)
    /// to the pivot.
    fn pivot_cross(&mut self, t: usize) {
        let (m, n) = (self.a.nrows(), self.a.ncols());
        let mut best = (self.a[(t, t)].unsigned_abs(), t, t);
        for i in t..m {
            let v = self.a[(i, t)].unsigned_abs();
            if v != 0 && (best.0 == 0 || v < best.0) {
                best = (v, i, t);
            }
        }
        for j in t..n {
            let v = self.a[(t, j)].unsigned_abs();
            if v != 0 && (best.0 == 0 || v < best.0) {
                best = (v, t, j);
            }
        }
        self.row_swap(t, best.1);
        self.col_swap(t, best.2);
    }
}

fn nearest_quotient(a: i128, b: i128) -> Result<i128> {
    let q = a / b;
    let r = sub(a, mul(q, b)?)?;
    if r.unsigned_abs() * 2 > b.unsigned_abs() {
        Ok(if (r < 0) == (b < 0) { q + 1 } else { q - 1 })
    } else {
        Ok(q)
    }
}

/// Smith normal form by elementary row and column operations, pivoting on
/// the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let mut r = Reducer {
        a: m.clone(),
        p: IntMatrix::identity(rows),
        q: IntMatrix::identity(cols),
        q_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let mut best: Option<(u128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = r.a[(i, j)].unsigned_abs();
                if v != 0 && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        r.row_swap(t, bi);
        r.col_swap(t, bj);
        loop {
            let piv = r.a[(t, t)];
            let mut clear = true;
            for i in t + 1..rows {
                if r.a[(i, t)] != 0 {
                    let k = nearest_quotient(r.a[(i, t)], piv)?;
                    r.row_add(i, t, -k)?;
                    clear &= r.a[(i, t)] == 0;
                }
            }
            for j in t + 1..cols {
                if r.a[(t, j)] != 0 {
                    let k = nearest_quotient(r.a[(t, j)], piv)?;
                    r.col_add(j, t, -k)?;
                    clear &= r.a[(t, j)] == 0;
                }
            }
            if !clear {
                r.pivot_cross(t);
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| r.a[(i, j)] % piv != 0);
            match bad {
                Some((i, _)) => r.row_add(t, i, 1)?,
                None => break,
            }
        }
        if r.a[(t, t)] < 0 {
            r.row_neg(t);
        }
    }
    Ok(SmithForm {
        d: r.a,
        p: r.p,
        q: r.q,
        q_inv: r.q_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_diag(rows: &[Vec<i64>]) -> Vec<i128> {
        smith_normal_form(&IntMatrix::from_rows(rows).unwrap())
            .unwrap()
            .diagonal()
    }

    #[test]
    fn small_examples() {
        assert_eq!(snf_diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf_diag(&[vec![-2, 1], vec![1, -2]]), vec![1, 3]);
        assert_eq!(snf_diag(&[vec![0, 1], vec![1, 0]]), vec![1, 1]);
        assert_eq!(snf_diag(&[vec![2, 4], vec![4, 8]]), vec![2, 0]);
        assert_eq!(snf_diag(&[vec![0, 0, 0]]), vec![0]);
    }

    #[test]
    fn transforms_reconstruct() {
        let m = IntMatrix::from_rows(&[vec![6i64, 4, 2], vec![3, -9, 12], vec![0, 5, 7], vec![1, 1, 1]])
            .unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.p.mul(&m).unwrap().mul(&s.q).unwrap(), s.d);
        assert_eq!(s.q.mul(&s.q_inv).unwrap(), IntMatrix::identity(3));
        assert_eq!(s.p.determinant().unwrap().abs(), 1);
        assert_eq!(s.q.determinant().unwrap().abs(), 1);
    }

    #[test]
    fn empty_matrix_rejected() {
        assert!(smith_normal_form(&IntMatrix::zeros(0, 3)).is_err());
    }
}
