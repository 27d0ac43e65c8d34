//! Dense integer matrices with exact row and column reductions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Row-major matrix over the integers. All reductions are exact.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.at(i, k) * other.at(k, j)).sum()
        })
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row[i] -= q * row[k]
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.at(i, j) - q * self.at(k, j);
            self.set(i, j, v);
        }
    }

    /// row[i] += row[k]
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let v = self.at(i, j) + self.at(k, j);
            self.set(i, j, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// col[j] -= q * col[k]
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.at(i, j) - q * self.at(i, k);
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1)
    }

    /// Row-style Hermite normal form. Returns (h, u) with u * self = h,
    /// u unimodular. Pivots are positive, entries above a pivot are reduced
    /// into [0, pivot), zero rows sit at the bottom.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            loop {
                // Move the smallest nonzero entry of the column into the pivot slot.
                let best = (pivot_row..self.rows)
                    .filter(|&i| !h.at(i, col).is_zero())
                    .min_by_key(|&i| h.at(i, col).abs());
                let Some(best) = best else { break };
                h.swap_rows(pivot_row, best);
                u.swap_rows(pivot_row, best);
                let pivot = h.at(pivot_row, col).clone();
                let mut cleared = true;
                for i in pivot_row + 1..self.rows {
                    if h.at(i, col).is_zero() {
                        continue;
                    }
                    let q = h.at(i, col).div_floor(&pivot);
                    if !q.is_zero() {
                        h.row_sub_mul(i, pivot_row, &q);
                        u.row_sub_mul(i, pivot_row, &q);
                    }
                    if !h.at(i, col).is_zero() {
                        cleared = false;
                    }
                }
                if cleared {
                    break;
                }
            }
            if h.at(pivot_row, col).is_zero() {
                continue;
            }
            if h.at(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let pivot = h.at(pivot_row, col).clone();
            for i in 0..pivot_row {
                let q = h.at(i, col).div_floor(&pivot);
                if !q.is_zero() {
                    h.row_sub_mul(i, pivot_row, &q);
                    u.row_sub_mul(i, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// Rank over the rationals (= number of nonzero rows of the HNF).
    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite_normal_form();
        (0..h.rows).filter(|&i| !h.row_is_zero(i)).count()
    }

    /// Basis of the left kernel {w : w * self = 0}, as rows. The kernel of an
    /// integer matrix is always a saturated sublattice.
    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        let (h, u) = self.hermite_normal_form();
        (0..h.rows).filter(|&i| h.row_is_zero(i)).map(|i| u.row(i).to_vec()).collect()
    }

    /// Basis of the right kernel {x : self * x = 0}, as vectors.
    pub fn right_kernel(&self) -> Vec<Vec<BigInt>> {
        self.transpose().left_kernel()
    }

    /// Smith normal form. Returns (d, u, v) with u * self * v = d diagonal,
    /// u and v unimodular, and nonnegative diagonal entries forming a
    /// divisibility chain d1 | d2 | ... .
    pub fn smith_normal_form(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let limit = self.rows.min(self.cols);
        for t in 0..limit {
            'pivot: loop {
                // Smallest nonzero entry of the trailing block becomes the pivot.
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        if !d.at(i, j).is_zero()
                            && best.is_none_or(|(bi, bj)| d.at(i, j).abs() < d.at(bi, bj).abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                let pivot = d.at(t, t).clone();
                for i in t + 1..self.rows {
                    if !d.at(i, t).is_zero() {
                        let q = d.at(i, t).div_floor(&pivot);
                        if !q.is_zero() {
                            d.row_sub_mul(i, t, &q);
                            u.row_sub_mul(i, t, &q);
                        }
                    }
                }
                for j in t + 1..self.cols {
                    if !d.at(t, j).is_zero() {
                        let q = d.at(t, j).div_floor(&pivot);
                        if !q.is_zero() {
                            d.col_sub_mul(j, t, &q);
                            v.col_sub_mul(j, t, &q);
                        }
                    }
                }
                let col_clear = (t + 1..self.rows).all(|i| d.at(i, t).is_zero());
                let row_clear = (t + 1..self.cols).all(|j| d.at(t, j).is_zero());
                if !col_clear || !row_clear {
                    continue;
                }
                // Pivot must divide the rest of the block for the chain property.
                for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !d.at(i, j).mod_floor(&pivot).is_zero() {
                            d.row_add(t, i);
                            u.row_add(t, i);
                            continue 'pivot;
                        }
                    }
                }
                break;
            }
            if d.at(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
        for t in 0..limit {
            if d.at(t, t).is_negative() {
                d.negate_col(t);
                v.negate_col(t);
            }
        }
        (d, u, v)
    }

    /// Diagonal of the Smith form, in chain order.
    pub fn smith_diagonal(&self) -> Vec<BigInt> {
        let (d, _, _) = self.smith_normal_form();
        (0..d.rows.min(d.cols)).map(|t| d.at(t, t).clone()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  [{}]",
                self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            )?;
        }
        write!(f, "]")
    }
}

/// Solves x * a = b exactly over the rationals for square invertible a,
/// returning x only when it is integral. Row vectors of b are solved
/// independently.
pub fn solve_right_integral(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    use num_rational::BigRational;
    assert_eq!(a.rows(), a.cols(), "coefficient matrix must be square");
    assert_eq!(b.cols(), a.cols(), "dimension mismatch in solve");
    let n = a.rows();
    // Gaussian elimination on a^T | b^T solves a^T x^T = b^T, i.e. x a = b.
    let at = a.transpose();
    let bt = b.transpose();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                at.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend(bt.row(i).iter().map(|x| BigRational::from_integer(x.clone())));
            row
        })
        .collect();
    let width = n + b.rows();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        let p = m[k][k].clone();
        for j in k..width {
            m[k][j] = &m[k][j] / &p;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..width {
                    m[i][j] = &m[i][j] - &f * &m[k][j];
                }
            }
        }
    }
    let mut x = IntMatrix::zero(b.rows(), n);
    for i in 0..b.rows() {
        for j in 0..n {
            let val = &m[j][n + i];
            if !val.is_integer() {
                return None;
            }
            x.set(i, j, val.to_integer());
        }
    }
    Some(x)
}
