//! Small dense row-major matrices. Sizes here are desk scale; no BLAS needed.

use alloc::vec;
use alloc::vec::Vec;

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from row slices. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(v: &[f64]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j) == 0.0)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Left multiplication by a row vector: v^T * self.
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| v[i] * self.get(i, j)).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Horizontal concatenation. Empty (0-column) blocks are allowed as long
    /// as row counts agree; a block with 0 rows adapts when it has 0 columns.
    pub fn hstack(blocks: &[&Mat]) -> Mat {
        let rows = blocks
            .iter()
            .map(|b| b.rows)
            .find(|&r| r > 0)
            .unwrap_or(0);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            if b.cols > 0 {
                assert_eq!(b.rows, rows, "hstack row mismatch");
                for i in 0..rows {
                    for j in 0..b.cols {
                        out.set(i, off + j, b.get(i, j));
                    }
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Mat]) -> Mat {
        let cols = blocks
            .iter()
            .map(|b| b.cols)
            .find(|&c| c > 0)
            .unwrap_or(0);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            if b.rows > 0 {
                assert_eq!(b.cols, cols, "vstack col mismatch");
                for i in 0..b.rows {
                    for j in 0..cols {
                        out.set(off + i, j, b.get(i, j));
                    }
                }
            }
            off += b.rows;
        }
        out
    }

    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j));
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Keeps only the listed columns, in order.
    pub fn select_cols(&self, keep: &[usize]) -> Mat {
        Mat::from_fn(self.rows, keep.len(), |i, j| self.get(i, keep[j]))
    }

    pub fn select_rows(&self, keep: &[usize]) -> Mat {
        Mat::from_fn(keep.len(), self.cols, |i, j| self.get(keep[i], j))
    }
}

/// Dense nonnegative-integer exponent matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpMat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ExpMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExpMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExpMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        ExpMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j) == 0)
    }

    pub fn hstack(blocks: &[&ExpMat]) -> ExpMat {
        let rows = blocks
            .iter()
            .map(|b| b.rows)
            .find(|&r| r > 0)
            .unwrap_or(0);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = ExpMat::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            if b.cols > 0 {
                assert_eq!(b.rows, rows, "hstack row mismatch");
                for i in 0..rows {
                    for j in 0..b.cols {
                        out.set(i, off + j, b.get(i, j));
                    }
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn block_diag(blocks: &[&ExpMat]) -> ExpMat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = ExpMat::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j));
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Pads with zero rows below, up to `rows` total.
    pub fn pad_rows(&self, rows: usize) -> ExpMat {
        assert!(rows >= self.rows);
        let mut out = ExpMat::zeros(rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, keep: &[usize]) -> ExpMat {
        let mut out = ExpMat::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            for (jj, &j) in keep.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, keep: &[usize]) -> ExpMat {
        let mut out = ExpMat::zeros(keep.len(), self.cols);
        for (ii, &i) in keep.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j));
            }
        }
        out
    }
}

/// Integer power with the 0^0 = 1 convention (exponent 0 means absence).
#[inline]
pub fn powi(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

#[inline]
pub fn fabs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

#[inline]
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(fabs(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_zero_conventions() {
        assert_eq!(powi(0.0, 0), 1.0);
        assert_eq!(powi(0.0, 3), 0.0);
        assert_eq!(powi(-2.0, 3), -8.0);
        assert_eq!(powi(0.5, 2), 0.25);
    }

    #[test]
    fn stack_and_blockdiag() {
        let a = Mat::from_rows(&[vec![1.0, 2.0]]);
        let b = Mat::from_rows(&[vec![3.0]]);
        let h = Mat::hstack(&[&a, &b]);
        assert_eq!(h.row(0), &[1.0, 2.0, 3.0]);
        let d = Mat::block_diag(&[&a, &b]);
        assert_eq!(d.rows(), 2);
        assert_eq!(d.cols(), 3);
        assert_eq!(d.get(1, 2), 3.0);
        assert_eq!(d.get(1, 0), 0.0);
    }

    #[test]
    fn empty_blocks_stack() {
        let a = Mat::zeros(2, 0);
        let b = Mat::from_rows(&[vec![1.0], vec![2.0]]);
        let h = Mat::hstack(&[&a, &b]);
        assert_eq!(h.cols(), 1);
        assert_eq!(h.get(1, 0), 2.0);
    }
}
