//! Exact propagation through quadratic-affine maps
//! f_r(x) = x^T Q_r x + (A x)_r + d_r.
//!
//! On a polynomial set the image is again polynomial: monomial products
//! m_i m_j just add exponent columns, so the map is closed-form and exact.
//! Binary generators are not closed under squaring (xi_bi * xi_bj has no
//! slot in the representation), so sets with binary factors are propagated
//! leaf by leaf and rejoined with the exact union.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, HpzError};
use crate::matrix::{ExpMat, Mat};
use crate::ops::union;
use crate::set::HybridPolynomialZonotope;

/// The map x -> (x^T Q_r x + (A x)_r + d_r)_r.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticAffineMap {
    q: Vec<Mat>,
    a: Mat,
    d: Vec<f64>,
}

impl QuadraticAffineMap {
    pub fn new(q: Vec<Mat>, a: Mat, d: Vec<f64>) -> Result<Self, HpzError> {
        let n_out = d.len();
        let n_in = a.cols();
        if a.rows() != n_out {
            return Err(dim_err("quadratic map A rows", n_out, a.rows(), "must match len(d)"));
        }
        if q.len() != n_out {
            return Err(dim_err("quadratic map Q count", n_out, q.len(), "one matrix per output row"));
        }
        for qr in &q {
            if qr.rows() != n_in || qr.cols() != n_in {
                return Err(dim_err(
                    "quadratic map Q shape",
                    n_in,
                    if qr.rows() != n_in { qr.rows() } else { qr.cols() },
                    "each Q must be n_in x n_in",
                ));
            }
        }
        Ok(QuadraticAffineMap { q, a, d })
    }

    /// Purely affine map (all Q zero).
    pub fn affine(a: Mat, d: Vec<f64>) -> Result<Self, HpzError> {
        let n_in = a.cols();
        let q = vec![Mat::zeros(n_in, n_in); d.len()];
        QuadraticAffineMap::new(q, a, d)
    }

    pub fn input_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.d.len()
    }

    pub fn quadratic_terms(&self) -> &[Mat] {
        &self.q
    }

    pub fn linear_term(&self) -> &Mat {
        &self.a
    }

    pub fn constant_term(&self) -> &[f64] {
        &self.d
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.a.mul_vec(x);
        for r in 0..self.output_dim() {
            let qx = self.q[r].mul_vec(x);
            let xtqx: f64 = x.iter().zip(&qx).map(|(a, b)| a * b).sum();
            y[r] += xtqx + self.d[r];
        }
        y
    }

    /// x^T (Q_r + Q_r^T) v, i.e. sum_ij q_ij (x_i v_j + v_i x_j).
    fn sym_apply(&self, r: usize, x: &[f64], v: &[f64]) -> f64 {
        let q = &self.q[r];
        let mut s = 0.0;
        for i in 0..q.rows() {
            for j in 0..q.cols() {
                s += q.get(i, j) * (x[i] * v[j] + v[i] * x[j]);
            }
        }
        s
    }

    fn quad_form(&self, r: usize, u: &[f64], v: &[f64]) -> f64 {
        let q = &self.q[r];
        let mut s = 0.0;
        for i in 0..q.rows() {
            for j in 0..q.cols() {
                s += u[i] * q.get(i, j) * v[j];
            }
        }
        s
    }
}

/// Exact image of a binary-free set (one leaf). Constraints carry over; the
/// generator expansion produces one column per original generator plus one
/// per unordered generator pair, then compacts.
pub fn quadratic_map_leaf(
    map: &QuadraticAffineMap,
    z: &HybridPolynomialZonotope,
) -> Result<HybridPolynomialZonotope, HpzError> {
    if z.num_binary() != 0 {
        return Err(dim_err(
            "quadratic map binaries",
            0,
            z.num_binary(),
            "leaf propagation requires a binary-free set",
        ));
    }
    if map.input_dim() != z.dim() {
        return Err(dim_err("quadratic map input", z.dim(), map.input_dim(), "must match set dimension"));
    }
    let n_out = map.output_dim();
    let n_g = z.num_generators();
    let n_e = z.num_factors();
    let c = z.center();
    let g = z.continuous_generators();
    let e = z.exponents();

    let mut c_out = map.a.mul_vec(c);
    for r in 0..n_out {
        c_out[r] += map.quad_form(r, c, c) + map.constant_term()[r];
    }

    let n_cols = n_g + n_g * (n_g + 1) / 2;
    let mut g_out = Mat::zeros(n_out, n_cols);
    let mut e_out = ExpMat::zeros(n_e, n_cols);
    let cols: Vec<Vec<f64>> = (0..n_g).map(|j| g.col(j)).collect();

    // Degree-preserving columns: c^T (Q_r + Q_r^T) g_i + (A g_i)_r.
    for (i, gi) in cols.iter().enumerate() {
        let agi = map.a.mul_vec(gi);
        for r in 0..n_out {
            g_out.set(r, i, map.sym_apply(r, c, gi) + agi[r]);
        }
        for k in 0..n_e {
            e_out.set(k, i, e.get(k, i));
        }
    }
    // Pair columns: exponents add; coefficients g_i^T Q_r g_i on the
    // diagonal, g_i^T (Q_r + Q_r^T) g_j off it.
    let mut col = n_g;
    for i in 0..n_g {
        for j in i..n_g {
            for r in 0..n_out {
                let v = if i == j {
                    map.quad_form(r, &cols[i], &cols[i])
                } else {
                    map.quad_form(r, &cols[i], &cols[j]) + map.quad_form(r, &cols[j], &cols[i])
                };
                g_out.set(r, col, v);
            }
            for k in 0..n_e {
                e_out.set(k, col, e.get(k, i) + e.get(k, j));
            }
            col += 1;
        }
    }

    let out = HybridPolynomialZonotope::from_cpz(
        c_out,
        g_out,
        e_out,
        z.constraint_generators().clone(),
        z.constraint_offsets().to_vec(),
        z.constraint_exponents().clone(),
    )?;
    Ok(out.compact())
}

/// Exact image of an arbitrary set: propagates every binary leaf and
/// rejoins the images with the exact union. Explodes combinatorially in
/// the binary count, hence the leaf cap.
pub fn quadratic_map(
    map: &QuadraticAffineMap,
    z: &HybridPolynomialZonotope,
    leaf_cap_log2: u32,
) -> Result<HybridPolynomialZonotope, HpzError> {
    if z.num_binary() == 0 {
        return quadratic_map_leaf(map, z);
    }
    let leaves = z.leaf_count_checked(leaf_cap_log2)?;
    let mut acc: Option<HybridPolynomialZonotope> = None;
    for idx in 0..leaves {
        let leaf = z.fix_binary(&z.binary_assignment(idx))?;
        let image = quadratic_map_leaf(map, &leaf)?;
        acc = Some(match acc {
            None => image,
            Some(prev) => union(&prev, &image)?,
        });
    }
    Ok(acc.expect("at least one leaf"))
}
