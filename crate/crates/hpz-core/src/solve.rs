//! Damped Gauss-Newton iteration over the continuous factor box.
//!
//! Used in two places: root-polishing of constraint residuals during
//! sampling (equality constraints carve measure-zero manifolds a pure grid
//! misses) and the approximate membership search. The update solves the
//! Levenberg-damped normal equations and projects back into [-1, 1]^n_e;
//! step length is chosen by Armijo backtracking on the squared residual.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{norm2, Mat};
use crate::set::{monomial_grad, HybridPolynomialZonotope};

pub(crate) struct ResidualSystem<'a> {
    /// Leaf (no binary factors) whose constraints are being solved.
    pub leaf: &'a HybridPolynomialZonotope,
    /// Optional target point: prepends evaluate(leaf, xi) - target rows.
    pub target: Option<&'a [f64]>,
}

impl ResidualSystem<'_> {
    pub fn rows(&self) -> usize {
        self.leaf.num_constraints() + self.target.map_or(0, |t| t.len())
    }

    pub fn residual(&self, xi: &[f64], out: &mut Vec<f64>) {
        out.clear();
        if let Some(t) = self.target {
            let x = self.leaf.evaluate_unchecked(xi, &[]);
            out.extend(x.iter().zip(t).map(|(a, b)| a - b));
        }
        out.extend(self.leaf.residual_unchecked(xi, &[]));
    }

    /// Dense Jacobian, rows() x n_e.
    pub fn jacobian(&self, xi: &[f64]) -> Mat {
        let n_e = self.leaf.num_factors();
        let mut jac = Mat::zeros(self.rows(), n_e);
        let mut grad = vec![0.0; n_e];
        let mut row_off = 0;
        if let Some(t) = self.target {
            let n = t.len();
            let g_c = self.leaf.continuous_generators();
            let e = self.leaf.exponents();
            for col in 0..g_c.cols() {
                monomial_grad(e, col, xi, &mut grad);
                for k in 0..n_e {
                    if grad[k] == 0.0 {
                        continue;
                    }
                    for i in 0..n {
                        let v = jac.get(i, k) + g_c.get(i, col) * grad[k];
                        jac.set(i, k, v);
                    }
                }
            }
            row_off = n;
        }
        let a_c = self.leaf.constraint_generators();
        let r = self.leaf.constraint_exponents();
        let n_c = self.leaf.num_constraints();
        for col in 0..a_c.cols() {
            monomial_grad(r, col, xi, &mut grad);
            for k in 0..n_e {
                if grad[k] == 0.0 {
                    continue;
                }
                for i in 0..n_c {
                    let v = jac.get(row_off + i, k) + a_c.get(i, col) * grad[k];
                    jac.set(row_off + i, k, v);
                }
            }
        }
        jac
    }
}

/// Solves (J^T J + lambda I) d = -J^T r by Cholesky. Returns None on a
/// non-positive pivot (then the caller bumps lambda).
fn damped_normal_step(jac: &Mat, res: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let n = jac.cols();
    let mut ata = vec![0.0; n * n];
    for i in 0..jac.rows() {
        let row = jac.row(i);
        for a in 0..n {
            if row[a] == 0.0 {
                continue;
            }
            for b in a..n {
                ata[a * n + b] += row[a] * row[b];
            }
        }
    }
    for a in 0..n {
        ata[a * n + a] += lambda;
        for b in 0..a {
            ata[a * n + b] = ata[b * n + a];
        }
    }
    let mut rhs = vec![0.0; n];
    for i in 0..jac.rows() {
        let row = jac.row(i);
        for a in 0..n {
            rhs[a] -= row[a] * res[i];
        }
    }
    // In-place Cholesky.
    let mut l = ata;
    for a in 0..n {
        for b in 0..=a {
            let mut s = l[a * n + b];
            for k in 0..b {
                s -= l[a * n + k] * l[b * n + k];
            }
            if a == b {
                if s <= 0.0 {
                    return None;
                }
                l[a * n + a] = libm::sqrt(s);
            } else {
                l[a * n + b] = s / l[b * n + b];
            }
        }
    }
    // Forward/back substitution.
    let mut y = rhs;
    for a in 0..n {
        for k in 0..a {
            y[a] -= l[a * n + k] * y[k];
        }
        y[a] /= l[a * n + a];
    }
    for a in (0..n).rev() {
        for k in a + 1..n {
            y[a] -= l[k * n + a] * y[k];
        }
        y[a] /= l[a * n + a];
    }
    Some(y)
}

fn clamp_box(xi: &mut [f64]) {
    for x in xi {
        *x = x.clamp(-1.0, 1.0);
    }
}

pub(crate) struct GaussNewtonResult {
    pub xi: Vec<f64>,
    /// Final 2-norm of the residual (diagnostic; callers re-check inf-norms).
    #[allow(dead_code)]
    pub residual_norm: f64,
}

/// Projected, Armijo-damped Gauss-Newton from a single start.
pub(crate) fn gauss_newton(
    system: &ResidualSystem<'_>,
    start: &[f64],
    max_iters: usize,
    stop_tol: f64,
) -> GaussNewtonResult {
    let mut xi = start.to_vec();
    clamp_box(&mut xi);
    let mut res = Vec::new();
    let mut trial_res = Vec::new();
    system.residual(&xi, &mut res);
    let mut best = norm2(&res);
    for _ in 0..max_iters {
        if best <= stop_tol {
            break;
        }
        let jac = system.jacobian(&xi);
        let mut lambda = 1e-10;
        let step = loop {
            match damped_normal_step(&jac, &res, lambda) {
                Some(s) => break s,
                None => {
                    lambda *= 100.0;
                    if lambda > 1e6 {
                        break vec![0.0; xi.len()];
                    }
                }
            }
        };
        if step.iter().all(|&s| s == 0.0) {
            break;
        }
        // Armijo backtracking on ||r||.
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let mut trial: Vec<f64> = xi.iter().zip(&step).map(|(x, s)| x + alpha * s).collect();
            clamp_box(&mut trial);
            system.residual(&trial, &mut trial_res);
            let norm = norm2(&trial_res);
            if norm < best * (1.0 - 1e-4 * alpha) {
                xi = trial;
                res = trial_res.clone();
                best = norm;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    GaussNewtonResult {
        xi,
        residual_norm: best,
    }
}

/// Deterministic multi-start pattern: box center plus scaled +/- corner
/// patterns of a coarse grid, capped at `count` starts.
pub(crate) fn start_points(n_e: usize, count: usize) -> Vec<Vec<f64>> {
    let mut starts = Vec::with_capacity(count);
    starts.push(vec![0.0; n_e]);
    let mut idx = 0usize;
    while starts.len() < count {
        let mut s = Vec::with_capacity(n_e);
        for k in 0..n_e {
            let bit = (idx >> (k % (usize::BITS as usize - 1))) & 1;
            let sign = if bit == 1 { 1.0 } else { -1.0 };
            // Stagger magnitudes so starts are not all corners.
            let mag = if (idx + k) % 2 == 0 { 0.75 } else { 0.35 };
            s.push(sign * mag);
        }
        starts.push(s);
        idx += 1;
        if idx > 4 * count {
            break;
        }
    }
    starts.truncate(count);
    starts
}
