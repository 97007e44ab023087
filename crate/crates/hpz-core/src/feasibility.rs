//! Interval-arithmetic feasibility tests and approximate membership.
//!
//! Every monomial over the unit box has interval [1,1] (all exponents
//! zero), [0,1] (all even, at least one positive) or [-1,1] (any odd), so
//! range bounds for linear functionals and constraint rows come cheap.
//! The emptiness test is one-sided: a flagged leaf is certainly empty, an
//! unflagged one may still be. Membership combines the bound-based reject
//! with a multi-start Gauss-Newton search for a witness assignment, so it
//! is one-sided the other way: a returned witness certifies membership up
//! to the residual tolerance, absence of one proves nothing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::HpzError;
use crate::matrix::{fabs, norm_inf, ExpMat};
use crate::set::{FactorAssignment, HybridPolynomialZonotope, DEFAULT_LEAF_CAP_LOG2, FEAS_TOL};
use crate::solve::{gauss_newton, start_points, ResidualSystem};

/// Inclusive interval bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportBounds {
    pub lower: f64,
    pub upper: f64,
}

impl SupportBounds {
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// Interval of one monomial over xi in [-1,1]^n_e.
fn monomial_interval(exps: &ExpMat, col: usize) -> (f64, f64) {
    let mut any = false;
    let mut odd = false;
    for k in 0..exps.rows() {
        let e = exps.get(k, col);
        if e > 0 {
            any = true;
            if e % 2 == 1 {
                odd = true;
            }
        }
    }
    if !any {
        (1.0, 1.0)
    } else if odd {
        (-1.0, 1.0)
    } else {
        (0.0, 1.0)
    }
}

fn accumulate(lo: &mut f64, hi: &mut f64, coeff: f64, m_lo: f64, m_hi: f64) {
    let a = coeff * m_lo;
    let b = coeff * m_hi;
    *lo += a.min(b);
    *hi += a.max(b);
}

/// Interval bound of w^T x over the box relaxation of the set (constraints
/// ignored, binaries relaxed to [-1,1]).
pub fn functional_bounds(z: &HybridPolynomialZonotope, w: &[f64]) -> Result<SupportBounds, HpzError> {
    if w.len() != z.dim() {
        return Err(HpzError::LengthMismatch {
            context: "functional",
            expected: z.dim(),
            found: w.len(),
        });
    }
    let mut lo: f64 = w.iter().zip(z.center()).map(|(a, b)| a * b).sum();
    let mut hi = lo;
    for j in 0..z.num_generators() {
        let coeff: f64 = (0..z.dim()).map(|i| w[i] * z.continuous_generators().get(i, j)).sum();
        let (ml, mh) = monomial_interval(z.exponents(), j);
        accumulate(&mut lo, &mut hi, coeff, ml, mh);
    }
    for j in 0..z.binary_generators().cols() {
        let coeff: f64 = (0..z.dim()).map(|i| w[i] * z.binary_generators().get(i, j)).sum();
        lo -= fabs(coeff);
        hi += fabs(coeff);
    }
    Ok(SupportBounds { lower: lo, upper: hi })
}

/// Per-coordinate box bound of the relaxed set.
pub fn coordinate_bounds(z: &HybridPolynomialZonotope) -> Result<Vec<SupportBounds>, HpzError> {
    (0..z.dim())
        .map(|i| {
            let mut w = vec![0.0; z.dim()];
            w[i] = 1.0;
            functional_bounds(z, &w)
        })
        .collect()
}

/// Interval of one constraint residual row over a binary-free leaf.
fn constraint_row_interval(leaf: &HybridPolynomialZonotope, row: usize) -> (f64, f64) {
    let mut lo = -leaf.constraint_offsets()[row];
    let mut hi = lo;
    for j in 0..leaf.num_constraint_generators() {
        let coeff = leaf.constraint_generators().get(row, j);
        let (ml, mh) = monomial_interval(leaf.constraint_exponents(), j);
        accumulate(&mut lo, &mut hi, coeff, ml, mh);
    }
    (lo, hi)
}

/// True when interval arithmetic proves the binary-free leaf infeasible
/// (some constraint row cannot reach zero).
pub fn leaf_provably_empty(leaf: &HybridPolynomialZonotope) -> bool {
    (0..leaf.num_constraints()).any(|row| {
        let (lo, hi) = constraint_row_interval(leaf, row);
        lo > FEAS_TOL || hi < -FEAS_TOL
    })
}

/// Per-leaf emptiness flags, in canonical leaf order.
pub fn provably_empty_leaves(
    z: &HybridPolynomialZonotope,
    leaf_cap_log2: u32,
) -> Result<Vec<bool>, HpzError> {
    let leaves = z.leaf_count_checked(leaf_cap_log2)?;
    (0..leaves)
        .map(|idx| Ok(leaf_provably_empty(&z.fix_binary(&z.binary_assignment(idx))?)))
        .collect()
}

/// True when every leaf is provably empty (hence the set certainly is).
pub fn is_provably_empty(z: &HybridPolynomialZonotope, leaf_cap_log2: u32) -> Result<bool, HpzError> {
    Ok(provably_empty_leaves(z, leaf_cap_log2)?.iter().all(|&e| e))
}

/// Tuning for [`approx_member`].
#[derive(Clone, Debug)]
pub struct MembershipParams {
    pub feas_tol: f64,
    pub starts: usize,
    pub max_iters: usize,
    pub leaf_cap_log2: u32,
}

impl Default for MembershipParams {
    fn default() -> Self {
        MembershipParams {
            feas_tol: FEAS_TOL,
            starts: 8,
            max_iters: 100,
            leaf_cap_log2: DEFAULT_LEAF_CAP_LOG2,
        }
    }
}

/// Searches for a factor assignment witnessing x in Z. Quick-rejects leaves
/// whose interval box cannot contain x, then runs multi-start Gauss-Newton
/// on [evaluate - x; constraint residual] per surviving leaf.
pub fn approx_member(
    z: &HybridPolynomialZonotope,
    x: &[f64],
    params: &MembershipParams,
) -> Result<Option<FactorAssignment>, HpzError> {
    if x.len() != z.dim() {
        return Err(HpzError::LengthMismatch {
            context: "membership point",
            expected: z.dim(),
            found: x.len(),
        });
    }
    let leaves = z.leaf_count_checked(params.leaf_cap_log2)?;
    let starts = start_points(z.num_factors(), params.starts);
    for idx in 0..leaves {
        let xi_b = z.binary_assignment(idx);
        let leaf = z.fix_binary(&xi_b)?;
        if leaf_provably_empty(&leaf) {
            continue;
        }
        let boxes = coordinate_bounds(&leaf)?;
        if boxes.iter().zip(x).any(|(b, &v)| !b.contains(v, params.feas_tol)) {
            continue;
        }
        let sys = ResidualSystem {
            leaf: &leaf,
            target: Some(x),
        };
        for start in &starts {
            let result = gauss_newton(&sys, start, params.max_iters, params.feas_tol * 1e-3);
            let mut res = Vec::new();
            sys.residual(&result.xi, &mut res);
            if norm_inf(&res) <= params.feas_tol {
                return Ok(Some(FactorAssignment {
                    xi_c: result.xi,
                    xi_b,
                }));
            }
        }
    }
    Ok(None)
}
