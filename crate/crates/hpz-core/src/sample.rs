//! Brute-force member sampling: the verification workhorse.
//!
//! All binary assignments are enumerated; for each leaf the continuous box
//! is scanned on a uniform grid (plus seeded pseudo-random interior points
//! up to a candidate budget). Constrained leaves additionally root-polish
//! every candidate so feasible manifolds of measure zero still get
//! populated. Output is deterministic for fixed parameters: the candidate
//! sequence depends only on (seed, grid_res, max_points, n_e), never on the
//! leaf index, so structurally identical leaves yield translated clouds.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::HpzError;
use crate::matrix::norm_inf;
use crate::set::{
    FactorAssignment, HybridPolynomialZonotope, PointCloud, DEFAULT_LEAF_CAP_LOG2, FEAS_TOL,
};
use crate::solve::{gauss_newton, ResidualSystem};

/// Sampling configuration. `max_points` budgets candidates per leaf; the
/// grid is only used when it fits inside that budget, so tests can force a
/// pure (alignment-friendly) grid by matching the two.
#[derive(Clone, Debug)]
pub struct SampleParams {
    pub grid_res: usize,
    pub max_points: usize,
    pub seed: u64,
    pub leaf_cap_log2: u32,
    pub feas_tol: f64,
}

impl SampleParams {
    pub fn new(grid_res: usize, max_points: usize, seed: u64) -> Self {
        SampleParams {
            grid_res,
            max_points,
            seed,
            leaf_cap_log2: DEFAULT_LEAF_CAP_LOG2,
            feas_tol: FEAS_TOL,
        }
    }

    pub fn with_leaf_cap(mut self, cap_log2: u32) -> Self {
        self.leaf_cap_log2 = cap_log2;
        self
    }
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams::new(7, 4000, 0)
    }
}

fn grid_coord(idx: usize, res: usize) -> f64 {
    if res == 1 {
        0.0
    } else {
        -1.0 + 2.0 * idx as f64 / (res - 1) as f64
    }
}

/// Number of full-grid candidates, or None on overflow.
fn grid_size(res: usize, dims: usize) -> Option<usize> {
    let mut total = 1usize;
    for _ in 0..dims {
        total = total.checked_mul(res)?;
    }
    Some(total)
}

/// Deterministic candidate sequence over the continuous factor box.
pub(crate) fn candidates(n_e: usize, params: &SampleParams) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    if n_e == 0 {
        out.push(vec![]);
        return out;
    }
    let grid_total = grid_size(params.grid_res, n_e).filter(|&t| t <= params.max_points);
    if let Some(total) = grid_total {
        for flat in 0..total {
            let mut point = Vec::with_capacity(n_e);
            let mut rest = flat;
            for _ in 0..n_e {
                point.push(grid_coord(rest % params.grid_res, params.grid_res));
                rest /= params.grid_res;
            }
            out.push(point);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    while out.len() < params.max_points {
        let point = (0..n_e)
            .map(|_| {
                let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                2.0 * u - 1.0
            })
            .collect();
        out.push(point);
    }
    out
}

/// Samples the member cloud of `z`.
pub fn sample(
    z: &HybridPolynomialZonotope,
    params: &SampleParams,
) -> Result<PointCloud, HpzError> {
    z.validate()?;
    let leaves = z.leaf_count_checked(params.leaf_cap_log2)?;
    let cands = candidates(z.num_factors(), params);
    let mut cloud = PointCloud::empty(params.seed, params.grid_res);
    let constrained = z.num_constraints() > 0;
    for leaf_idx in 0..leaves {
        let xi_b = z.binary_assignment(leaf_idx);
        let leaf = z.fix_binary(&xi_b)?;
        let sys = ResidualSystem {
            leaf: &leaf,
            target: None,
        };
        for cand in &cands {
            if !constrained {
                cloud.points.push(leaf.evaluate_unchecked(cand, &[]));
                cloud.feasible_visited += 1;
                continue;
            }
            let res = leaf.residual_unchecked(cand, &[]);
            if norm_inf(&res) <= params.feas_tol {
                cloud.points.push(leaf.evaluate_unchecked(cand, &[]));
                cloud.feasible_visited += 1;
                continue;
            }
            let polished = gauss_newton(&sys, cand, 50, params.feas_tol * 1e-3);
            let res = leaf.residual_unchecked(&polished.xi, &[]);
            if norm_inf(&res) <= params.feas_tol {
                cloud.points.push(leaf.evaluate_unchecked(&polished.xi, &[]));
                cloud.feasible_visited += 1;
            }
        }
    }
    Ok(cloud)
}

/// Like [`sample`] but keeps per-leaf clouds separate (in canonical leaf
/// order). Used by emptiness counting and fixture checks.
pub fn sample_leaves(
    z: &HybridPolynomialZonotope,
    params: &SampleParams,
) -> Result<Vec<PointCloud>, HpzError> {
    z.validate()?;
    let leaves = z.leaf_count_checked(params.leaf_cap_log2)?;
    let cands = candidates(z.num_factors(), params);
    let constrained = z.num_constraints() > 0;
    let mut out = Vec::with_capacity(leaves);
    for leaf_idx in 0..leaves {
        let xi_b = z.binary_assignment(leaf_idx);
        let leaf = z.fix_binary(&xi_b)?;
        let sys = ResidualSystem {
            leaf: &leaf,
            target: None,
        };
        let mut cloud = PointCloud::empty(params.seed, params.grid_res);
        for cand in &cands {
            if !constrained {
                cloud.points.push(leaf.evaluate_unchecked(cand, &[]));
                cloud.feasible_visited += 1;
                continue;
            }
            let res = leaf.residual_unchecked(cand, &[]);
            if norm_inf(&res) <= params.feas_tol {
                cloud.points.push(leaf.evaluate_unchecked(cand, &[]));
                cloud.feasible_visited += 1;
                continue;
            }
            let polished = gauss_newton(&sys, cand, 50, params.feas_tol * 1e-3);
            let res = leaf.residual_unchecked(&polished.xi, &[]);
            if norm_inf(&res) <= params.feas_tol {
                cloud.points.push(leaf.evaluate_unchecked(&polished.xi, &[]));
                cloud.feasible_visited += 1;
            }
        }
        out.push(cloud);
    }
    Ok(out)
}

/// Convenience: sample and also return the assignments that produced each
/// point. The tests that replay proof constructions need the factor values.
pub fn sample_with_assignments(
    z: &HybridPolynomialZonotope,
    params: &SampleParams,
) -> Result<Vec<(FactorAssignment, Vec<f64>)>, HpzError> {
    z.validate()?;
    let leaves = z.leaf_count_checked(params.leaf_cap_log2)?;
    let cands = candidates(z.num_factors(), params);
    let constrained = z.num_constraints() > 0;
    let mut out = Vec::new();
    for leaf_idx in 0..leaves {
        let xi_b = z.binary_assignment(leaf_idx);
        let leaf = z.fix_binary(&xi_b)?;
        let sys = ResidualSystem {
            leaf: &leaf,
            target: None,
        };
        for cand in &cands {
            let xi_c = if constrained {
                let res = leaf.residual_unchecked(cand, &[]);
                if norm_inf(&res) <= params.feas_tol {
                    cand.clone()
                } else {
                    let polished = gauss_newton(&sys, cand, 50, params.feas_tol * 1e-3);
                    let res = leaf.residual_unchecked(&polished.xi, &[]);
                    if norm_inf(&res) > params.feas_tol {
                        continue;
                    }
                    polished.xi
                }
            } else {
                cand.clone()
            };
            let point = leaf.evaluate_unchecked(&xi_c, &[]);
            out.push((
                FactorAssignment {
                    xi_c,
                    xi_b: xi_b.clone(),
                },
                point,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ExpMat, Mat};
    use alloc::vec;

    #[test]
    fn unconstrained_box_cloud_inverts() {
        // Square nonsingular generator matrix: invert each sample back into
        // the factor box.
        let g = Mat::from_rows(&[vec![1.0, 0.5], vec![0.0, 2.0]]);
        let z = HybridPolynomialZonotope::from_zonotope(vec![1.0, -1.0], g).unwrap();
        let cloud = sample(&z, &SampleParams::new(5, 25, 7)).unwrap();
        assert_eq!(cloud.points.len(), 25);
        for p in &cloud.points {
            // xi = G^{-1}(p - c) for G = [[1, .5],[0, 2]].
            let y = [p[0] - 1.0, p[1] + 1.0];
            let xi2 = y[1] / 2.0;
            let xi1 = y[0] - 0.5 * xi2;
            assert!(xi1.abs() <= 1.0 + 1e-12 && xi2.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn infeasible_constant_constraint_gives_empty_cloud() {
        let z = HybridPolynomialZonotope::from_cpz(
            vec![0.0],
            Mat::from_rows(&[vec![1.0]]),
            ExpMat::identity(1),
            Mat::from_rows(&[vec![0.0]]),
            vec![1.0],
            ExpMat::identity(1),
        )
        .unwrap();
        let cloud = sample(&z, &SampleParams::new(5, 50, 7)).unwrap();
        assert!(cloud.is_empty());
    }

    #[test]
    fn sample_is_deterministic() {
        let g = Mat::from_rows(&[vec![1.0, 0.2], vec![-0.3, 1.0]]);
        let z = HybridPolynomialZonotope::from_zonotope(vec![0.0, 0.0], g).unwrap();
        let p = SampleParams::new(4, 40, 99);
        let a = sample(&z, &p).unwrap();
        let b = sample(&z, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn leaf_cap_is_enforced() {
        let z = HybridPolynomialZonotope::new(
            vec![0.0],
            Mat::zeros(1, 0),
            Mat::from_rows(&[vec![1.0, 2.0, 4.0]]),
            ExpMat::zeros(0, 0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 3),
            vec![],
            ExpMat::zeros(0, 0),
        )
        .unwrap();
        let err = sample(&z, &SampleParams::new(3, 10, 0).with_leaf_cap(2)).unwrap_err();
        assert!(matches!(err, HpzError::BudgetExceeded { .. }));
    }

    #[test]
    fn polishing_populates_measure_zero_manifold() {
        // Circle-like constraint xi1^2 + xi2^2 = 0.25: grid hits almost no
        // exact solutions, polishing must populate it.
        let z = HybridPolynomialZonotope::from_cpz(
            vec![0.0, 0.0],
            Mat::identity(2),
            ExpMat::identity(2),
            Mat::from_rows(&[vec![1.0, 1.0]]),
            vec![0.25],
            ExpMat::from_rows(&[vec![2, 0], vec![0, 2]]),
        )
        .unwrap();
        let cloud = sample(&z, &SampleParams::new(7, 60, 3)).unwrap();
        assert!(cloud.points.len() > 10);
        for p in &cloud.points {
            assert!((p[0] * p[0] + p[1] * p[1] - 0.25).abs() <= 1e-8);
        }
    }
}
