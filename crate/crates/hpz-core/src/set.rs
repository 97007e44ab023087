//! The hybrid polynomial zonotope data type: validation, evaluation,
//! constraint residuals, exact compaction, and special-case embeddings.
//!
//! A set is the eight-block tuple (c, G_c, G_b, E, A_c, A_b, b, R):
//!
//! ```text
//! { c + G_b xi_b + sum_i ( prod_k xi_c,k^E(k,i) ) G_c(:,i)
//!   | A_b xi_b + sum_i ( prod_k xi_c,k^R(k,i) ) A_c(:,i) = b,
//!     xi_c in [-1,1]^{n_e}, xi_b in {-1,+1}^{n_b} }
//! ```
//!
//! Exponents are nonnegative integers and 0^0 := 1, so an exponent of 0
//! means the factor does not appear in that monomial.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, HpzError};
use crate::matrix::{powi, ExpMat, Mat};

/// Absolute tolerance on each constraint residual component. Constraints are
/// polynomial equalities; exact zero is unattainable in floating point.
pub const FEAS_TOL: f64 = 1e-9;

/// Default cap on binary leaf enumeration: at most 2^20 leaves.
pub const DEFAULT_LEAF_CAP_LOG2: u32 = 20;

/// Hybrid polynomial zonotope in HPCG-representation.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridPolynomialZonotope {
    pub(crate) c: Vec<f64>,
    pub(crate) g_c: Mat,
    pub(crate) g_b: Mat,
    pub(crate) e: ExpMat,
    pub(crate) a_c: Mat,
    pub(crate) a_b: Mat,
    pub(crate) b: Vec<f64>,
    pub(crate) r: ExpMat,
}

/// One point in factor space: continuous factors in the unit box plus a
/// binary factor vector over {-1, +1}.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorAssignment {
    pub xi_c: Vec<f64>,
    pub xi_b: Vec<f64>,
}

impl FactorAssignment {
    pub fn new(xi_c: Vec<f64>, xi_b: Vec<f64>) -> Result<Self, HpzError> {
        for (i, &x) in xi_c.iter().enumerate() {
            if !(-1.0..=1.0).contains(&x) {
                return Err(HpzError::FactorOutOfBox { index: i });
            }
        }
        for (i, &x) in xi_b.iter().enumerate() {
            if x != 1.0 && x != -1.0 {
                return Err(HpzError::InvalidBinaryFactor { index: i });
            }
        }
        Ok(FactorAssignment { xi_c, xi_b })
    }

    /// Concatenation of two assignments (factor spaces are independent).
    pub fn concat(&self, other: &FactorAssignment) -> FactorAssignment {
        let mut xi_c = self.xi_c.clone();
        xi_c.extend_from_slice(&other.xi_c);
        let mut xi_b = self.xi_b.clone();
        xi_b.extend_from_slice(&other.xi_b);
        FactorAssignment { xi_c, xi_b }
    }
}

/// Sampled member points plus the metadata that makes the cloud reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
    pub grid_res: usize,
    /// Number of feasible (kept) factor assignments visited.
    pub feasible_visited: usize,
}

impl PointCloud {
    pub fn empty(seed: u64, grid_res: usize) -> Self {
        PointCloud {
            points: Vec::new(),
            seed,
            grid_res,
            feasible_visited: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn merge(mut self, other: PointCloud) -> PointCloud {
        self.points.extend(other.points);
        self.feasible_visited += other.feasible_visited;
        self
    }
}

/// Evaluates the monomial prod_k xi_k^{exps(k, col)}.
#[inline]
pub(crate) fn monomial(exps: &ExpMat, col: usize, xi: &[f64]) -> f64 {
    let mut m = 1.0;
    for k in 0..exps.rows() {
        let e = exps.get(k, col);
        if e > 0 {
            m *= powi(xi[k], e);
        }
    }
    m
}

/// Gradient of the monomial with respect to every factor.
pub(crate) fn monomial_grad(exps: &ExpMat, col: usize, xi: &[f64], out: &mut [f64]) {
    for k in 0..exps.rows() {
        let ek = exps.get(k, col);
        if ek == 0 {
            out[k] = 0.0;
            continue;
        }
        let mut g = ek as f64 * powi(xi[k], ek - 1);
        for j in 0..exps.rows() {
            if j == k {
                continue;
            }
            let ej = exps.get(j, col);
            if ej > 0 {
                g *= powi(xi[j], ej);
            }
        }
        out[k] = g;
    }
}

impl HybridPolynomialZonotope {
    /// Builds and validates a set from its eight blocks.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c: Vec<f64>,
        g_c: Mat,
        g_b: Mat,
        e: ExpMat,
        a_c: Mat,
        a_b: Mat,
        b: Vec<f64>,
        r: ExpMat,
    ) -> Result<Self, HpzError> {
        let z = HybridPolynomialZonotope {
            c,
            g_c,
            g_b,
            e,
            a_c,
            a_b,
            b,
            r,
        };
        z.validate()?;
        Ok(z)
    }

    /// Checks all block dimension invariants.
    pub fn validate(&self) -> Result<(), HpzError> {
        let n = self.c.len();
        let check = |ctx: &'static str, expected: usize, found: usize, detail: &str| {
            if expected == found {
                Ok(())
            } else {
                Err(dim_err(ctx, expected, found, detail))
            }
        };
        // Zero-column/zero-row blocks carry degenerate shapes; only enforce
        // agreement where a block actually has content.
        if self.g_c.cols() > 0 || self.g_c.rows() > 0 {
            check("G_c rows", n, self.g_c.rows(), "must match len(c)")?;
        }
        if self.g_b.cols() > 0 || self.g_b.rows() > 0 {
            check("G_b rows", n, self.g_b.rows(), "must match len(c)")?;
        }
        check(
            "E cols",
            self.g_c.cols(),
            self.e.cols(),
            "one exponent column per generator",
        )?;
        check(
            "R cols",
            self.a_c.cols(),
            self.r.cols(),
            "one exponent column per constraint generator",
        )?;
        check(
            "E/R rows",
            self.e.rows(),
            self.r.rows(),
            "shared factor space",
        )?;
        let n_c = self.b.len();
        if self.a_c.cols() > 0 || self.a_c.rows() > 0 {
            check("A_c rows", n_c, self.a_c.rows(), "must match len(b)")?;
        }
        if self.a_b.cols() > 0 || self.a_b.rows() > 0 {
            check("A_b rows", n_c, self.a_b.rows(), "must match len(b)")?;
        }
        if self.g_b.cols() != self.a_b.cols() && self.a_b.rows() > 0 && self.g_b.rows() > 0 {
            return Err(dim_err(
                "A_b cols",
                self.g_b.cols(),
                self.a_b.cols(),
                "binary factor count shared between G_b and A_b",
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Number of continuous (polynomial) generators, n_g.
    pub fn num_generators(&self) -> usize {
        self.g_c.cols()
    }

    /// Number of binary factors, n_b.
    pub fn num_binary(&self) -> usize {
        self.g_b.cols().max(self.a_b.cols())
    }

    /// Number of constraints, n_c.
    pub fn num_constraints(&self) -> usize {
        self.b.len()
    }

    /// Number of constraint generators, n_q.
    pub fn num_constraint_generators(&self) -> usize {
        self.a_c.cols()
    }

    /// Number of continuous factors, n_e.
    pub fn num_factors(&self) -> usize {
        self.e.rows()
    }

    pub fn center(&self) -> &[f64] {
        &self.c
    }

    pub fn continuous_generators(&self) -> &Mat {
        &self.g_c
    }

    pub fn binary_generators(&self) -> &Mat {
        &self.g_b
    }

    pub fn exponents(&self) -> &ExpMat {
        &self.e
    }

    pub fn constraint_generators(&self) -> &Mat {
        &self.a_c
    }

    pub fn binary_constraints(&self) -> &Mat {
        &self.a_b
    }

    pub fn constraint_offsets(&self) -> &[f64] {
        &self.b
    }

    pub fn constraint_exponents(&self) -> &ExpMat {
        &self.r
    }

    /// The singleton set {c}.
    pub fn singleton(c: Vec<f64>) -> Self {
        let n = c.len();
        HybridPolynomialZonotope {
            c,
            g_c: Mat::zeros(n, 0),
            g_b: Mat::zeros(n, 0),
            e: ExpMat::zeros(0, 0),
            a_c: Mat::zeros(0, 0),
            a_b: Mat::zeros(0, 0),
            b: vec![],
            r: ExpMat::zeros(0, 0),
        }
    }

    /// A canonically empty set in dimension n (constraint 0 = 1).
    pub fn empty(n: usize) -> Self {
        HybridPolynomialZonotope {
            c: vec![0.0; n],
            g_c: Mat::zeros(n, 0),
            g_b: Mat::zeros(n, 0),
            e: ExpMat::zeros(0, 0),
            a_c: Mat::zeros(1, 0),
            a_b: Mat::zeros(1, 0),
            b: vec![1.0],
            r: ExpMat::zeros(0, 0),
        }
    }

    /// Zonotope embedding: identity exponents, one fresh factor per generator.
    pub fn from_zonotope(c: Vec<f64>, g: Mat) -> Result<Self, HpzError> {
        let n_g = g.cols();
        let n = c.len();
        HybridPolynomialZonotope::new(
            c,
            g,
            Mat::zeros(n, 0),
            ExpMat::identity(n_g),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
            vec![],
            ExpMat::zeros(n_g, 0),
        )
    }

    /// Constrained zonotope embedding (E = I, R = I).
    pub fn from_constrained_zonotope(
        c: Vec<f64>,
        g: Mat,
        a: Mat,
        b: Vec<f64>,
    ) -> Result<Self, HpzError> {
        let n_g = g.cols();
        let n = c.len();
        let n_c = b.len();
        if a.cols() != n_g {
            return Err(dim_err(
                "constrained zonotope A cols",
                n_g,
                a.cols(),
                "A must have one column per generator",
            ));
        }
        HybridPolynomialZonotope::new(
            c,
            g,
            Mat::zeros(n, 0),
            ExpMat::identity(n_g),
            a,
            Mat::zeros(n_c, 0),
            b,
            ExpMat::identity(n_g),
        )
    }

    /// Hybrid zonotope embedding (E = I, R = I, binary blocks kept).
    pub fn from_hybrid_zonotope(
        c: Vec<f64>,
        g_c: Mat,
        g_b: Mat,
        a_c: Mat,
        a_b: Mat,
        b: Vec<f64>,
    ) -> Result<Self, HpzError> {
        let n_g = g_c.cols();
        if a_c.cols() != n_g && b.len() > 0 {
            return Err(dim_err(
                "hybrid zonotope A_c cols",
                n_g,
                a_c.cols(),
                "A_c must have one column per generator",
            ));
        }
        // Without constraints, normalize the constraint blocks to zero
        // width so the invariants (R cols = A_c cols, A rows = |b|) hold
        // regardless of how the caller shaped the empty matrices.
        let (a_c, a_b, r) = if b.is_empty() {
            (
                Mat::zeros(0, 0),
                Mat::zeros(0, a_b.cols()),
                ExpMat::zeros(n_g, 0),
            )
        } else {
            (a_c, a_b, ExpMat::identity(n_g))
        };
        HybridPolynomialZonotope::new(c, g_c, g_b, ExpMat::identity(n_g), a_c, a_b, b, r)
    }

    /// Constrained polynomial zonotope embedding (empty binary blocks).
    pub fn from_cpz(
        c: Vec<f64>,
        g: Mat,
        e: ExpMat,
        a: Mat,
        b: Vec<f64>,
        r: ExpMat,
    ) -> Result<Self, HpzError> {
        let n = c.len();
        let n_c = b.len();
        HybridPolynomialZonotope::new(c, g, Mat::zeros(n, 0), e, a, Mat::zeros(n_c, 0), b, r)
    }

    fn check_assignment(&self, a: &FactorAssignment) -> Result<(), HpzError> {
        if a.xi_c.len() != self.num_factors() {
            return Err(HpzError::LengthMismatch {
                context: "xi_c",
                expected: self.num_factors(),
                found: a.xi_c.len(),
            });
        }
        if a.xi_b.len() != self.num_binary() {
            return Err(HpzError::LengthMismatch {
                context: "xi_b",
                expected: self.num_binary(),
                found: a.xi_b.len(),
            });
        }
        Ok(())
    }

    /// The generator sum c + G_b xi_b + sum_i (prod xi^E) G_c(:,i).
    pub fn evaluate(&self, a: &FactorAssignment) -> Result<Vec<f64>, HpzError> {
        self.check_assignment(a)?;
        Ok(self.evaluate_unchecked(&a.xi_c, &a.xi_b))
    }

    pub(crate) fn evaluate_unchecked(&self, xi_c: &[f64], xi_b: &[f64]) -> Vec<f64> {
        let mut x = self.c.clone();
        for j in 0..self.g_b.cols() {
            let s = xi_b[j];
            for i in 0..x.len() {
                x[i] += self.g_b.get(i, j) * s;
            }
        }
        for col in 0..self.g_c.cols() {
            let m = monomial(&self.e, col, xi_c);
            if m != 0.0 {
                for i in 0..x.len() {
                    x[i] += self.g_c.get(i, col) * m;
                }
            }
        }
        x
    }

    /// A_b xi_b + sum_i (prod xi^R) A_c(:,i) - b. Zero (within [`FEAS_TOL`])
    /// means the assignment is feasible.
    pub fn constraint_residual(&self, a: &FactorAssignment) -> Result<Vec<f64>, HpzError> {
        self.check_assignment(a)?;
        Ok(self.residual_unchecked(&a.xi_c, &a.xi_b))
    }

    pub(crate) fn residual_unchecked(&self, xi_c: &[f64], xi_b: &[f64]) -> Vec<f64> {
        let n_c = self.num_constraints();
        let mut res = vec![0.0; n_c];
        for j in 0..self.a_b.cols() {
            let s = xi_b[j];
            for i in 0..n_c {
                res[i] += self.a_b.get(i, j) * s;
            }
        }
        for col in 0..self.a_c.cols() {
            let m = monomial(&self.r, col, xi_c);
            if m != 0.0 {
                for i in 0..n_c {
                    res[i] += self.a_c.get(i, col) * m;
                }
            }
        }
        for i in 0..n_c {
            res[i] -= self.b[i];
        }
        res
    }

    pub fn is_feasible(&self, a: &FactorAssignment) -> Result<bool, HpzError> {
        let res = self.constraint_residual(a)?;
        Ok(res.iter().all(|&x| crate::matrix::fabs(x) <= FEAS_TOL))
    }

    /// Exact compaction: merges duplicate exponent columns, folds
    /// zero-exponent columns into the center / offsets, drops all-zero
    /// generator columns and unused factor rows. Set semantics are preserved
    /// exactly (every assignment of one side has a matching assignment of the
    /// other with equal value and equivalent feasibility).
    pub fn compact(&self) -> Self {
        self.compact_with_rows().0
    }

    /// [`compact`](Self::compact) plus the indices of the factor rows that
    /// survived, so callers can map assignments through the compaction.
    pub fn compact_with_rows(&self) -> (Self, Vec<usize>) {
        let n = self.dim();
        let n_c = self.num_constraints();

        // Generators: fold constants, merge duplicate exponent columns.
        let mut c = self.c.clone();
        let mut gen_map: BTreeMap<Vec<u32>, Vec<f64>> = BTreeMap::new();
        let mut gen_order: Vec<Vec<u32>> = Vec::new();
        for col in 0..self.g_c.cols() {
            let exps = self.e.col(col);
            let g = self.g_c.col(col);
            if exps.iter().all(|&x| x == 0) {
                for i in 0..n {
                    c[i] += g[i];
                }
                continue;
            }
            match gen_map.get_mut(&exps) {
                Some(acc) => {
                    for i in 0..n {
                        acc[i] += g[i];
                    }
                }
                None => {
                    gen_order.push(exps.clone());
                    gen_map.insert(exps, g);
                }
            }
        }
        gen_order.retain(|key| gen_map[key].iter().any(|&x| x != 0.0));

        // Constraint generators: same treatment against b.
        let mut b = self.b.clone();
        let mut con_map: BTreeMap<Vec<u32>, Vec<f64>> = BTreeMap::new();
        let mut con_order: Vec<Vec<u32>> = Vec::new();
        for col in 0..self.a_c.cols() {
            let exps = self.r.col(col);
            let a = self.a_c.col(col);
            if exps.iter().all(|&x| x == 0) {
                for i in 0..n_c {
                    b[i] -= a[i];
                }
                continue;
            }
            match con_map.get_mut(&exps) {
                Some(acc) => {
                    for i in 0..n_c {
                        acc[i] += a[i];
                    }
                }
                None => {
                    con_order.push(exps.clone());
                    con_map.insert(exps, a);
                }
            }
        }
        con_order.retain(|key| con_map[key].iter().any(|&x| x != 0.0));

        // Factor rows used anywhere in the surviving columns.
        let n_e = self.num_factors();
        let mut used = vec![false; n_e];
        for key in gen_order.iter().chain(con_order.iter()) {
            for (k, &e) in key.iter().enumerate() {
                if e > 0 {
                    used[k] = true;
                }
            }
        }
        let keep_rows: Vec<usize> = (0..n_e).filter(|&k| used[k]).collect();

        let mut g_c = Mat::zeros(n, gen_order.len());
        let mut e = ExpMat::zeros(keep_rows.len(), gen_order.len());
        for (j, key) in gen_order.iter().enumerate() {
            let g = &gen_map[key];
            for i in 0..n {
                g_c.set(i, j, g[i]);
            }
            for (ii, &k) in keep_rows.iter().enumerate() {
                e.set(ii, j, key[k]);
            }
        }
        let mut a_c = Mat::zeros(n_c, con_order.len());
        let mut r = ExpMat::zeros(keep_rows.len(), con_order.len());
        for (j, key) in con_order.iter().enumerate() {
            let a = &con_map[key];
            for i in 0..n_c {
                a_c.set(i, j, a[i]);
            }
            for (ii, &k) in keep_rows.iter().enumerate() {
                r.set(ii, j, key[k]);
            }
        }

        (
            HybridPolynomialZonotope {
                c,
                g_c,
                g_b: self.g_b.clone(),
                e,
                a_c,
                a_b: self.a_b.clone(),
                b,
                r,
            },
            keep_rows,
        )
    }

    /// The binary assignment for leaf `index`, bit k of the index selecting
    /// +1 for binary factor k. This is the canonical leaf order used
    /// everywhere (sampling, emptiness, membership).
    pub fn binary_assignment(&self, index: usize) -> Vec<f64> {
        (0..self.num_binary())
            .map(|k| if (index >> k) & 1 == 1 { 1.0 } else { -1.0 })
            .collect()
    }

    pub(crate) fn leaf_count_checked(&self, cap_log2: u32) -> Result<usize, HpzError> {
        let n_b = self.num_binary() as u32;
        if n_b > cap_log2 {
            return Err(HpzError::BudgetExceeded {
                leaves_log2: n_b,
                cap_log2,
            });
        }
        Ok(1usize << n_b)
    }

    /// Fixes one binary assignment, folding G_b xi_b into c and A_b xi_b
    /// into b. The result has no binary blocks.
    pub fn fix_binary(&self, xi_b: &[f64]) -> Result<Self, HpzError> {
        if xi_b.len() != self.num_binary() {
            return Err(HpzError::LengthMismatch {
                context: "xi_b",
                expected: self.num_binary(),
                found: xi_b.len(),
            });
        }
        let n = self.dim();
        let n_c = self.num_constraints();
        let mut c = self.c.clone();
        for j in 0..self.g_b.cols() {
            for i in 0..n {
                c[i] += self.g_b.get(i, j) * xi_b[j];
            }
        }
        let mut b = self.b.clone();
        for j in 0..self.a_b.cols() {
            for i in 0..n_c {
                b[i] -= self.a_b.get(i, j) * xi_b[j];
            }
        }
        Ok(HybridPolynomialZonotope {
            c,
            g_c: self.g_c.clone(),
            g_b: Mat::zeros(n, 0),
            e: self.e.clone(),
            a_c: self.a_c.clone(),
            a_b: Mat::zeros(n_c, 0),
            b,
            r: self.r.clone(),
        })
    }

    /// One-line size summary for logs and diagnostics.
    pub fn describe(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(
            s,
            "HPZ(n={}, n_g={}, n_b={}, n_c={}, n_q={}, n_e={})",
            self.dim(),
            self.num_generators(),
            self.num_binary(),
            self.num_constraints(),
            self.num_constraint_generators(),
            self.num_factors()
        );
        s
    }
}
