//! Independent brute-force ground truth. Everything here recomputes set
//! semantics from raw numeric blocks — no calls into the library's
//! evaluation, sampling, or operation code — so that agreement between the
//! two paths is meaningful differential evidence.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Raw copy of the eight blocks, plain vectors only.
#[derive(Clone, Debug)]
pub struct RawSet {
    pub c: Vec<f64>,
    /// Row-major n x n_g.
    pub g_c: Vec<Vec<f64>>,
    pub g_b: Vec<Vec<f64>>,
    /// Row k = exponents of factor k across generators (n_e x n_g).
    pub e: Vec<Vec<u32>>,
    pub a_c: Vec<Vec<f64>>,
    pub a_b: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub r: Vec<Vec<u32>>,
}

impl RawSet {
    /// Copies the blocks out of a library set. Pure data transfer; all
    /// semantics below are recomputed from scratch.
    pub fn from_library(z: &hpz_core::HybridPolynomialZonotope) -> RawSet {
        let mat = |m: &hpz_core::Mat| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
        let exp = |m: &hpz_core::ExpMat| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect::<Vec<u32>>())
                .collect::<Vec<_>>()
        };
        RawSet {
            c: z.center().to_vec(),
            g_c: mat(z.continuous_generators()),
            g_b: mat(z.binary_generators()),
            e: exp(z.exponents()),
            a_c: mat(z.constraint_generators()),
            a_b: mat(z.binary_constraints()),
            b: z.constraint_offsets().to_vec(),
            r: exp(z.constraint_exponents()),
        }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn num_generators(&self) -> usize {
        self.g_c.first().map_or(0, |r| r.len())
    }

    pub fn num_binary(&self) -> usize {
        self.g_b
            .first()
            .map_or(0, |r| r.len())
            .max(self.a_b.first().map_or(0, |r| r.len()))
    }

    pub fn num_factors(&self) -> usize {
        self.e.len()
    }

    /// Generator sum, written from the set definition: for each generator
    /// column, multiply out the factor powers, then accumulate.
    pub fn eval(&self, xi_c: &[f64], xi_b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let n_g = self.num_generators();
        let mut x = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.c[i];
            for j in 0..self.g_b.get(i).map_or(0, |r| r.len()) {
                acc += self.g_b[i][j] * xi_b[j];
            }
            for col in 0..n_g {
                let mut mono = 1.0;
                for (k, erow) in self.e.iter().enumerate() {
                    let p = erow[col];
                    if p > 0 {
                        mono *= xi_c[k].powi(p as i32);
                    }
                }
                acc += self.g_c[i][col] * mono;
            }
            x[i] = acc;
        }
        x
    }

    /// Constraint residual A_b xi_b + sum monomials * A_c - b.
    pub fn residual(&self, xi_c: &[f64], xi_b: &[f64]) -> Vec<f64> {
        let n_c = self.b.len();
        let n_q = self.a_c.first().map_or(0, |r| r.len());
        let mut res = vec![0.0; n_c];
        for i in 0..n_c {
            let mut acc = -self.b[i];
            for j in 0..self.a_b.get(i).map_or(0, |r| r.len()) {
                acc += self.a_b[i][j] * xi_b[j];
            }
            for col in 0..n_q {
                let mut mono = 1.0;
                for (k, rrow) in self.r.iter().enumerate() {
                    let p = rrow[col];
                    if p > 0 {
                        mono *= xi_c[k].powi(p as i32);
                    }
                }
                acc += self.a_c[i][col] * mono;
            }
            res[i] = acc;
        }
        res
    }
}

/// Uniform grid over [-1,1]^dims (res points per axis), optionally topped
/// up with seeded random points.
pub fn factor_grid(dims: usize, res: usize) -> Vec<Vec<f64>> {
    if dims == 0 {
        return vec![vec![]];
    }
    let coord = |i: usize| {
        if res == 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (res - 1) as f64
        }
    };
    let total = res.pow(dims as u32);
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rest = flat;
        let mut p = Vec::with_capacity(dims);
        for _ in 0..dims {
            p.push(coord(rest % res));
            rest /= res;
        }
        out.push(p);
    }
    out
}

pub fn random_factors(dims: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dims)
                .map(|_| 2.0 * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) - 1.0)
                .collect()
        })
        .collect()
}

/// All binary corner assignments in canonical order (bit k set -> +1).
pub fn binary_corners(n_b: usize) -> Vec<Vec<f64>> {
    (0..(1usize << n_b))
        .map(|idx| {
            (0..n_b)
                .map(|k| if (idx >> k) & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect()
}

/// Direct enumeration of an unconstrained set's member cloud on a grid:
/// every binary corner crossed with every grid point.
pub fn enumerate_cloud(set: &RawSet, grid_res: usize) -> Vec<Vec<f64>> {
    let grid = factor_grid(set.num_factors(), grid_res);
    let corners = binary_corners(set.num_binary());
    let mut out = Vec::with_capacity(grid.len() * corners.len());
    for xi_b in &corners {
        for xi_c in &grid {
            out.push(set.eval(xi_c, xi_b));
        }
    }
    out
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Comparison metrics between two point clouds.
#[derive(Clone, Copy, Debug)]
pub struct CloudMetrics {
    pub directed_hausdorff_ab: f64,
    pub directed_hausdorff_ba: f64,
    /// Fraction of points (worse side) within `eps` of the other cloud.
    pub coverage_fraction: f64,
}

impl CloudMetrics {
    pub fn hausdorff(&self) -> f64 {
        self.directed_hausdorff_ab.max(self.directed_hausdorff_ba)
    }
}

/// Distance comparisons on empty clouds are undefined; report emptiness
/// agreement instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudComparison {
    Metrics(CloudMetricsTag),
    /// One or both clouds empty; the flag says whether both were.
    EmptyCloud { both_empty: bool },
}

/// Wrapper so the enum stays Copy + Eq-comparable on the tag.
#[derive(Clone, Copy, Debug)]
pub struct CloudMetricsTag(pub CloudMetrics);

impl PartialEq for CloudMetricsTag {
    fn eq(&self, other: &Self) -> bool {
        self.0.directed_hausdorff_ab == other.0.directed_hausdorff_ab
            && self.0.directed_hausdorff_ba == other.0.directed_hausdorff_ba
    }
}

impl Eq for CloudMetricsTag {}

fn directed_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for p in a {
        let mut best = f64::INFINITY;
        for q in b {
            let d = euclid(p, q);
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}

/// Brute-force directed Hausdorff both ways plus coverage at `eps`.
pub fn compare(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> CloudComparison {
    if a.is_empty() || b.is_empty() {
        return CloudComparison::EmptyCloud {
            both_empty: a.is_empty() && b.is_empty(),
        };
    }
    let d_ab = directed_hausdorff(a, b);
    let d_ba = directed_hausdorff(b, a);
    let frac = |src: &[Vec<f64>], dst: &[Vec<f64>]| {
        let hits = src
            .iter()
            .filter(|p| dst.iter().any(|q| euclid(p, q) <= eps))
            .count();
        hits as f64 / src.len() as f64
    };
    CloudComparison::Metrics(CloudMetricsTag(CloudMetrics {
        directed_hausdorff_ab: d_ab,
        directed_hausdorff_ba: d_ba,
        coverage_fraction: frac(a, b).min(frac(b, a)),
    }))
}

/// Like [`compare`], but exploits index pairing when both clouds have the
/// same length: if every `a[i]` is within `eps` of `b[i]`, the max paired
/// distance is an upper bound on both directed Hausdorff distances, so the
/// metrics reported are sound for a pass/fail decision at tolerance `eps`.
/// Falls back to the full quadratic comparison otherwise.
pub fn compare_paired(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> CloudComparison {
    if a.is_empty() || b.is_empty() {
        return CloudComparison::EmptyCloud {
            both_empty: a.is_empty() && b.is_empty(),
        };
    }
    if a.len() == b.len() {
        let mut worst = 0.0f64;
        let mut paired = true;
        for (p, q) in a.iter().zip(b) {
            let d = euclid(p, q);
            if d > eps {
                paired = false;
                break;
            }
            if d > worst {
                worst = d;
            }
        }
        if paired {
            return CloudComparison::Metrics(CloudMetricsTag(CloudMetrics {
                directed_hausdorff_ab: worst,
                directed_hausdorff_ba: worst,
                coverage_fraction: 1.0,
            }));
        }
    }
    compare(a, b, eps)
}

/// Raw dynamics of one mode for the simulator.
#[derive(Clone, Debug)]
pub struct RawMode {
    /// Guard rows (l, rho): inside iff l . x <= rho for every row.
    pub guard: Vec<(Vec<f64>, f64)>,
    /// One quadratic form per output coordinate.
    pub q: Vec<Vec<Vec<f64>>>,
    pub a: Vec<Vec<f64>>,
    pub d: Vec<f64>,
}

impl RawMode {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.guard.iter().all(|(l, rho)| {
            l.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= *rho
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n_out = self.d.len();
        let mut y = vec![0.0; n_out];
        for r in 0..n_out {
            let mut acc = self.d[r];
            for (j, &xj) in x.iter().enumerate() {
                acc += self.a[r][j] * xj;
            }
            for (i, row) in self.q[r].iter().enumerate() {
                for (j, &qij) in row.iter().enumerate() {
                    acc += x[i] * qij * x[j];
                }
            }
            y[r] = acc;
        }
        y
    }
}

#[derive(Clone, Debug)]
pub enum SimulationError {
    /// The state escaped every guard at the given step.
    NoModeContains { step: usize, state: Vec<f64> },
}

/// Exact pointwise iteration of the piecewise dynamics; guard boundary ties
/// go to the lowest mode index. Returns states x_0 .. x_n and the mode
/// chosen at each step.
pub fn simulate(
    modes: &[RawMode],
    x0: &[f64],
    n: usize,
) -> Result<(Vec<Vec<f64>>, Vec<usize>), SimulationError> {
    let mut states = Vec::with_capacity(n + 1);
    let mut chosen = Vec::with_capacity(n);
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    for k in 0..n {
        let mode = modes
            .iter()
            .position(|m| m.contains(&x))
            .ok_or(SimulationError::NoModeContains {
                step: k,
                state: x.clone(),
            })?;
        x = modes[mode].apply(&x);
        chosen.push(mode);
        states.push(x.clone());
    }
    Ok((states, chosen))
}

/// Converts parsed mode specs into raw simulator modes (data copy only).
pub fn raw_modes(specs: &[crate::model::ModeSpec]) -> Vec<RawMode> {
    specs
        .iter()
        .map(|m| RawMode {
            guard: m
                .guard
                .l
                .iter()
                .cloned()
                .zip(m.guard.rho.iter().cloned())
                .collect(),
            q: m.quadratic.clone(),
            a: m.linear.clone(),
            d: m.offset.clone(),
        })
        .collect()
}
