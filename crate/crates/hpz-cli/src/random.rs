//! Seeded random set instances for differential checks. Constrained
//! instances are built around a known feasible assignment so the set is
//! guaranteed nonempty and a membership witness is always available.

use hpz_core::{ExpMat, HybridPolynomialZonotope, Mat};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SetGen {
    rng: ChaCha8Rng,
}

impl SetGen {
    pub fn new(seed: u64) -> Self {
        SetGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in [-1, 1].
    pub fn unit(&mut self) -> f64 {
        2.0 * ((self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) - 1.0
    }

    /// Uniform in [-s, s].
    pub fn scaled(&mut self, s: f64) -> f64 {
        s * self.unit()
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.rng.next_u64() % bound as u64) as usize
    }

    pub fn mat(&mut self, rows: usize, cols: usize, scale: f64) -> Mat {
        Mat::from_fn(rows, cols, |_, _| self.scaled(scale))
    }

    /// Exponent matrix with entries in 0..=max_exp, nudged so no factor row
    /// and no generator column is all zero (keeps instances non-degenerate).
    pub fn exponents(&mut self, n_e: usize, n_g: usize, max_exp: u32) -> ExpMat {
        let mut e = ExpMat::zeros(n_e, n_g);
        for i in 0..n_e {
            for j in 0..n_g {
                e.set(i, j, (self.rng.next_u64() % (max_exp as u64 + 1)) as u32);
            }
        }
        for j in 0..n_g {
            if e.col_is_zero(j) && n_e > 0 {
                e.set(self.below(n_e), j, 1 + (self.rng.next_u64() % max_exp as u64) as u32);
            }
        }
        for i in 0..n_e {
            if (0..n_g).all(|j| e.get(i, j) == 0) && n_g > 0 {
                e.set(i, self.below(n_g), 1);
            }
        }
        e
    }

    /// Unconstrained hybrid zonotope with n_g continuous and n_b binary
    /// generators. Returns the embedded set.
    pub fn hybrid_zonotope(&mut self, n: usize, n_g: usize, n_b: usize) -> HybridPolynomialZonotope {
        let c = (0..n).map(|_| self.scaled(2.0)).collect::<Vec<_>>();
        let g_c = self.mat(n, n_g, 1.5);
        let g_b = self.mat(n, n_b, 1.5);
        HybridPolynomialZonotope::from_hybrid_zonotope(
            c,
            g_c,
            g_b,
            Mat::zeros(0, 0),
            Mat::zeros(0, n_b),
            vec![],
        )
        .expect("generated hybrid zonotope is well formed")
    }

    /// Unconstrained polynomial zonotope (exponents bounded by max_exp).
    pub fn polynomial_zonotope(
        &mut self,
        n: usize,
        n_g: usize,
        n_e: usize,
        max_exp: u32,
    ) -> HybridPolynomialZonotope {
        let c = (0..n).map(|_| self.scaled(2.0)).collect::<Vec<_>>();
        let g = self.mat(n, n_g, 1.5);
        let e = self.exponents(n_e, n_g, max_exp);
        HybridPolynomialZonotope::from_cpz(
            c,
            g,
            e,
            Mat::zeros(0, 0),
            vec![],
            ExpMat::zeros(n_e, 0),
        )
        .expect("generated polynomial zonotope is well formed")
    }

    /// Full random instance: n_b binary factors, n_c polynomial constraints.
    /// Constraint offsets are set to the constraint value at a random
    /// interior assignment, so that assignment is an exact member witness.
    #[allow(clippy::too_many_arguments)]
    pub fn hpz(
        &mut self,
        n: usize,
        n_g: usize,
        n_b: usize,
        n_e: usize,
        n_c: usize,
        n_q: usize,
        max_exp: u32,
    ) -> HybridPolynomialZonotope {
        let c = (0..n).map(|_| self.scaled(2.0)).collect::<Vec<_>>();
        let g_c = self.mat(n, n_g, 1.5);
        let g_b = self.mat(n, n_b, 1.5);
        let e = self.exponents(n_e, n_g, max_exp);
        let (a_c, a_b, r) = if n_c == 0 {
            (Mat::zeros(0, 0), Mat::zeros(0, n_b), ExpMat::zeros(n_e, 0))
        } else {
            (
                self.mat(n_c, n_q, 1.0),
                self.mat(n_c, n_b, 1.0),
                self.exponents(n_e, n_q, max_exp),
            )
        };
        // Anchor feasibility: choose xi* and set b so the residual at xi*
        // vanishes exactly.
        let xi_c: Vec<f64> = (0..n_e).map(|_| 0.5 * self.unit()).collect();
        let xi_b: Vec<f64> = (0..n_b)
            .map(|_| if self.rng.next_u64() & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let mut b = vec![0.0; n_c];
        for (i, bi) in b.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &xb) in xi_b.iter().enumerate() {
                acc += a_b.get(i, j) * xb;
            }
            for col in 0..n_q {
                let mut mono = 1.0;
                for (k, &xc) in xi_c.iter().enumerate() {
                    let p = r.get(k, col);
                    if p > 0 {
                        mono *= xc.powi(p as i32);
                    }
                }
                acc += a_c.get(i, col) * mono;
            }
            *bi = acc;
        }
        HybridPolynomialZonotope::new(c, g_c, g_b, e, a_c, a_b, b, r)
            .expect("generated instance is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hpz_core::FactorAssignment;

    #[test]
    fn hpz_instances_are_nonempty_and_valid() {
        let mut gen = SetGen::new(7);
        for trial in 0..20 {
            let z = gen.hpz(2, 3, 1, 3, 2, 2, 3);
            assert!(z.validate().is_ok(), "trial {}", trial);
            // The anchored witness guarantees at least one feasible leaf;
            // scan all leaves for a feasible grid/GN point.
            let params = hpz_core::SampleParams::new(5, 200, trial);
            let cloud = hpz_core::sample(&z, &params).unwrap();
            assert!(!cloud.is_empty(), "trial {} produced an empty set", trial);
        }
    }

    #[test]
    fn unconstrained_generators_evaluate() {
        let mut gen = SetGen::new(1);
        let z = gen.hybrid_zonotope(3, 4, 2);
        let a = FactorAssignment::new(vec![0.0; 4], vec![1.0, -1.0]).unwrap();
        assert_eq!(z.evaluate(&a).unwrap().len(), 3);
        let p = gen.polynomial_zonotope(2, 4, 3, 3);
        let a = FactorAssignment::new(vec![0.5; 3], vec![]).unwrap();
        assert_eq!(p.evaluate(&a).unwrap().len(), 2);
    }
}
