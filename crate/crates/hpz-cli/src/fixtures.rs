//! Built-in fixtures: the four running demo sets (a constrained polynomial
//! zonotope, a hybrid zonotope sharing its generators, and two hybrid
//! polynomial zonotopes layered on top) and the bundled two-mode piecewise
//! quadratic benchmark model.

use hpz_core::{ExpMat, HybridPolynomialZonotope, Mat};

use crate::model::{GuardSpec, ModeSpec, ModelFile, SamplingSpec, SetSpec};

fn g1() -> Mat {
    Mat::from_rows(&[vec![1.0, 0.0, 1.5, 0.5], vec![0.0, 1.0, 2.0, -2.0]])
}

fn e1() -> ExpMat {
    ExpMat::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 2], vec![0, 0, 1, 1]])
}

fn a1() -> Mat {
    Mat::from_rows(&[vec![1.0, 2.0, 0.5]])
}

fn r1() -> ExpMat {
    ExpMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 3]])
}

fn gb1() -> Mat {
    Mat::from_rows(&[vec![3.0, 1.0, 4.0], vec![1.0, 3.0, -4.0]])
}

/// 2-D constrained polynomial zonotope: four generators, one cubic
/// equality constraint.
pub fn cpz1() -> HybridPolynomialZonotope {
    HybridPolynomialZonotope::from_cpz(vec![0.0, 0.0], g1(), e1(), a1(), vec![1.0], r1()).unwrap()
}

/// Hybrid zonotope with the same continuous generators plus three binary
/// generators, no constraints: eight translated parallelotopes.
pub fn hz() -> HybridPolynomialZonotope {
    HybridPolynomialZonotope::from_hybrid_zonotope(
        vec![0.0, 0.0],
        g1(),
        gb1(),
        Mat::zeros(0, 4),
        Mat::zeros(0, 3),
        vec![],
    )
    .unwrap()
}

/// [`cpz1`] plus the three binary generators: eight translated copies of
/// the constrained polynomial zonotope.
pub fn hpz1() -> HybridPolynomialZonotope {
    HybridPolynomialZonotope::new(
        vec![0.0, 0.0],
        g1(),
        gb1(),
        e1(),
        a1(),
        Mat::zeros(1, 3),
        vec![1.0],
        r1(),
    )
    .unwrap()
}

/// [`hpz1`] with the binary factors additionally entering the equality
/// constraint: the eight pieces differ and some become infeasible.
pub fn hpz2() -> HybridPolynomialZonotope {
    HybridPolynomialZonotope::new(
        vec![0.0, 0.0],
        g1(),
        gb1(),
        e1(),
        a1(),
        Mat::from_rows(&[vec![1.5, 1.5, 1.5]]),
        vec![1.0],
        r1(),
    )
    .unwrap()
}

/// Names of the demo fixtures, in output order.
pub const DEMO_SETS: [&str; 4] = ["cpz1", "hz", "hpz1", "hpz2"];

pub fn demo_set(name: &str) -> Option<HybridPolynomialZonotope> {
    match name {
        "cpz1" => Some(cpz1()),
        "hz" => Some(hz()),
        "hpz1" => Some(hpz1()),
        "hpz2" => Some(hpz2()),
        _ => None,
    }
}

/// The bundled benchmark: a planar two-mode piecewise quadratic system.
/// Mode 1 applies on x1 <= 0, mode 2 on x1 >= 0 (shared boundary is
/// double-covered, which is sound). Both modes share the affine offset.
pub fn pwna_model_file() -> ModelFile {
    let quad1 = vec![vec![0.017, -0.0028], vec![0.0, 0.017]];
    let quad2 = vec![vec![-0.1, 0.0], vec![0.0, -0.1]];
    ModelFile {
        state_dim: 2,
        horizon: 5,
        modes: vec![
            ModeSpec {
                guard: GuardSpec {
                    l: vec![vec![1.0, 0.0]],
                    rho: vec![0.0],
                },
                quadratic: vec![quad1.clone(), quad1],
                linear: vec![vec![0.75, 0.25], vec![-0.25, 0.75]],
                offset: vec![0.25, -0.5],
            },
            ModeSpec {
                guard: GuardSpec {
                    l: vec![vec![-1.0, 0.0]],
                    rho: vec![0.0],
                },
                quadratic: vec![quad2.clone(), quad2],
                linear: vec![vec![0.75, -0.25], vec![0.25, 0.75]],
                offset: vec![0.25, -0.5],
            },
        ],
        initial_set: SetSpec {
            center: vec![-0.201, 0.96],
            generators: vec![vec![0.2, 0.0], vec![0.0, 0.2]],
            binary_generators: None,
            exponents: None,
            constraints: None,
        },
        input_set: None,
        sampling: Some(SamplingSpec::default()),
    }
}
