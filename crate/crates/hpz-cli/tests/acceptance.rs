//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS/FAIL` line (run with `--nocapture` to see lines for
//! passing criteria too) before asserting.
//!
//! Criterion 3 asserts the documented expected leaf count of six for the
//! second bundled example set. Exhaustive analysis of that fixture finds a
//! seventh nonempty leaf (a single corner point whose constraint residual
//! is exactly zero in f64), so this criterion currently fails and is left
//! failing rather than weakening the assertion.

use std::time::Instant;

use hpz_cli::fixtures;
use hpz_cli::oracle::{self, CloudComparison, CloudMetricsTag, RawSet};
use hpz_cli::random::SetGen;
use hpz_core::{
    approx_member, cartesian_product, generalized_intersection, halfspace_assignment,
    halfspace_intersection, linear_map, minkowski_sum, polyhedron_intersection,
    product_assignment, quadratic_map, sample, sample_leaves, sample_with_assignments, union,
    union_assignment_left, union_assignment_right, FactorAssignment, Halfspace,
    HybridPolynomialZonotope, Mat, MembershipParams, QuadraticAffineMap, SampleParams,
    DEFAULT_LEAF_CAP_LOG2,
};

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {}: {} — {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
}

/// Grid resolution keeping res^n_e around a few hundred points.
fn grid_res_for(n_e: usize) -> usize {
    match n_e {
        0 | 1 => 33,
        2 => 9,
        3 => 7,
        _ => 5,
    }
}

/// Grid-only sampling parameters: max_points equals the full grid size so
/// the library emits exactly the deterministic grid, point-for-point
/// aligned with the oracle's direct enumerator.
fn grid_only_params(n_e: usize, seed: u64) -> SampleParams {
    let res = grid_res_for(n_e);
    SampleParams::new(res, res.pow(n_e.max(1) as u32), seed)
}

fn hausdorff_of(cmp: &CloudComparison) -> f64 {
    match cmp {
        CloudComparison::Metrics(CloudMetricsTag(m)) => m.hausdorff(),
        CloudComparison::EmptyCloud { .. } => f64::INFINITY,
    }
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_special_case_reductions() {
    let t0 = Instant::now();
    let mut gen = SetGen::new(0xC1);
    let mut worst = 0.0f64;
    let mut failures = 0usize;

    // 50 random hybrid zonotopes: library embedding cloud vs direct
    // enumerator over identical factor grids.
    for trial in 0..50 {
        let n = 1 + gen.below(3);
        let n_g = 1 + gen.below(4);
        let n_b = gen.below(4);
        let z = gen.hybrid_zonotope(n, n_g, n_b);
        let params = grid_only_params(z.num_factors(), trial as u64);
        let lib = sample(&z, &params).unwrap();
        let direct = oracle::enumerate_cloud(&RawSet::from_library(&z), params.grid_res);
        let d = hausdorff_of(&oracle::compare_paired(&lib.points, &direct, 1e-9));
        worst = worst.max(d);
        if d > 1e-9 {
            failures += 1;
        }
    }

    // Same for the binary-free polynomial zonotope reduction.
    for trial in 0..50 {
        let n = 1 + gen.below(3);
        let n_g = 1 + gen.below(4);
        let n_e = 1 + gen.below(3);
        let z = gen.polynomial_zonotope(n, n_g, n_e, 3);
        let params = grid_only_params(z.num_factors(), 100 + trial as u64);
        let lib = sample(&z, &params).unwrap();
        let direct = oracle::enumerate_cloud(&RawSet::from_library(&z), params.grid_res);
        let d = hausdorff_of(&oracle::compare_paired(&lib.points, &direct, 1e-9));
        worst = worst.max(d);
        if d > 1e-9 {
            failures += 1;
        }
    }

    let secs = t0.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 60.0;
    report(
        1,
        pass,
        &format!(
            "100 reduction instances, worst Hausdorff {:.2e}, {} over tolerance, {:.1}s",
            worst, failures, secs
        ),
    );
    assert!(pass, "worst {:.3e}, failures {}, {:.1}s", worst, failures, secs);
}

// ---------------------------------------------------------------- criterion 2
// (and the shared trial machinery for criterion 6)

struct OpTrialOutcome {
    cloud_hausdorff: f64,
    witness_err: f64,
    residual_err: f64,
    sizes_ok: bool,
    size_detail: String,
}

fn outcome(
    constructed: &[Vec<f64>],
    truth: &[Vec<f64>],
    witness_err: f64,
    residual_err: f64,
    sizes_ok: bool,
    size_detail: String,
) -> OpTrialOutcome {
    OpTrialOutcome {
        cloud_hausdorff: hausdorff_of(&oracle::compare_paired(constructed, truth, 1e-6)),
        witness_err,
        residual_err,
        sizes_ok,
        size_detail,
    }
}

fn inf_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Hard-feasibility sampling: points kept only when constraint residuals
/// polish to 1e-13, so witness residual checks at 1e-12 are meaningful.
fn tight_params(seed: u64) -> SampleParams {
    let mut p = SampleParams::new(5, 400, seed);
    p.feas_tol = 1e-13;
    p
}

/// Draws instances until tight-tolerance sampling yields at least
/// `min_points` feasible assignments. Random constrained instances can be
/// too stiff for the polisher to certify at 1e-13; those draws are
/// discarded and redrawn, which keeps the trial distribution within the
/// stated bounds while guaranteeing a populated witness cloud.
fn sampled_instance(
    gen: &mut SetGen,
    seed: u64,
    min_points: usize,
    mut mk: impl FnMut(&mut SetGen) -> HybridPolynomialZonotope,
) -> (HybridPolynomialZonotope, Vec<(FactorAssignment, Vec<f64>)>) {
    for attempt in 0..50u64 {
        let z = mk(gen);
        let pairs = sample_with_assignments(&z, &tight_params(seed + attempt)).unwrap();
        if pairs.len() >= min_points {
            return (z, pairs);
        }
    }
    panic!("no sampleable instance after 50 draws (seed {})", seed);
}

fn subsample(
    pairs: &[(FactorAssignment, Vec<f64>)],
    cap: usize,
) -> Vec<&(FactorAssignment, Vec<f64>)> {
    let stride = pairs.len() / cap + 1;
    pairs.iter().step_by(stride).collect()
}

/// Random operand shape within the criterion bounds (exponents <= 3 are
/// applied by the caller; n_c <= 2 via below(3)).
fn operand_shape(gen: &mut SetGen) -> (usize, usize, usize, usize) {
    let n_g = 1 + gen.below(3);
    let n_b = gen.below(2);
    let n_e = 1 + gen.below(3);
    let n_c = gen.below(3);
    (n_g, n_b, n_e, n_c)
}

fn draw_operand(gen: &mut SetGen, n: usize) -> HybridPolynomialZonotope {
    let (g, b, e, c) = operand_shape(gen);
    gen.hpz(n, g, b, e, c, 2, 3)
}

fn sum_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    let n = 1 + gen.below(3);
    let (z1, p1) = sampled_instance(gen, seed, 1, |g| draw_operand(g, n));
    let (z2, p2) = sampled_instance(gen, seed + 500, 1, |g| draw_operand(g, n));
    let s = minkowski_sum(&z1, &z2).unwrap();
    let sizes_ok = s.num_generators() == z1.num_generators() + z2.num_generators()
        && s.num_binary() == z1.num_binary() + z2.num_binary()
        && s.num_factors() == z1.num_factors() + z2.num_factors()
        && s.num_constraints() == z1.num_constraints() + z2.num_constraints()
        && s.num_constraint_generators()
            == z1.num_constraint_generators() + z2.num_constraint_generators();
    let r1 = RawSet::from_library(&z1);
    let r2 = RawSet::from_library(&z2);
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a1, _) in subsample(&p1, 25) {
        for (a2, _) in subsample(&p2, 25) {
            let joint = product_assignment(a1, a2);
            let x1 = r1.eval(&a1.xi_c, &a1.xi_b);
            let x2 = r2.eval(&a2.xi_c, &a2.xi_b);
            let expect: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
            let got = s.evaluate(&joint).unwrap();
            w_err = w_err.max(inf_diff(&got, &expect));
            r_err = r_err.max(inf_norm(&s.constraint_residual(&joint).unwrap()));
            constructed.push(got);
            truth.push(expect);
        }
    }
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "sum blocks must add".into())
}

fn cartesian_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    let n1 = 1 + gen.below(2);
    let n2 = 1 + gen.below(2);
    let (z1, p1) = sampled_instance(gen, seed, 1, |g| draw_operand(g, n1));
    let (z2, p2) = sampled_instance(gen, seed + 500, 1, |g| draw_operand(g, n2));
    let s = cartesian_product(&z1, &z2).unwrap();
    let sizes_ok = s.dim() == z1.dim() + z2.dim()
        && s.num_generators() == z1.num_generators() + z2.num_generators()
        && s.num_binary() == z1.num_binary() + z2.num_binary()
        && s.num_factors() == z1.num_factors() + z2.num_factors()
        && s.num_constraints() == z1.num_constraints() + z2.num_constraints()
        && s.num_constraint_generators()
            == z1.num_constraint_generators() + z2.num_constraint_generators();
    let r1 = RawSet::from_library(&z1);
    let r2 = RawSet::from_library(&z2);
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a1, _) in subsample(&p1, 25) {
        for (a2, _) in subsample(&p2, 25) {
            let joint = product_assignment(a1, a2);
            let mut expect = r1.eval(&a1.xi_c, &a1.xi_b);
            expect.extend(r2.eval(&a2.xi_c, &a2.xi_b));
            let got = s.evaluate(&joint).unwrap();
            w_err = w_err.max(inf_diff(&got, &expect));
            r_err = r_err.max(inf_norm(&s.constraint_residual(&joint).unwrap()));
            constructed.push(got);
            truth.push(expect);
        }
    }
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "product blocks must add".into())
}

/// 2x2 solve for the analytic membership test of zonotope operands.
fn solve2(g: &Mat, rhs: &[f64]) -> Vec<f64> {
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let det = a * d - b * c;
    vec![(d * rhs[0] - b * rhs[1]) / det, (-c * rhs[0] + a * rhs[1]) / det]
}

fn intersection_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    // Z1: planar zonotope; Z2: well-conditioned zonotope around M*c1 so
    // membership of M*p is decidable in closed form (invertible generator).
    let c1: Vec<f64> = vec![gen.scaled(1.0), gen.scaled(1.0)];
    let g1 = Mat::from_rows(&[
        vec![1.0 + 0.2 * gen.unit(), 0.3 * gen.unit()],
        vec![0.3 * gen.unit(), 1.0 + 0.2 * gen.unit()],
    ]);
    let z1 = HybridPolynomialZonotope::from_zonotope(c1.clone(), g1).unwrap();
    let m = Mat::from_rows(&[
        vec![1.0 + 0.3 * gen.unit(), 0.4 * gen.unit()],
        vec![0.4 * gen.unit(), 1.0 + 0.3 * gen.unit()],
    ]);
    let mc1 = m.mul_vec(&c1);
    let c2: Vec<f64> = vec![mc1[0] + 0.2 * gen.unit(), mc1[1] + 0.2 * gen.unit()];
    let g2 = Mat::from_rows(&[
        vec![1.2 + 0.2 * gen.unit(), 0.2 * gen.unit()],
        vec![0.2 * gen.unit(), 1.2 + 0.2 * gen.unit()],
    ]);
    let z2 = HybridPolynomialZonotope::from_zonotope(c2.clone(), g2.clone()).unwrap();
    let s = generalized_intersection(&z1, &z2, &m).unwrap();
    let n = z1.dim();
    let sizes_ok = s.num_generators() == z1.num_generators() + z2.num_factors()
        && s.num_constraints() == z1.num_constraints() + z2.num_constraints() + n
        && s.num_constraint_generators()
            == z1.num_constraint_generators()
                + z2.num_constraint_generators()
                + z1.num_generators()
                + z2.num_generators()
        && s.num_factors() == z1.num_factors() + z2.num_factors()
        && s.num_binary() == z1.num_binary() + z2.num_binary();
    let p1 = sample_with_assignments(&z1, &tight_params(seed)).unwrap();
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a1, p) in &p1 {
        let xi2 = solve2(&g2, &[m.mul_vec(p)[0] - c2[0], m.mul_vec(p)[1] - c2[1]]);
        if inf_norm(&xi2) > 1.0 {
            continue; // M p outside Z2: not a member of the intersection
        }
        let joint = FactorAssignment::new(
            a1.xi_c.iter().chain(xi2.iter()).cloned().collect(),
            vec![],
        )
        .unwrap();
        let got = s.evaluate(&joint).unwrap();
        w_err = w_err.max(inf_diff(&got, p));
        r_err = r_err.max(inf_norm(&s.constraint_residual(&joint).unwrap()));
        constructed.push(got);
        truth.push(p.clone());
    }
    assert!(
        !truth.is_empty(),
        "intersection trial produced an empty oracle cloud; operands were built to overlap"
    );
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "intersection closed-form counts".into())
}

fn halfspace_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    let n = 1 + gen.below(3);
    let (z, pairs) = sampled_instance(gen, seed, 8, |g| {
        let (n_g, _, n_e, n_c) = operand_shape(g);
        g.hpz(n, n_g, 0, n_e, n_c, 2, 3)
    });
    let normal: Vec<f64> = (0..n).map(|_| gen.scaled(1.0)).collect();
    // Median functional value: both sides of the cut are populated.
    let mut vals: Vec<f64> = pairs
        .iter()
        .map(|(_, p)| normal.iter().zip(p).map(|(a, b)| a * b).sum())
        .collect();
    vals.sort_by(f64::total_cmp);
    let offset = vals[vals.len() / 2];
    let h = Halfspace::new(normal.clone(), offset);
    let s = halfspace_intersection(&z, &h, None).unwrap();
    let sizes_ok = s.num_generators() == z.num_generators() + 1
        && s.num_factors() == z.num_factors() + 1
        && s.num_constraints() == z.num_constraints() + 1
        && s.num_constraint_generators()
            == z.num_constraint_generators() + z.num_generators() + 1
        && s.num_binary() == z.num_binary();
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a, p) in &pairs {
        let wit = halfspace_assignment(&z, a, &h, None).unwrap();
        let inside = normal.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() <= offset;
        match wit {
            Some(joint) => {
                assert!(inside, "witness produced for a point outside the halfspace");
                let got = s.evaluate(&joint).unwrap();
                w_err = w_err.max(inf_diff(&got, p));
                r_err = r_err.max(inf_norm(&s.constraint_residual(&joint).unwrap()));
                constructed.push(got);
                truth.push(p.clone());
            }
            None => assert!(!inside, "no witness for a point inside the halfspace"),
        }
    }
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "halfspace adds one of each".into())
}

fn union_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    let n = 1 + gen.below(3);
    let shape = |gen: &mut SetGen| {
        let n_g = 1 + gen.below(2);
        let n_b = gen.below(2);
        let n_e = 1 + gen.below(2);
        let n_c = gen.below(3);
        (n_g, n_b, n_e, n_c)
    };
    let (z1, p1) = sampled_instance(gen, seed, 1, |g| {
        let (n_g, n_b, n_e, n_c) = shape(g);
        g.hpz(n, n_g, n_b, n_e, n_c, 2, 3)
    });
    let (z2, p2) = sampled_instance(gen, seed + 500, 1, |g| {
        let (n_g, n_b, n_e, n_c) = shape(g);
        g.hpz(n, n_g, n_b, n_e, n_c, 2, 3)
    });
    let u = union(&z1, &z2).unwrap();
    // Size counts are stated on the compacted operands.
    let k1 = z1.compact();
    let k2 = z2.compact();
    let n_r = k1.num_factors() + k2.num_factors() + k1.num_binary() + k2.num_binary();
    let sizes_ok = u.num_generators() == k1.num_generators() + k2.num_generators() + 2 * n_r
        && u.num_binary() == k1.num_binary() + k2.num_binary() + 1
        && u.num_factors() == k1.num_factors() + k2.num_factors() + 2 * n_r
        && u.num_constraints() == k1.num_constraints() + k2.num_constraints() + 2 * n_r
        && u.num_constraint_generators()
            == k1.num_constraint_generators()
                + k2.num_constraint_generators()
                + k1.num_factors()
                + k2.num_factors()
                + 2 * n_r;
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a, p) in subsample(&p1, 200) {
        let joint = union_assignment_left(&z1, &z2, a).unwrap();
        let got = u.evaluate(&joint).unwrap();
        w_err = w_err.max(inf_diff(&got, p));
        r_err = r_err.max(inf_norm(&u.constraint_residual(&joint).unwrap()));
        constructed.push(got);
        truth.push(p.clone());
    }
    for (a, p) in subsample(&p2, 200) {
        let joint = union_assignment_right(&z1, &z2, a).unwrap();
        let got = u.evaluate(&joint).unwrap();
        w_err = w_err.max(inf_diff(&got, p));
        r_err = r_err.max(inf_norm(&u.constraint_residual(&joint).unwrap()));
        constructed.push(got);
        truth.push(p.clone());
    }
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "union closed-form counts".into())
}

fn linear_map_trial(gen: &mut SetGen, seed: u64) -> OpTrialOutcome {
    let n = 1 + gen.below(3);
    let rows = 1 + gen.below(3);
    let (z, pairs) = sampled_instance(gen, seed, 1, |g| draw_operand(g, n));
    let m = gen.mat(rows, n, 1.0);
    let s = linear_map(&m, &z).unwrap();
    let sizes_ok = s.dim() == rows
        && s.num_generators() == z.num_generators()
        && s.num_binary() == z.num_binary()
        && s.num_factors() == z.num_factors()
        && s.num_constraints() == z.num_constraints()
        && s.num_constraint_generators() == z.num_constraint_generators();
    let raw = RawSet::from_library(&z);
    let mut constructed = Vec::new();
    let mut truth = Vec::new();
    let mut w_err = 0.0f64;
    let mut r_err = 0.0f64;
    for (a, _) in &pairs {
        let expect = m.mul_vec(&raw.eval(&a.xi_c, &a.xi_b));
        let got = s.evaluate(a).unwrap();
        w_err = w_err.max(inf_diff(&got, &expect));
        r_err = r_err.max(inf_norm(&s.constraint_residual(a).unwrap()));
        constructed.push(got);
        truth.push(expect);
    }
    outcome(&constructed, &truth, w_err, r_err, sizes_ok, "linear map keeps counts".into())
}

const OPS: [(&str, fn(&mut SetGen, u64) -> OpTrialOutcome); 6] = [
    ("linear_map", linear_map_trial),
    ("minkowski_sum", sum_trial),
    ("cartesian_product", cartesian_trial),
    ("generalized_intersection", intersection_trial),
    ("halfspace_intersection", halfspace_trial),
    ("union", union_trial),
];

/// Runs the full randomized suite; returns per-op worst numbers plus a
/// size-accounting verdict shared with criterion 6.
fn run_op_suite() -> (f64, f64, f64, usize, Vec<String>) {
    let mut worst_cloud = 0.0f64;
    let mut worst_witness = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut size_violations = 0usize;
    let mut notes = Vec::new();
    for (op_idx, (name, trial_fn)) in OPS.iter().enumerate() {
        let mut gen = SetGen::new(0xC2 + op_idx as u64);
        for t in 0..50 {
            let out = trial_fn(&mut gen, (op_idx * 1000 + t) as u64);
            worst_cloud = worst_cloud.max(out.cloud_hausdorff);
            worst_witness = worst_witness.max(out.witness_err);
            worst_residual = worst_residual.max(out.residual_err);
            if !out.sizes_ok {
                size_violations += 1;
                notes.push(format!("{} trial {}: {}", name, t, out.size_detail));
            }
        }
    }
    (worst_cloud, worst_witness, worst_residual, size_violations, notes)
}

#[test]
fn criterion_2_operation_identities() {
    let t0 = Instant::now();
    let (cloud, witness, residual, _, _) = run_op_suite();
    let secs = t0.elapsed().as_secs_f64();
    let pass = cloud <= 1e-6 && witness <= 1e-12 && residual <= 1e-12 && secs < 600.0;
    report(
        2,
        pass,
        &format!(
            "6 ops x 50 trials: worst cloud Hausdorff {:.2e}, witness {:.2e}, residual {:.2e}, {:.1}s",
            cloud, witness, residual, secs
        ),
    );
    assert!(pass, "cloud {:.3e} witness {:.3e} residual {:.3e} {:.1}s", cloud, witness, residual, secs);
}

#[test]
fn criterion_6_size_accounting() {
    let (_, _, _, violations, notes) = run_op_suite();
    let pass = violations == 0;
    report(
        6,
        pass,
        &format!("closed-form block counts checked on 300 trials, {} violations", violations),
    );
    assert!(pass, "{:?}", notes);
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_example_fixtures() {
    let t0 = Instant::now();
    let cpz = fixtures::cpz1();
    let h1 = fixtures::hpz1();
    let h2 = fixtures::hpz2();
    let params = SampleParams::new(7, 343, 0);

    // Cloud of the first set with binaries = union of 8 translated copies
    // of the binary-free set's cloud (translates G_b * xi_b, leaf order).
    let base = sample(&cpz, &params).unwrap();
    let lib = sample(&h1, &params).unwrap();
    let gb = h1.binary_generators();
    let mut translated = Vec::with_capacity(8 * base.points.len());
    for leaf in 0..(1usize << h1.num_binary()) {
        let xi_b = h1.binary_assignment(leaf);
        let shift = gb.mul_vec(&xi_b);
        for p in &base.points {
            translated.push(p.iter().zip(&shift).map(|(a, b)| a + b).collect::<Vec<f64>>());
        }
    }
    let d = hausdorff_of(&oracle::compare_paired(&lib.points, &translated, 1e-9));

    // Nonempty-leaf count of the second set under per-leaf sampling.
    let leaf_clouds = sample_leaves(&h2, &params).unwrap();
    let nonempty = leaf_clouds.iter().filter(|c| !c.is_empty()).count();

    let secs = t0.elapsed().as_secs_f64();
    let pass = d <= 1e-9 && nonempty == 6 && secs < 60.0;
    report(
        3,
        pass,
        &format!(
            "translate Hausdorff {:.2e}; nonempty leaves {} (expected 6); {:.1}s",
            d, nonempty, secs
        ),
    );
    assert!(
        pass,
        "translate distance {:.3e}; nonempty leaves {} but expected exactly 6",
        d, nonempty
    );
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_4_piecewise_reproduction() {
    let t0 = Instant::now();
    let file = fixtures::pwna_model_file();
    let loaded = file.to_loaded().unwrap();
    let steps = 5;
    let result = hpz_core::reach(&loaded.model, &loaded.initial, None, steps, DEFAULT_LEAF_CAP_LOG2)
        .unwrap();

    // (a) 1000 simulated trajectories contained at every step.
    let starts = {
        // grid_res^2 > max_points forces a purely random (seeded) start set.
        let p = SampleParams::new(64, 1000, 7);
        sample(&loaded.initial, &p).unwrap().points
    };
    assert_eq!(starts.len(), 1000);
    let modes = oracle::raw_modes(&file.modes);
    let mparams = MembershipParams {
        feas_tol: 1e-6,
        ..MembershipParams::default()
    };
    let mut missed = 0usize;
    for x0 in &starts {
        let (traj, _) = oracle::simulate(&modes, x0, steps).unwrap();
        for (k, state) in traj.iter().enumerate().skip(1) {
            let contained = result.pieces[k - 1]
                .iter()
                .any(|p| approx_member(p, state, &mparams).map_or(false, |w| w.is_some()));
            if !contained {
                missed += 1;
            }
        }
    }

    // (b) guard partition: cutting each step piece with either guard gives
    // clouds on the correct side of x1 = 0, up to the sampling tolerance.
    let sample_params = SampleParams::new(3, 200, 3);
    let mut guard_violations = 0usize;
    for pieces in &result.pieces {
        for piece in pieces {
            for mode in &loaded.model.modes {
                let cut = polyhedron_intersection(piece, &mode.guard.halfspaces).unwrap();
                if hpz_core::leaf_provably_empty(&cut) {
                    continue;
                }
                let cloud = sample(&cut, &sample_params).unwrap();
                for p in &cloud.points {
                    for h in &mode.guard.halfspaces {
                        let v: f64 = h.normal.iter().zip(p).map(|(a, b)| a * b).sum();
                        if v > h.offset + 1e-6 {
                            guard_violations += 1;
                        }
                    }
                }
            }
        }
    }

    let secs = t0.elapsed().as_secs_f64();
    let pass = missed == 0 && guard_violations == 0 && secs <= 60.0;
    report(
        4,
        pass,
        &format!(
            "1000 trajectories x {} steps: {} containment misses, {} guard violations, {:.1}s",
            steps, missed, guard_violations, secs
        ),
    );
    assert!(pass, "missed {}, guard violations {}, {:.1}s", missed, guard_violations, secs);
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_5_quadratic_map_exactness() {
    // f(x) = x^2 on [-1, 1]: image set must be exactly [0, 1].
    let z = HybridPolynomialZonotope::from_zonotope(vec![0.0], Mat::from_rows(&[vec![1.0]]))
        .unwrap();
    let sq = QuadraticAffineMap::new(
        vec![Mat::from_rows(&[vec![1.0]])],
        Mat::zeros(1, 1),
        vec![0.0],
    )
    .unwrap();
    let image = quadratic_map(&sq, &z, DEFAULT_LEAF_CAP_LOG2).unwrap();
    let params = SampleParams::new(2001, 2001, 0);
    let cloud = sample(&image, &params).unwrap();
    let lo = cloud.points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = cloud.points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let bounds = hpz_core::coordinate_bounds(&image).unwrap();
    let interval_ok = lo >= -1e-9 && hi <= 1.0 + 1e-9 && lo <= 1e-9 && hi >= 1.0 - 1e-9;
    let support_ok = (bounds[0].lower - 0.0).abs() <= 1e-9 && (bounds[0].upper - 1.0).abs() <= 1e-9;

    // Affine specialization (all Q = 0) against linear map plus translation.
    let mut gen = SetGen::new(0xC5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = 1 + gen.below(3);
        let n_g = 1 + gen.below(3);
        let n_e = 1 + gen.below(3);
        let z = gen.polynomial_zonotope(n, n_g, n_e, 3);
        // Diagonally dominant A keeps every degree-1 column nonzero, so the
        // compacted quadratic image shares z's factor layout.
        let mut a = gen.mat(n, n, 0.3);
        for i in 0..n {
            a.set(i, i, a.get(i, i) + 1.5);
        }
        let d: Vec<f64> = (0..n).map(|_| gen.scaled(1.0)).collect();
        let via_quad = quadratic_map(
            &QuadraticAffineMap::affine(a.clone(), d.clone()).unwrap(),
            &z,
            DEFAULT_LEAF_CAP_LOG2,
        )
        .unwrap();
        let via_linear = minkowski_sum(
            &linear_map(&a, &z).unwrap(),
            &HybridPolynomialZonotope::singleton(d.clone()),
        )
        .unwrap();
        assert_eq!(via_quad.num_factors(), z.num_factors());
        for trial in 0..20 {
            let xi: Vec<f64> = (0..z.num_factors()).map(|_| gen.unit()).collect();
            let assignment = FactorAssignment::new(xi, vec![]).unwrap();
            let e1 = via_quad.evaluate(&assignment).unwrap();
            let e2 = via_linear.evaluate(&assignment).unwrap();
            let diff = inf_diff(&e1, &e2);
            worst = worst.max(diff);
            let _ = trial;
        }
    }

    let pass = interval_ok && support_ok && worst <= 1e-12;
    report(
        5,
        pass,
        &format!(
            "x^2 cloud in [{:.2e}, {:.6}], support [{:.2e}, {:.6}]; affine agreement worst {:.2e}",
            lo, hi, bounds[0].lower, bounds[0].upper, worst
        ),
    );
    assert!(pass, "interval [{},{}], support [{},{}], worst {:.3e}", lo, hi, bounds[0].lower, bounds[0].upper, worst);
}
