use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hpz_cli::error::CliError;
use hpz_cli::export::{self, LabelledPoint, RunReport, StepReport};
use hpz_cli::model::{parse_model, LoadedModel, ModelFile};
use hpz_cli::{fixtures, oracle, random};
use hpz_core::{
    approx_member, cartesian_product, linear_map, minkowski_sum, sample_leaves,
    sample_with_assignments, union, union_assignment_left, union_assignment_right,
    MembershipParams, SampleParams, DEFAULT_LEAF_CAP_LOG2,
};

#[derive(Parser)]
#[command(
    name = "hpz",
    about = "Hybrid polynomial zonotope reachability toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Svg,
    Both,
}

impl Emit {
    fn csv(self) -> bool {
        matches!(self, Emit::Csv | Emit::Both)
    }
    fn svg(self) -> bool {
        matches!(self, Emit::Svg | Emit::Both)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run forward reachability for a piecewise quadratic-affine model.
    Run {
        /// Model JSON file; omitted = the bundled two-mode example.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Output directory for CSV/SVG/diagnostics files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the horizon from the model file.
        #[arg(long)]
        steps: Option<usize>,
        /// Override the sampling seed from the model file.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the per-axis sampling grid resolution.
        #[arg(long)]
        grid_res: Option<usize>,
        /// Override the sampling point budget per set.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
        /// Simulate K trajectories and verify each step is contained in the
        /// computed reachable set; containment failures exit nonzero.
        #[arg(long, value_name = "K")]
        check_containment: Option<usize>,
    },
    /// Sample and export the bundled example sets.
    Demo {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        grid_res: usize,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
    /// Differentially test the closed-form set operations against the
    /// brute-force oracle on randomized instances.
    OpsCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per operation.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Hausdorff tolerance for a trial to count as agreeing.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn leaf_cap_from_env() -> Result<u32, CliError> {
    match std::env::var("HPZ_LEAF_CAP") {
        Err(_) => Ok(DEFAULT_LEAF_CAP_LOG2),
        Ok(s) => s.trim().parse::<u32>().map_err(|_| CliError::Usage {
            message: format!("HPZ_LEAF_CAP must be a non-negative integer, got {:?}", s),
        }),
    }
}

fn ensure_dir(dir: &PathBuf) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })
}

/// Samples every piece of a step and tags points with the piece index.
fn sample_pieces(
    pieces: &[hpz_core::HybridPolynomialZonotope],
    params: &SampleParams,
) -> Result<Vec<LabelledPoint>, CliError> {
    let mut out = Vec::new();
    for (idx, piece) in pieces.iter().enumerate() {
        let clouds = sample_leaves(piece, params)?;
        for cloud in clouds {
            out.extend(cloud.points.into_iter().map(|x| LabelledPoint { x, leaf: idx }));
        }
    }
    Ok(out)
}

fn run_command(
    model_path: Option<PathBuf>,
    out: PathBuf,
    steps: Option<usize>,
    seed: Option<u64>,
    grid_res: Option<usize>,
    samples: Option<usize>,
    emit: Emit,
    check_containment: Option<usize>,
) -> Result<(), CliError> {
    let cap = leaf_cap_from_env()?;
    let (file, label): (ModelFile, String) = match &model_path {
        Some(p) => (parse_model(p)?, p.display().to_string()),
        None => (fixtures::pwna_model_file(), "bundled".to_string()),
    };
    let loaded: LoadedModel = file.to_loaded()?;
    let horizon = steps.unwrap_or(loaded.horizon);
    let mut sampling = loaded.sampling.clone();
    if let Some(s) = seed {
        sampling.seed = s;
    }
    if let Some(g) = grid_res {
        sampling.grid_res = g;
    }
    if let Some(m) = samples {
        sampling.max_points = m;
    }
    let params = sampling.to_params().with_leaf_cap(cap);
    ensure_dir(&out)?;

    let result = hpz_core::reach(&loaded.model, &loaded.initial, loaded.input.as_ref(), horizon, cap)?;

    let dim = loaded.initial.dim();
    let mut step_clouds: Vec<Vec<LabelledPoint>> = Vec::with_capacity(horizon + 1);
    let initial_cloud: Vec<LabelledPoint> = sample_leaves(&loaded.initial, &params)?
        .into_iter()
        .enumerate()
        .flat_map(|(leaf, cloud)| {
            cloud
                .points
                .into_iter()
                .map(move |x| LabelledPoint { x, leaf })
                .collect::<Vec<_>>()
        })
        .collect();
    step_clouds.push(initial_cloud);
    for pieces in &result.pieces {
        step_clouds.push(sample_pieces(pieces, &params)?);
    }

    if emit.csv() {
        for (k, cloud) in step_clouds.iter().enumerate() {
            export::write_step_csv(&out, k, dim, cloud)?;
        }
    }
    if emit.svg() && dim == 2 {
        let guards: Vec<(Vec<f64>, f64)> = file
            .modes
            .iter()
            .flat_map(|m| {
                m.guard
                    .l
                    .iter()
                    .cloned()
                    .zip(m.guard.rho.iter().cloned())
                    .collect::<Vec<_>>()
            })
            .collect();
        export::write_scatter_svg(&out, "reach.svg", &step_clouds, &guards)?;
    }

    let mut per_step = vec![StepReport {
        step: 0,
        pieces: 1,
        dropped_empty: 0,
        max_generators: loaded.initial.num_generators(),
        max_factors: loaded.initial.num_factors(),
        max_constraints: loaded.initial.num_constraints(),
        millis: None,
        sampled_points: step_clouds[0].len(),
    }];
    for (d, cloud) in result.diagnostics.iter().zip(step_clouds.iter().skip(1)) {
        per_step.push(StepReport {
            step: d.step,
            pieces: d.pieces,
            dropped_empty: d.dropped_empty,
            max_generators: d.max_generators,
            max_factors: d.max_factors,
            max_constraints: d.max_constraints,
            millis: d.millis,
            sampled_points: cloud.len(),
        });
    }
    export::write_diagnostics(
        &out,
        &RunReport {
            model: label,
            steps: horizon,
            seed: sampling.seed,
            grid_res: sampling.grid_res,
            samples: sampling.max_points,
            leaf_cap_log2: cap,
            per_step,
        },
    )?;

    if let Some(k) = check_containment {
        if loaded.input.is_some() {
            return Err(CliError::Usage {
                message: "--check-containment is only supported for models without an input set"
                    .to_string(),
            });
        }
        let modes = oracle::raw_modes(&file.modes);
        let starts: Vec<Vec<f64>> = {
            let mut p = params.clone();
            p.seed = p.seed.wrapping_add(0x9e3779b97f4a7c15);
            let full = hpz_core::sample(&loaded.initial, &p)?;
            full.points.into_iter().take(k).collect()
        };
        let mparams = MembershipParams {
            feas_tol: 1e-6,
            ..MembershipParams::default()
        };
        let mut failures = 0usize;
        let mut total = 0usize;
        for x0 in &starts {
            let (traj, _) = match oracle::simulate(&modes, x0, horizon) {
                Ok(t) => t,
                Err(oracle::SimulationError::NoModeContains { .. }) => {
                    failures += 1;
                    total += 1;
                    continue;
                }
            };
            for (k_idx, state) in traj.iter().enumerate().skip(1) {
                total += 1;
                let contained = result.pieces[k_idx - 1]
                    .iter()
                    .any(|p| approx_member(p, state, &mparams).map_or(false, |w| w.is_some()));
                if !contained {
                    failures += 1;
                }
            }
        }
        eprintln!(
            "containment check: {} of {} step-states contained",
            total - failures,
            total
        );
        if failures > 0 {
            return Err(CliError::ContainmentFailed { failures, total });
        }
    }
    Ok(())
}

fn demo_command(
    out: PathBuf,
    seed: u64,
    grid_res: usize,
    samples: usize,
    emit: Emit,
) -> Result<(), CliError> {
    let cap = leaf_cap_from_env()?;
    ensure_dir(&out)?;
    let params = SampleParams::new(grid_res, samples, seed).with_leaf_cap(cap);
    for name in fixtures::DEMO_SETS {
        let z = fixtures::demo_set(name).expect("bundled name");
        let clouds = sample_leaves(&z, &params)?;
        let labelled: Vec<LabelledPoint> = clouds
            .into_iter()
            .enumerate()
            .flat_map(|(leaf, c)| {
                c.points
                    .into_iter()
                    .map(move |x| LabelledPoint { x, leaf })
                    .collect::<Vec<_>>()
            })
            .collect();
        if emit.csv() {
            let path = out.join(format!("{}.csv", name));
            let mut body = String::from("step");
            for i in 1..=z.dim() {
                body.push_str(&format!(",x{}", i));
            }
            body.push_str(",leaf\n");
            for p in &labelled {
                body.push('0');
                for v in &p.x {
                    body.push_str(&format!(",{}", v));
                }
                body.push_str(&format!(",{}\n", p.leaf));
            }
            std::fs::write(&path, body).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        }
        if emit.svg() && z.dim() == 2 {
            export::write_scatter_svg(&out, &format!("{}.svg", name), &[labelled], &[])?;
        }
        eprintln!("wrote demo set {}", name);
    }
    Ok(())
}

fn ops_check_command(seed: u64, trials: usize, tol: f64) -> Result<(), CliError> {
    let mut gen = random::SetGen::new(seed);
    let params = SampleParams::new(5, 700, seed);
    let mut failures = 0usize;
    let mut total = 0usize;
    let mut report = serde_json::Map::new();

    let mut record = |name: &str, worst: f64, ok: usize, n: usize| {
        let mut entry = serde_json::Map::new();
        entry.insert("trials".into(), serde_json::json!(n));
        entry.insert("agreeing".into(), serde_json::json!(ok));
        entry.insert("max_hausdorff".into(), serde_json::json!(worst));
        report.insert(name.to_string(), serde_json::Value::Object(entry));
    };

    // Linear map: library construction vs pointwise M * p over the same
    // factor assignments.
    let mut worst = 0.0f64;
    let mut ok = 0usize;
    for t in 0..trials {
        let z = gen.polynomial_zonotope(2, 3, 3, 3);
        let m = gen.mat(2, 2, 1.0);
        let mapped = linear_map(&m, &z)?;
        let pairs = sample_with_assignments(&z, &params)?;
        let raw = oracle::RawSet::from_library(&z);
        let mut constructed = Vec::new();
        let mut truth = Vec::new();
        for (a, _) in &pairs {
            constructed.push(mapped.evaluate(a)?);
            truth.push(m.mul_vec(&raw.eval(&a.xi_c, &a.xi_b)));
        }
        match oracle::compare(&constructed, &truth, tol) {
            oracle::CloudComparison::Metrics(oracle::CloudMetricsTag(metrics)) => {
                worst = worst.max(metrics.hausdorff());
                if metrics.hausdorff() <= tol {
                    ok += 1;
                }
            }
            oracle::CloudComparison::EmptyCloud { .. } => {
                return Err(CliError::Usage {
                    message: format!("linear-map trial {} produced an empty cloud", t),
                })
            }
        }
        total += 1;
    }
    failures += trials - ok;
    record("linear_map", worst, ok, trials);

    // Minkowski sum and Cartesian product against pointwise semantics.
    let mut worst_sum = 0.0f64;
    let mut ok_sum = 0usize;
    let mut worst_prod = 0.0f64;
    let mut ok_prod = 0usize;
    for _ in 0..trials {
        let z1 = gen.polynomial_zonotope(2, 3, 2, 3);
        let z2 = gen.hybrid_zonotope(2, 2, 1);
        let sum = minkowski_sum(&z1, &z2)?;
        let prod = cartesian_product(&z1, &z2)?;
        let p1 = sample_with_assignments(&z1, &params)?;
        let p2 = sample_with_assignments(&z2, &params)?;
        let r1 = oracle::RawSet::from_library(&z1);
        let r2 = oracle::RawSet::from_library(&z2);
        let mut c_sum = Vec::new();
        let mut t_sum = Vec::new();
        let mut c_prod = Vec::new();
        let mut t_prod = Vec::new();
        // Cap the pairing so the quadratic-cost cloud comparison stays fast.
        let s1 = p1.len() / 40 + 1;
        let s2 = p2.len() / 40 + 1;
        for (a1, _) in p1.iter().step_by(s1) {
            for (a2, _) in p2.iter().step_by(s2) {
                let joint = hpz_core::product_assignment(a1, a2);
                let x1 = r1.eval(&a1.xi_c, &a1.xi_b);
                let x2 = r2.eval(&a2.xi_c, &a2.xi_b);
                c_sum.push(sum.evaluate(&joint)?);
                t_sum.push(x1.iter().zip(&x2).map(|(a, b)| a + b).collect::<Vec<_>>());
                c_prod.push(prod.evaluate(&joint)?);
                let mut stacked = x1.clone();
                stacked.extend_from_slice(&x2);
                t_prod.push(stacked);
            }
        }
        for (con, tru, worst, ok) in [
            (&c_sum, &t_sum, &mut worst_sum, &mut ok_sum),
            (&c_prod, &t_prod, &mut worst_prod, &mut ok_prod),
        ] {
            if let oracle::CloudComparison::Metrics(oracle::CloudMetricsTag(m)) =
                oracle::compare(con, tru, tol)
            {
                *worst = worst.max(m.hausdorff());
                if m.hausdorff() <= tol {
                    *ok += 1;
                }
            }
        }
        total += 2;
    }
    failures += 2 * trials - ok_sum - ok_prod;
    record("minkowski_sum", worst_sum, ok_sum, trials);
    record("cartesian_product", worst_prod, ok_prod, trials);

    // Union: every operand point must appear in the union via its witness.
    let mut worst_union = 0.0f64;
    let mut ok_union = 0usize;
    for _ in 0..trials {
        let z1 = gen.polynomial_zonotope(2, 2, 2, 2);
        let z2 = gen.hybrid_zonotope(2, 2, 1);
        let u = union(&z1, &z2)?;
        let p1 = sample_with_assignments(&z1, &params)?;
        let p2 = sample_with_assignments(&z2, &params)?;
        let mut constructed = Vec::new();
        let mut truth = Vec::new();
        for (a, x) in p1.iter().step_by(2) {
            let w = union_assignment_left(&z1, &z2, a)?;
            constructed.push(u.evaluate(&w)?);
            truth.push(x.clone());
        }
        for (a, x) in p2.iter().step_by(2) {
            let w = union_assignment_right(&z1, &z2, a)?;
            constructed.push(u.evaluate(&w)?);
            truth.push(x.clone());
        }
        if let oracle::CloudComparison::Metrics(oracle::CloudMetricsTag(m)) =
            oracle::compare(&constructed, &truth, tol)
        {
            worst_union = worst_union.max(m.hausdorff());
            if m.hausdorff() <= tol {
                ok_union += 1;
            }
        }
        total += 1;
    }
    failures += trials - ok_union;
    record("union", worst_union, ok_union, trials);

    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::Value::Object(report)).unwrap()
    );
    if failures > 0 {
        return Err(CliError::ContainmentFailed { failures, total });
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            model,
            out,
            steps,
            seed,
            grid_res,
            samples,
            emit,
            check_containment,
        } => run_command(model, out, steps, seed, grid_res, samples, emit, check_containment),
        Command::Demo {
            out,
            seed,
            grid_res,
            samples,
            emit,
        } => demo_command(out, seed, grid_res, samples, emit),
        Command::OpsCheck { seed, trials, tol } => ops_check_command(seed, trials, tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
