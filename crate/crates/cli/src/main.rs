//! `rsl`: load instances, run verification suites and experiments, emit
//! JSON/CSV reports.
//!
//! Exit codes: 0 success (and all checks passing for `verify`), 1 a
//! verification suite failed, 2 malformed input or unknown command, 3 an
//! enumeration guard was exceeded.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rsl_core::barycenters::{
    choquet_hull_fd, kernel_apply_scalar, kernel_barycenter, measure_kernel, DiscreteMeasure,
    Kernel,
};
use rsl_core::expectation::{
    aumann_identity_check, aumann_integral, aumann_integral_cloud_guarded,
    convexification_experiment, deterministic_case_check, ExpectationResult,
};
use rsl_core::geometry::{
    Body, DirectionSet, Point, PointCloud, TOL_MEMBERSHIP, TOL_SET_EQ,
};
use rsl_core::hulls::{
    atomwise_contains, chd_hull_finite, dec_hull_guarded, extreme_selections,
    operator_identity_suite,
};
use rsl_core::prob::{geometric_space, uniform_space, FiniteProbSpace};
use rsl_core::randomset::{RandomCloud, RandomSet, Selection, DEFAULT_GUARD};
use rsl_core::Error;

const SCHEMA: &str = "rsl/1";

#[derive(Parser)]
#[command(name = "rsl", version, about = "Random-set calculus: expectations, hull identities, experiments")]
struct Cli {
    /// Master seed; per-suite streams are derived from (seed, command, suite).
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Override the direction count of the support-sampling set.
    #[arg(long, global = true)]
    dirs: Option<usize>,
    #[arg(long = "tol-membership", global = true, default_value_t = TOL_MEMBERSHIP)]
    tol_membership: f64,
    #[arg(long = "tol-set-eq", global = true, default_value_t = TOL_SET_EQ)]
    tol_set_eq: f64,
    /// Lattice denominator for convex-hull sampling of selection sets.
    #[arg(long, global = true, default_value_t = 8)]
    grid: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of random instances per suite.
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the expectation (Aumann integral) of an instance file.
    Expect {
        /// Instance JSON: {"schema":"rsl/1","weights":[..],"values":[..]}.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a named verification suite; exit 0 iff every identity passes.
    Verify { suite: Suite },
    /// Run a named experiment and emit a CSV table (n,gap,runtime_ms).
    Experiment { name: ExperimentName },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Hull-operator algebra: conv∘dec, chd/chcd idempotence and chains.
    Hulls,
    /// Discrete-measure barycenters stay in (and fill) the convex hull.
    Barycenter,
    /// Transition-kernel Fubini identity and Dirac round-trips.
    Kernel,
    /// Extreme selections of decomposable hulls.
    Extreme,
    /// conv(∫X dP) = ∫ conv X dP on random finite instances.
    Aumann,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Hulls => "hulls",
            Suite::Barycenter => "barycenter",
            Suite::Kernel => "kernel",
            Suite::Extreme => "extreme",
            Suite::Aumann => "aumann",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    /// Hausdorff gap 1/(2n) of the two-point-cloud integral to its hull.
    Convexification,
    /// Dyadic staircase membership in the chd hull across truncation depths.
    Staircase,
    /// Integral-to-hull gap of a fixed 5-point cloud as atoms refine.
    ShrinkGap,
}

/// FNV-1a over (seed, command, suite), so adding suites never perturbs the
/// random stream of existing ones.
fn derive_seed(seed: u64, command: &str, suite: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in seed
        .to_le_bytes()
        .iter()
        .chain(command.as_bytes())
        .chain(suite.as_bytes())
    {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn guard_limit() -> Result<u128, String> {
    match std::env::var("RSL_GUARD_MAX") {
        Ok(v) => v
            .parse::<u128>()
            .map_err(|_| format!("RSL_GUARD_MAX={v} is not a nonnegative integer")),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let guard = match guard_limit() {
        Ok(g) => g,
        Err(msg) => {
            eprintln!("rsl: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Expect { instance } => cmd_expect(&cli, instance, guard),
        Command::Verify { suite } => cmd_verify(&cli, *suite, guard),
        Command::Experiment { name } => cmd_experiment(&cli, *name),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Malformed(msg)) => {
            eprintln!("rsl: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("rsl: {msg}");
            ExitCode::from(3)
        }
    }
}

enum Failure {
    Malformed(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationTooLarge { .. } => Failure::Guard(e.to_string()),
            other => Failure::Malformed(other.to_string()),
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn direction_set(cli: &Cli, dim: usize) -> DirectionSet {
    match cli.dirs {
        Some(count) => DirectionSet::with_count(dim, count, cli.seed),
        None => DirectionSet::standard(dim, cli.seed),
    }
}

// ---------------------------------------------------------------- expect --

#[derive(Serialize, Deserialize)]
struct Instance {
    schema: String,
    weights: Vec<f64>,
    values: Vec<InstanceValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum InstanceValue {
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { vertices: Vec<Vec<f64>> },
    Cloud { points: Vec<Vec<f64>> },
}

#[derive(Serialize)]
struct ExpectReport {
    schema: String,
    command: String,
    seed: u64,
    dirs: usize,
    result: ExpectationResult,
}

fn cmd_expect(cli: &Cli, instance: &PathBuf, guard: u128) -> Result<ExitCode, Failure> {
    let raw = std::fs::read_to_string(instance)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", instance.display())))?;
    let parsed: Instance = serde_json::from_str(&raw)
        .map_err(|e| Failure::Malformed(format!("malformed instance JSON: {e}")))?;
    if parsed.schema != SCHEMA {
        return Err(Failure::Malformed(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            parsed.schema
        )));
    }
    let space = FiniteProbSpace::new(parsed.weights)?;

    let all_clouds = parsed
        .values
        .iter()
        .all(|v| matches!(v, InstanceValue::Cloud { .. }));
    let any_cloud = parsed
        .values
        .iter()
        .any(|v| matches!(v, InstanceValue::Cloud { .. }));
    if any_cloud && !all_clouds {
        return Err(Failure::Malformed(
            "instance mixes cloud values with convex values; use one kind".into(),
        ));
    }

    let dim = match parsed.values.first() {
        Some(InstanceValue::Ball { center, .. }) => center.len(),
        Some(InstanceValue::Polytope { vertices }) => {
            vertices.first().map(|v| v.len()).unwrap_or(0)
        }
        Some(InstanceValue::Cloud { points }) => points.first().map(|p| p.len()).unwrap_or(0),
        None => return Err(Failure::Malformed("instance has no values".into())),
    };
    let dirs = direction_set(cli, dim);

    let result = if all_clouds {
        let values: Vec<PointCloud> = parsed
            .values
            .into_iter()
            .map(|v| match v {
                InstanceValue::Cloud { points } => {
                    PointCloud::new(points.into_iter().map(Point).collect())
                }
                _ => unreachable!("checked above"),
            })
            .collect::<rsl_core::Result<_>>()?;
        let x = RandomCloud::new(space, values)?;
        aumann_integral_cloud_guarded(&x, &dirs, guard)?
    } else {
        let values: Vec<Body> = parsed
            .values
            .into_iter()
            .map(|v| match v {
                InstanceValue::Ball { center, radius } => Body::ball(Point(center), radius),
                InstanceValue::Polytope { vertices } => {
                    Body::from_vertices(vertices.into_iter().map(Point).collect())
                }
                InstanceValue::Cloud { .. } => unreachable!("checked above"),
            })
            .collect::<rsl_core::Result<_>>()?;
        let x = RandomSet::new(space, values)?;
        aumann_integral(&x, &dirs)?
    };

    let report = ExpectReport {
        schema: SCHEMA.into(),
        command: "expect".into(),
        seed: cli.seed,
        dirs: dirs.len(),
        result,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_output(&cli.out, &json)?;

    // Support-value CSV next to the JSON report when writing to a file.
    if let Some(path) = &cli.out {
        let mut csv = String::from("direction_index,support\n");
        for (i, u) in dirs.iter().enumerate() {
            let h = report.result.convexified.support(u)?;
            csv.push_str(&format!("{i},{h:.17e}\n"));
        }
        let csv_path = path.with_extension("support.csv");
        std::fs::write(&csv_path, csv)
            .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", csv_path.display())))?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- verify --

#[derive(Serialize)]
struct CheckRow {
    identity: String,
    pass: bool,
    max_dev: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: String,
    command: String,
    suite: String,
    seed: u64,
    trials: usize,
    checks: Vec<CheckRow>,
    all_pass: bool,
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    Point((0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect())
}

fn random_space(rng: &mut ChaCha8Rng, max_atoms: usize) -> FiniteProbSpace {
    let n = rng.gen_range(1..=max_atoms);
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    FiniteProbSpace::new(weights).expect("normalized weights")
}

fn random_selections(
    rng: &mut ChaCha8Rng,
    space: &FiniteProbSpace,
    dim: usize,
    count: usize,
) -> Vec<Selection> {
    (0..count)
        .map(|_| {
            Selection::new(
                space.clone(),
                (0..space.n_atoms()).map(|_| random_point(rng, dim)).collect(),
            )
            .expect("matching dims")
        })
        .collect()
}

fn random_random_cloud(rng: &mut ChaCha8Rng, dim: usize) -> RandomCloud {
    let space = random_space(rng, 3);
    let values = (0..space.n_atoms())
        .map(|_| {
            let m = rng.gen_range(1..=4);
            PointCloud::new((0..m).map(|_| random_point(rng, dim)).collect())
                .expect("nonempty cloud")
        })
        .collect();
    RandomCloud::new(space, values).expect("matching dims")
}

fn cmd_verify(cli: &Cli, suite: Suite, guard: u128) -> Result<ExitCode, Failure> {
    let seed = derive_seed(cli.seed, "verify", suite.name());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Hulls => verify_hulls(cli, &mut rng)?,
        Suite::Barycenter => verify_barycenter(cli, &mut rng, seed)?,
        Suite::Kernel => verify_kernel(cli, &mut rng)?,
        Suite::Extreme => verify_extreme(cli, &mut rng, guard)?,
        Suite::Aumann => verify_aumann(cli, &mut rng)?,
    };
    let all_pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        schema: SCHEMA.into(),
        command: "verify".into(),
        suite: suite.name().into(),
        seed: cli.seed,
        trials: cli.trials,
        checks,
        all_pass,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_output(&cli.out, &json)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verify_hulls(cli: &Cli, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>, Failure> {
    let dirs1 = direction_set(cli, 1);
    let dirs2 = direction_set(cli, 2);
    let mut rows: Vec<CheckRow> = Vec::new();
    for i in 0..cli.trials {
        let dim = 1 + i % 2;
        let space = random_space(rng, 3);
        let m = rng.gen_range(2..=4);
        let members = random_selections(rng, &space, dim, m);
        let dirs = if dim == 1 { &dirs1 } else { &dirs2 };
        let report = operator_identity_suite(&members, cli.grid, dirs)?;
        for (j, check) in report.checks.into_iter().enumerate() {
            // The lattice-grid label can differ per instance; aggregate by
            // position with the first instance's label.
            match rows.get_mut(j) {
                Some(row) => {
                    row.max_dev = row.max_dev.max(check.max_dev);
                    row.pass &= check.max_dev <= cli.tol_set_eq;
                }
                None => rows.push(CheckRow {
                    identity: check.identity,
                    pass: check.max_dev <= cli.tol_set_eq,
                    max_dev: check.max_dev,
                }),
            }
        }
    }
    Ok(rows)
}

fn verify_barycenter(
    cli: &Cli,
    rng: &mut ChaCha8Rng,
    seed: u64,
) -> Result<Vec<CheckRow>, Failure> {
    let mut max_violation: f64 = 0.0;
    let mut all_realized = true;
    for i in 0..cli.trials {
        let dim = 1 + i % 3;
        let m = rng.gen_range(1..=6);
        let cloud = PointCloud::new((0..m).map(|_| random_point(rng, dim)).collect())?;
        let report = choquet_hull_fd(&cloud, 200, seed.wrapping_add(i as u64))?;
        max_violation = max_violation.max(report.max_violation);
        all_realized &= report.all_lattice_realized;
    }
    Ok(vec![
        CheckRow {
            identity: "discrete-measure barycenters lie in conv(cloud)".into(),
            pass: max_violation <= cli.tol_membership,
            max_dev: max_violation,
        },
        CheckRow {
            identity: "every hull lattice point is realized as a barycenter".into(),
            pass: all_realized,
            max_dev: if all_realized { 0.0 } else { 1.0 },
        },
    ])
}

fn verify_kernel(cli: &Cli, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>, Failure> {
    let mut max_dev: f64 = 0.0;
    for _ in 0..cli.trials {
        let space = random_space(rng, 4);
        let n = space.n_atoms();
        let rows: Vec<DiscreteMeasure<Point>> = (0..n)
            .map(|_| {
                let m = rng.gen_range(1..=3);
                let mut ws: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
                let t: f64 = ws.iter().sum();
                for w in ws.iter_mut() {
                    *w /= t;
                }
                DiscreteMeasure::new(
                    ws.into_iter().map(|w| (w, random_point(rng, 2))).collect(),
                )
                .expect("normalized weights")
            })
            .collect();
        let k = Kernel::new(space.clone(), rows)?;
        let a = rng.gen_range(-1.0..1.0);
        let b = rng.gen_range(-1.0..1.0);
        let f = |x: &Point| a * x.0[0] + b * x.0[1];
        let kf = kernel_apply_scalar(&k, f);
        let v_kf: f64 = space.weights.iter().zip(&kf).map(|(w, y)| w * y).sum();
        let vk = measure_kernel(&space, &k)?;
        let vk_f: f64 = vk.support.iter().map(|(w, x)| w * f(x)).sum();
        max_dev = max_dev.max((v_kf - vk_f).abs());
    }

    let mut roundtrip = true;
    for _ in 0..cli.trials {
        let space = random_space(rng, 4);
        let sel = random_selections(rng, &space, 2, 1).pop().expect("one selection");
        let k = Kernel::dirac_from_selection(&sel);
        roundtrip &= k.is_dirac() && kernel_barycenter(&k).approx_eq(&sel, 0.0);
    }
    Ok(vec![
        CheckRow {
            identity: "fubini: v(Kf) = (vK)f for linear f".into(),
            pass: max_dev <= 1e-12,
            max_dev,
        },
        CheckRow {
            identity: "dirac kernel round-trip is exact".into(),
            pass: roundtrip,
            max_dev: if roundtrip { 0.0 } else { 1.0 },
        },
    ])
}

fn verify_extreme(cli: &Cli, rng: &mut ChaCha8Rng, guard: u128) -> Result<Vec<CheckRow>, Failure> {
    // Built-in weighted-triangle model: two atoms of weight ½ with
    // f1 = (0,5), f2 = (1,1), f3 = (−1,−1); f1 is extreme among the three
    // generators but not in their decomposable hull.
    let space = uniform_space(2)?;
    let f1 = Selection::new(space.clone(), vec![Point(vec![0.0]), Point(vec![5.0])])?;
    let f2 = Selection::new(space.clone(), vec![Point(vec![1.0]), Point(vec![1.0])])?;
    let f3 = Selection::new(space.clone(), vec![Point(vec![-1.0]), Point(vec![-1.0])])?;
    let members = vec![f1.clone(), f2, f3];
    let ext_a = extreme_selections(&members)?;
    let f1_in_ext_a = ext_a.iter().any(|s| s.approx_eq(&f1, 1e-12));
    let dec = dec_hull_guarded(&members, guard)?;
    let ext_dec = extreme_selections(&dec)?;
    let f1_dropped = !ext_dec.iter().any(|s| s.approx_eq(&f1, 1e-12));

    // ε(dec A) ⊆ dec ε(A) on random instances, as sup-norm deviation.
    let mut max_dev: f64 = 0.0;
    for _ in 0..cli.trials {
        let space = random_space(rng, 3);
        let members = random_selections(rng, &space, 1, 3);
        let dec = dec_hull_guarded(&members, guard)?;
        let ext_dec = extreme_selections(&dec)?;
        let dec_of_ext = dec_hull_guarded(&extreme_selections(&members)?, guard)?;
        for s in &ext_dec {
            let nearest = dec_of_ext
                .iter()
                .map(|t| {
                    s.flatten()
                        .coords()
                        .iter()
                        .zip(t.flatten().coords())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            max_dev = max_dev.max(nearest);
        }
    }
    Ok(vec![
        CheckRow {
            identity: "f1 is extreme among the generators".into(),
            pass: f1_in_ext_a,
            max_dev: if f1_in_ext_a { 0.0 } else { 1.0 },
        },
        CheckRow {
            identity: "f1 is not extreme in the decomposable hull".into(),
            pass: f1_dropped,
            max_dev: if f1_dropped { 0.0 } else { 1.0 },
        },
        CheckRow {
            identity: "ext(dec A) within dec(ext A)".into(),
            pass: max_dev <= cli.tol_set_eq,
            max_dev,
        },
    ])
}

fn verify_aumann(cli: &Cli, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>, Failure> {
    let dirs1 = direction_set(cli, 1);
    let dirs2 = direction_set(cli, 2);
    let mut max_gap: f64 = 0.0;
    for i in 0..cli.trials {
        let dim = 1 + i % 2;
        let x = random_random_cloud(rng, dim);
        let dirs = if dim == 1 { &dirs1 } else { &dirs2 };
        let report = aumann_identity_check(&x, dirs)?;
        max_gap = max_gap.max(report.gap);
    }
    Ok(vec![CheckRow {
        identity: "conv of integral equals integral of conv".into(),
        pass: max_gap <= cli.tol_set_eq,
        max_dev: max_gap,
    }])
}

// ------------------------------------------------------------ experiment --

fn cmd_experiment(cli: &Cli, name: ExperimentName) -> Result<ExitCode, Failure> {
    let mut csv = String::from("n,gap,runtime_ms\n");
    match name {
        ExperimentName::Convexification => {
            for &n in &[1usize, 2, 5, 10, 20, 50, 100, 200, 500, 1000] {
                let t = Instant::now();
                let row = convexification_experiment(&[n])?
                    .pop()
                    .expect("one row per n");
                csv.push_str(&format!(
                    "{},{:.17e},{}\n",
                    row.n,
                    row.gap,
                    t.elapsed().as_millis()
                ));
            }
        }
        ExperimentName::Staircase => {
            // Dyadic constants 2⁻ᵏ as generators; the staircase selection
            // takes value 2⁻ᵏ on atom k. gap = atom-wise distance to the chd
            // hull, which must be exactly zero at every depth.
            for n in 2..=12usize {
                let t = Instant::now();
                let space = geometric_space(n)?;
                let generators: Vec<Selection> = (1..=n)
                    .map(|k| {
                        Selection::constant(space.clone(), Point(vec![0.5f64.powi(k as i32)]))
                    })
                    .collect();
                let chd = chd_hull_finite(&generators)?;
                let staircase = Selection::new(
                    space.clone(),
                    (1..=n).map(|k| Point(vec![0.5f64.powi(k as i32)])).collect(),
                )?;
                let gap = if atomwise_contains(&chd, &staircase, 0.0)? {
                    0.0
                } else {
                    f64::NAN
                };
                csv.push_str(&format!("{n},{gap:.17e},{}\n", t.elapsed().as_millis()));
            }
        }
        ExperimentName::ShrinkGap => {
            let cloud = PointCloud::new(vec![
                Point(vec![0.0, 0.0]),
                Point(vec![2.0, 0.0]),
                Point(vec![2.0, 2.0]),
                Point(vec![0.0, 2.0]),
                Point(vec![1.0, 3.0]),
            ])?;
            let dirs = direction_set(cli, 2);
            // 5 cloud points over n atoms is 5ⁿ selections; n = 8 is the
            // largest depth inside the default enumeration guard.
            for &n in &[1usize, 2, 4, 8] {
                let t = Instant::now();
                let row = deterministic_case_check(&cloud, &[n], &dirs)?
                    .pop()
                    .expect("one row per n");
                csv.push_str(&format!(
                    "{},{:.17e},{}\n",
                    row.n,
                    row.nonconv_gap,
                    t.elapsed().as_millis()
                ));
            }
        }
    }
    write_output(&cli.out, csv.trim_end())?;
    Ok(ExitCode::SUCCESS)
}
