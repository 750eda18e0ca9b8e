//! Aumann integrals and selection expectations over finite probability
//! spaces, the Aumann identity, and the convexification-rate experiment.
//!
//! On a finite space the Aumann integral of a convex-valued random set is
//! the weighted Minkowski sum Σ wᵢ ⊙ X(ωᵢ), which is closed and equals the
//! selection expectation outright. Closure only matters in infinite models;
//! results carry a note saying so.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{
    hausdorff_cloud_interval_1d, Body, DirectionSet, Point, PointCloud,
    TOL_SET_EQ,
};
use crate::randomset::{enumerate_selections_guarded, RandomCloud, RandomSet, DEFAULT_GUARD};

/// The computed integral: convex bodies from the Minkowski route, finite
/// point sets from the selection-enumeration route.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SetValue {
    Body(Body),
    Cloud(PointCloud),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub aumann: SetValue,
    pub convexified: Body,
    pub hausdorff_gap: f64,
    pub method: String,
    pub closure_note: String,
}

const CLOSURE_NOTE: &str =
    "finite Minkowski sums of compact sets are compact; the closure in E X = cl ∫X dP is the identity here";

/// ∫ X dP = Σ wᵢ ⊙ X(ωᵢ) for a convex-valued random set. Closed on finite
/// spaces, hence equal to the selection expectation E X.
pub fn aumann_integral(x: &RandomSet, dirs: &DirectionSet) -> Result<ExpectationResult> {
    let mut acc: Option<Body> = None;
    for (w, body) in x.space.weights.iter().zip(&x.values) {
        let scaled = body.scale(*w)?;
        acc = Some(match acc {
            None => scaled,
            Some(prev) => prev.minkowski_sum(&scaled)?,
        });
    }
    let body = acc.expect("random set has at least one atom").reduce();
    let gap = body.support_gap(&body, dirs)?;
    Ok(ExpectationResult {
        convexified: body.clone(),
        aumann: SetValue::Body(body),
        hausdorff_gap: gap,
        method: "minkowski".into(),
        closure_note: CLOSURE_NOTE.into(),
    })
}

/// ∫ X dP for a finite-valued random set via exhaustive selections:
/// { Σᵢ wᵢ s(ωᵢ) : s a selection }, duplicates merged. Cross-checked against
/// the discrete Minkowski sum of the scaled clouds, which must match exactly.
pub fn aumann_integral_cloud(x: &RandomCloud, dirs: &DirectionSet) -> Result<ExpectationResult> {
    aumann_integral_cloud_guarded(x, dirs, DEFAULT_GUARD)
}

pub fn aumann_integral_cloud_guarded(
    x: &RandomCloud,
    dirs: &DirectionSet,
    guard: u128,
) -> Result<ExpectationResult> {
    let selections = enumerate_selections_guarded(x, guard)?;
    let means: Vec<Point> = selections.iter().map(|s| s.expectation()).collect();
    let cloud = PointCloud::new(means)?.dedup_sorted(1e-12);

    // Independent route: iterated pairwise sums of the scaled clouds.
    let minkowski = discrete_minkowski(x)?;
    debug_assert_eq!(cloud.len(), minkowski.len());
    debug_assert!(cloud.hausdorff(&minkowski)? <= 1e-12);

    let convexified = cloud.to_body().reduce();
    let gap = cloud_to_hull_gap(&cloud, &convexified, dirs)?;
    Ok(ExpectationResult {
        aumann: SetValue::Cloud(cloud),
        convexified,
        hausdorff_gap: gap,
        method: "selection-enum".into(),
        closure_note: CLOSURE_NOTE.into(),
    })
}

/// Σ wᵢ ⊙ X(ωᵢ) on finite sets: exhaustive pairwise sums, merged.
fn discrete_minkowski(x: &RandomCloud) -> Result<PointCloud> {
    let mut acc: Vec<Point> = vec![Point::zero(x.dim())];
    for (w, cloud) in x.space.weights.iter().zip(&x.values) {
        let mut next = Vec::with_capacity(acc.len() * cloud.len());
        for a in &acc {
            for p in &cloud.points {
                next.push(a.add(&p.scale(*w)));
            }
        }
        acc = PointCloud::new(next)?.dedup_sorted(1e-12).points;
    }
    PointCloud::new(acc)
}

/// Hausdorff gap between a finite set and its convex hull. Since the cloud
/// sits inside the hull, only the directed hull → cloud part is nonzero;
/// in R¹ it is computed exactly, above that via hull lattice samples.
fn cloud_to_hull_gap(cloud: &PointCloud, hull: &Body, _dirs: &DirectionSet) -> Result<f64> {
    if cloud.dim() == 1 {
        let lo = -hull.support(&Point(vec![-1.0]))?;
        let hi = hull.support(&Point(vec![1.0]))?;
        return hausdorff_cloud_interval_1d(cloud, lo, hi);
    }
    let samples = crate::barycenters::simplex_lattice_points(
        &PointCloud::new(hull.vertices.clone())?,
        sample_grid(hull.vertices.len()),
    );
    let mut gap: f64 = 0.0;
    for s in &samples {
        gap = gap.max(
            cloud
                .points
                .iter()
                .map(|p| p.dist(s))
                .fold(f64::INFINITY, f64::min),
        );
    }
    Ok(gap)
}

fn sample_grid(n_vertices: usize) -> usize {
    // Keep the lattice under ~100k points.
    for g in (1..=8).rev() {
        let mut count: u128 = 1;
        for i in 0..g {
            count = count.saturating_mul((n_vertices + i) as u128) / (i as u128 + 1);
        }
        if count <= 100_000 {
            return g;
        }
    }
    1
}

/// Report from the Aumann identity conv(∫X dP) = ∫ conv X dP.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AumannIdentityReport {
    pub gap: f64,
    pub pass: bool,
}

pub fn aumann_identity_check(x: &RandomCloud, dirs: &DirectionSet) -> Result<AumannIdentityReport> {
    let cloud_side = aumann_integral_cloud(x, dirs)?;
    let convex_side = aumann_integral(&x.convexify(), dirs)?;
    let gap = cloud_side
        .convexified
        .support_gap(&convex_side.convexified, dirs)?;
    Ok(AumannIdentityReport {
        gap,
        pass: gap <= TOL_SET_EQ,
    })
}

/// One row of the convexification-rate experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexificationRow {
    pub n: usize,
    pub gap: f64,
}

/// For X ≡ {0,1} ⊂ R¹ on the uniform n-atom space, the Aumann integral is
/// the grid {k/n} and ∫ conv X dP = [0,1]; the Hausdorff gap is exactly
/// 1/(2n). The grid is built in closed form (binomial enumeration), which is
/// what exhaustive selection enumeration collapses to after merging.
pub fn convexification_experiment(n_list: &[usize]) -> Result<Vec<ConvexificationRow>> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let grid =
            PointCloud::new((0..=n).map(|k| Point(vec![k as f64 / n as f64])).collect())?;
        let gap = hausdorff_cloud_interval_1d(&grid, 0.0, 1.0)?;
        rows.push(ConvexificationRow { n, gap });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeterministicCaseRow {
    pub n: usize,
    /// Support gap between conv(∫X dP) and conv(value): the identity
    /// E X = cconv X, must vanish for every n.
    pub conv_gap: f64,
    /// Directed gap from conv(value) to the raw (un-convexified) integral.
    pub nonconv_gap: f64,
}

/// Deterministic multifunction X ≡ cloud on uniform_space(n): the expectation
/// equals cconv(cloud) for every n, while the raw integral fills the hull as
/// n grows (the finite Shapley–Folkman effect). The sample lattice used for
/// the nonconvex gap is fixed across n so the series is comparable.
pub fn deterministic_case_check(
    cloud: &PointCloud,
    n_list: &[usize],
    dirs: &DirectionSet,
) -> Result<Vec<DeterministicCaseRow>> {
    let hull = cloud.to_body().reduce();
    let samples = if cloud.dim() == 1 {
        Vec::new()
    } else {
        crate::barycenters::simplex_lattice_points(cloud, 8)
    };
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let space = crate::prob::uniform_space(n)?;
        let x = RandomCloud::constant(space, cloud.clone());
        let result = aumann_integral_cloud(&x, dirs)?;
        let conv_gap = result.convexified.support_gap(&hull, dirs)?;
        let integral = match &result.aumann {
            SetValue::Cloud(c) => c.clone(),
            SetValue::Body(_) => unreachable!("cloud route returns a cloud"),
        };
        let nonconv_gap = if cloud.dim() == 1 {
            let lo = -hull.support(&Point(vec![-1.0]))?;
            let hi = hull.support(&Point(vec![1.0]))?;
            hausdorff_cloud_interval_1d(&integral, lo, hi)?
        } else {
            samples
                .iter()
                .map(|s| {
                    integral
                        .points
                        .iter()
                        .map(|p| p.dist(s))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        rows.push(DeterministicCaseRow {
            n,
            conv_gap,
            nonconv_gap,
        });
    }
    Ok(rows)
}

/// E X = cl ∫ X dP. On finite spaces the closure is the identity, so this is
/// the Aumann integral with the closure annotation attached.
pub fn selection_expectation_set(x: &RandomSet, dirs: &DirectionSet) -> Result<ExpectationResult> {
    aumann_integral(x, dirs)
}

pub fn selection_expectation_cloud(
    x: &RandomCloud,
    dirs: &DirectionSet,
) -> Result<ExpectationResult> {
    aumann_integral_cloud(x, dirs)
}
