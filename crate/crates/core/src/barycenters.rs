//! Barycenters of discrete measures, Choquet combinations in R^d,
//! transition kernels, and the kernel calculus (Fubini, pushforwards).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{axpy, distance_to_hull, Point, PointCloud, TOL_MEMBERSHIP};
use crate::hulls::{atomwise_contains, AtomwiseSet};
use crate::prob::FiniteProbSpace;
use crate::randomset::Selection;

/// A finitely supported probability measure over values of type T.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteMeasure<T> {
    pub support: Vec<(f64, T)>,
}

impl<T> DiscreteMeasure<T> {
    pub fn new(support: Vec<(f64, T)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyInput("a measure needs support"));
        }
        if support.iter().any(|(w, _)| *w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "measure weights must be strictly positive and finite".into(),
            ));
        }
        let total: f64 = support.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotAProbability(total));
        }
        Ok(DiscreteMeasure { support })
    }

    pub fn dirac(value: T) -> Self {
        DiscreteMeasure {
            support: vec![(1.0, value)],
        }
    }

    pub fn is_dirac(&self) -> bool {
        self.support.len() == 1
    }
}

impl DiscreteMeasure<Point> {
    /// Merge support points equal within 1e-12.
    pub fn merged(&self) -> DiscreteMeasure<Point> {
        let mut support: Vec<(f64, Point)> = Vec::new();
        for (w, p) in &self.support {
            if let Some(entry) = support.iter_mut().find(|(_, q)| q.approx_eq(p, 1e-12)) {
                entry.0 += w;
            } else {
                support.push((*w, p.clone()));
            }
        }
        DiscreteMeasure { support }
    }
}

/// r(μ) = Σ wᵢ xᵢ. Satisfies ⟨u, r(μ)⟩ = Σ wᵢ ⟨u, xᵢ⟩ for every u.
pub fn barycenter(mu: &DiscreteMeasure<Point>) -> Point {
    let dim = mu.support[0].1.dim();
    let mut acc = vec![0.0; dim];
    for (w, p) in &mu.support {
        axpy(&mut acc, *w, p);
    }
    Point(acc)
}

/// Atom-wise barycenter of a measure over selections. Point evaluation is
/// linear, so this is the L^p barycenter.
pub fn selection_barycenter(mu: &DiscreteMeasure<Selection>) -> Result<Selection> {
    let space = mu.support[0].1.space.clone();
    for (_, s) in &mu.support {
        space.check_same(&s.space)?;
    }
    let dim = mu.support[0].1.dim();
    let n = space.n_atoms();
    let mut points = Vec::with_capacity(n);
    for atom in 0..n {
        let mut acc = vec![0.0; dim];
        for (w, s) in &mu.support {
            axpy(&mut acc, *w, &s.points[atom]);
        }
        points.push(Point(acc));
    }
    Ok(Selection { space, points })
}

/// One row of results from the finite-dimensional Choquet-hull experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoquetHullReport {
    pub trials: usize,
    pub max_violation: f64,
    pub lattice_points_checked: usize,
    pub all_lattice_realized: bool,
}

/// Finite-model check that the Choquet hull equals the convex hull in R^d:
/// random discrete measures supported on hull lattice samples of the cloud
/// must have barycenters inside conv(cloud), and conversely every lattice
/// point of conv(cloud) is realized as a barycenter with explicit weights.
pub fn choquet_hull_fd(cloud: &PointCloud, trials: usize, seed: u64) -> Result<ChoquetHullReport> {
    let lattice = simplex_lattice_points(cloud, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation: f64 = 0.0;

    for _ in 0..trials {
        let k = rng.gen_range(1..=lattice.len().min(6));
        let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        let support: Vec<(f64, Point)> = weights
            .into_iter()
            .map(|w| (w, lattice[rng.gen_range(0..lattice.len())].clone()))
            .collect();
        let mu = DiscreteMeasure { support };
        let b = barycenter(&mu);
        max_violation = max_violation.max(distance_to_hull(&b, &cloud.points));
    }

    // Every lattice point is a barycenter: it is Σ (kᵢ/g) xᵢ by construction,
    // i.e. the barycenter of the measure with exactly those weights.
    let all_lattice_realized = lattice
        .iter()
        .all(|p| distance_to_hull(p, &cloud.points) <= TOL_MEMBERSHIP);

    Ok(ChoquetHullReport {
        trials,
        max_violation,
        lattice_points_checked: lattice.len(),
        all_lattice_realized,
    })
}

/// Barycentric lattice samples of conv(cloud) with denominator `grid`.
pub fn simplex_lattice_points(cloud: &PointCloud, grid: usize) -> Vec<Point> {
    let m = cloud.len();
    let dim = cloud.dim();
    let mut out: Vec<Point> = Vec::new();
    let mut idx = vec![0usize; grid];
    loop {
        let mut acc = vec![0.0; dim];
        for &i in &idx {
            axpy(&mut acc, 1.0 / grid as f64, &cloud.points[i]);
        }
        out.push(Point(acc));
        let mut pos = grid;
        loop {
            if pos == 0 {
                return PointCloud::new(out)
                    .expect("lattice is nonempty")
                    .dedup_sorted(1e-12)
                    .points;
            }
            pos -= 1;
            if idx[pos] + 1 < m {
                let v = idx[pos] + 1;
                for slot in idx.iter_mut().skip(pos) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// A transition kernel: one discrete measure over points per atom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Kernel {
    pub space: FiniteProbSpace,
    pub rows: Vec<DiscreteMeasure<Point>>,
}

impl Kernel {
    pub fn new(space: FiniteProbSpace, rows: Vec<DiscreteMeasure<Point>>) -> Result<Self> {
        if rows.len() != space.n_atoms() {
            return Err(Error::SpaceMismatch {
                left: space.n_atoms(),
                right: rows.len(),
            });
        }
        Ok(Kernel { space, rows })
    }

    /// Dirac detection is structural: a single support point per row.
    pub fn is_dirac(&self) -> bool {
        self.rows.iter().all(|r| r.is_dirac())
    }

    /// K(ω) = δ_{a(ω)} for a selection a.
    pub fn dirac_from_selection(a: &Selection) -> Kernel {
        Kernel {
            space: a.space.clone(),
            rows: a.points.iter().cloned().map(DiscreteMeasure::dirac).collect(),
        }
    }
}

/// (Kf)(ω) = Σ w·f(x) over the row at ω, for point-valued f.
pub fn kernel_apply_point<F>(k: &Kernel, f: F) -> Vec<Point>
where
    F: Fn(&Point) -> Point,
{
    k.rows
        .iter()
        .map(|row| {
            let dim = f(&row.support[0].1).dim();
            let mut acc = vec![0.0; dim];
            for (w, x) in &row.support {
                axpy(&mut acc, *w, &f(x));
            }
            Point(acc)
        })
        .collect()
}

/// (Kf)(ω) for scalar-valued f.
pub fn kernel_apply_scalar<F>(k: &Kernel, f: F) -> Vec<f64>
where
    F: Fn(&Point) -> f64,
{
    k.rows
        .iter()
        .map(|row| row.support.iter().map(|(w, x)| w * f(x)).sum())
        .collect()
}

/// Mixture measure (vK)(D) = Σ_ω v(ω)·K(ω)(D), duplicates merged.
pub fn measure_kernel(v: &FiniteProbSpace, k: &Kernel) -> Result<DiscreteMeasure<Point>> {
    v.check_same(&k.space)?;
    let mut support: Vec<(f64, Point)> = Vec::new();
    for (w_atom, row) in v.weights.iter().zip(&k.rows) {
        for (w, x) in &row.support {
            support.push((w_atom * w, x.clone()));
        }
    }
    Ok(DiscreteMeasure { support }.merged())
}

/// Row-wise barycenter of a kernel: the Choquet (convex) decomposition it
/// induces. Dirac kernels reproduce their generating selection exactly.
pub fn kernel_barycenter(k: &Kernel) -> Selection {
    Selection {
        space: k.space.clone(),
        points: k.rows.iter().map(barycenter).collect(),
    }
}

/// Same, with the hull membership asserted against an atomwise support set:
/// Dirac kernels land in chd A, general kernels in chcd A.
pub fn kernel_barycenter_in(k: &Kernel, support: &AtomwiseSet) -> Result<Selection> {
    let bar = kernel_barycenter(k);
    if !atomwise_contains(support, &bar, TOL_MEMBERSHIP)? {
        return Err(Error::InvalidParameter(
            "kernel barycenter escapes its declared hull support".into(),
        ));
    }
    Ok(bar)
}

/// Image measure of μ under g, duplicates merged.
pub fn pushforward<T, F>(mu: &DiscreteMeasure<T>, g: F) -> DiscreteMeasure<Point>
where
    F: Fn(&T) -> Point,
{
    let support: Vec<(f64, Point)> = mu.support.iter().map(|(w, x)| (*w, g(x))).collect();
    DiscreteMeasure { support }.merged()
}
