//! Multifunctions over a finite probability space and their selections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Body, Point, PointCloud, TOL_MEMBERSHIP};
use crate::prob::FiniteProbSpace;

/// Convex-valued random set: one Body per atom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomSet {
    pub space: FiniteProbSpace,
    pub values: Vec<Body>,
}

/// Finite-valued (possibly nonconvex) random set: one point cloud per atom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomCloud {
    pub space: FiniteProbSpace,
    pub values: Vec<PointCloud>,
}

/// An atom-indexed choice of points — a measurable selection once it lies in
/// the random set atom-wise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub space: FiniteProbSpace,
    pub points: Vec<Point>,
}

impl RandomSet {
    pub fn new(space: FiniteProbSpace, values: Vec<Body>) -> Result<Self> {
        if values.len() != space.n_atoms() {
            return Err(Error::SpaceMismatch {
                left: space.n_atoms(),
                right: values.len(),
            });
        }
        let dim = values[0].dim();
        for b in &values {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: b.dim(),
                });
            }
        }
        Ok(RandomSet { space, values })
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    /// Constant (deterministic) multifunction.
    pub fn constant(space: FiniteProbSpace, body: Body) -> Self {
        let values = vec![body; space.n_atoms()];
        RandomSet { space, values }
    }
}

impl RandomCloud {
    pub fn new(space: FiniteProbSpace, values: Vec<PointCloud>) -> Result<Self> {
        if values.len() != space.n_atoms() {
            return Err(Error::SpaceMismatch {
                left: space.n_atoms(),
                right: values.len(),
            });
        }
        let dim = values[0].dim();
        for c in &values {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        Ok(RandomCloud { space, values })
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn constant(space: FiniteProbSpace, cloud: PointCloud) -> Self {
        let values = vec![cloud; space.n_atoms()];
        RandomCloud { space, values }
    }

    /// Atom-wise convexification: vertices are the cloud points.
    pub fn convexify(&self) -> RandomSet {
        RandomSet {
            space: self.space.clone(),
            values: self.values.iter().map(|c| c.to_body()).collect(),
        }
    }
}

impl Selection {
    pub fn new(space: FiniteProbSpace, points: Vec<Point>) -> Result<Self> {
        if points.len() != space.n_atoms() {
            return Err(Error::SpaceMismatch {
                left: space.n_atoms(),
                right: points.len(),
            });
        }
        let dim = points[0].dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        Ok(Selection { space, points })
    }

    pub fn constant(space: FiniteProbSpace, p: Point) -> Self {
        let points = vec![p; space.n_atoms()];
        Selection { space, points }
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Expectation E ξ = Σ wᵢ ξ(ωᵢ).
    pub fn expectation(&self) -> Point {
        let mut acc = vec![0.0; self.dim()];
        for (w, p) in self.space.weights.iter().zip(&self.points) {
            crate::geometry::axpy(&mut acc, *w, p);
        }
        Point(acc)
    }

    /// ‖ξ‖_p = (Σ wᵢ ‖ξ(ωᵢ)‖^p)^{1/p}.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p < 1.0 {
            return Err(Error::InvalidParameter(format!("lp_norm needs p ≥ 1, got {p}")));
        }
        let sum: f64 = self
            .space
            .weights
            .iter()
            .zip(&self.points)
            .map(|(w, x)| w * x.norm().powf(p))
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Flatten into a single vector of R^{n·d}, atom-major.
    pub fn flatten(&self) -> Point {
        Point(self.points.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn approx_eq(&self, other: &Selection, tol: f64) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Rebuild a selection from its flattened R^{n·d} form.
pub fn unflatten(space: &FiniteProbSpace, dim: usize, flat: &Point) -> Selection {
    let points = flat
        .0
        .chunks(dim)
        .map(|c| Point(c.to_vec()))
        .collect();
    Selection {
        space: space.clone(),
        points,
    }
}

/// Guard limit for selection enumeration, overridable by callers.
pub const DEFAULT_GUARD: u128 = 1_000_000;

/// All Π mᵢ selections of a finite-valued random set, lexicographic by atom
/// then point index.
pub fn enumerate_selections(x: &RandomCloud) -> Result<Vec<Selection>> {
    enumerate_selections_guarded(x, DEFAULT_GUARD)
}

pub fn enumerate_selections_guarded(x: &RandomCloud, limit: u128) -> Result<Vec<Selection>> {
    let sizes: Vec<usize> = x.values.iter().map(|c| c.len()).collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total > limit {
        return Err(Error::EnumerationTooLarge { size: total, limit });
    }
    let n = sizes.len();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; n];
    loop {
        let points: Vec<Point> = idx
            .iter()
            .enumerate()
            .map(|(atom, &i)| x.values[atom].points[i].clone())
            .collect();
        out.push(Selection {
            space: x.space.clone(),
            points,
        });
        // Odometer, last atom fastest so the order is lexicographic.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            if i == 0 {
                return Ok(out);
            }
        }
    }
}

/// Membership of a selection in a convex-valued random set, atom-wise,
/// within the geometry membership tolerance.
pub fn is_selection_of_set(x: &RandomSet, s: &Selection) -> Result<bool> {
    x.space.check_same(&s.space)?;
    for (body, p) in x.values.iter().zip(&s.points) {
        if !body.contains(p, TOL_MEMBERSHIP)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in a finite-valued random set: exact point match within 1e-12.
pub fn is_selection_of_cloud(x: &RandomCloud, s: &Selection) -> Result<bool> {
    x.space.check_same(&s.space)?;
    Ok(x.values
        .iter()
        .zip(&s.points)
        .all(|(cloud, p)| cloud.points.iter().any(|q| q.approx_eq(p, 1e-12))))
}
