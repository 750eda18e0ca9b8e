use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::distance::{distance_to_hull, TOL_MEMBERSHIP};
use crate::geometry::point::{axpy, Point};
use crate::geometry::DirectionSet;

/// Tolerance on support gaps used to declare two convex bodies equal.
pub const TOL_SET_EQ: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// A convex body conv(vertices) ⊕ Σᵢ B̄(centerᵢ, radiusᵢ).
///
/// The class is exactly closed under Minkowski sums and nonnegative scaling,
/// and its support function evaluates in closed form:
/// h(u) = maxᵥ ⟨v,u⟩ + Σᵢ (⟨cᵢ,u⟩ + rᵢ‖u‖).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub vertices: Vec<Point>,
    #[serde(default)]
    pub balls: Vec<Ball>,
}

/// A finite, possibly nonconvex point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Point>,
}

impl Body {
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("a body needs at least one vertex"));
        }
        let dim = vertices[0].dim();
        for v in &vertices {
            v.check_dim(dim)?;
        }
        Ok(Body {
            vertices,
            balls: Vec::new(),
        })
    }

    pub fn singleton(p: Point) -> Self {
        Body {
            vertices: vec![p],
            balls: Vec::new(),
        }
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball radius {radius} is negative"
            )));
        }
        let dim = center.dim();
        Ok(Body {
            vertices: vec![Point::zero(dim)],
            balls: vec![Ball { center, radius }],
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other,
            })
        }
    }

    /// Support function h(u) = sup_{x ∈ body} ⟨u, x⟩. `u` need not be unit.
    pub fn support(&self, u: &Point) -> Result<f64> {
        self.check_dim(u.dim())?;
        let vertex_part = self
            .vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max);
        let norm_u = u.norm();
        let ball_part: f64 = self
            .balls
            .iter()
            .map(|b| b.center.dot(u) + b.radius * norm_u)
            .sum();
        Ok(vertex_part + ball_part)
    }

    pub fn minkowski_sum(&self, other: &Body) -> Result<Body> {
        self.check_dim(other.dim())?;
        let mut vertices = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vertices.push(a.add(b));
            }
        }
        let mut balls = self.balls.clone();
        balls.extend(other.balls.iter().cloned());
        Ok(Body { vertices, balls })
    }

    /// Nonnegative scaling λ·body. The class is a cone, not a linear space.
    pub fn scale(&self, factor: f64) -> Result<Body> {
        if factor < 0.0 {
            return Err(Error::NegativeScale(factor));
        }
        Ok(Body {
            vertices: self.vertices.iter().map(|v| v.scale(factor)).collect(),
            balls: self
                .balls
                .iter()
                .map(|b| Ball {
                    center: b.center.scale(factor),
                    radius: b.radius * factor,
                })
                .collect(),
        })
    }

    /// Canonical form: redundant vertices pruned, the ball list folded into a
    /// single ball (a Minkowski sum of balls is a ball).
    pub fn reduce(&self) -> Body {
        let balls = if self.balls.len() > 1 {
            let dim = self.dim();
            let mut center = vec![0.0; dim];
            let mut radius = 0.0;
            for b in &self.balls {
                axpy(&mut center, 1.0, &b.center);
                radius += b.radius;
            }
            vec![Ball {
                center: Point(center),
                radius,
            }]
        } else {
            self.balls.clone()
        };

        let mut kept: Vec<Point> = Vec::new();
        // Deduplicate first, then drop vertices inside the hull of the rest.
        for v in &self.vertices {
            if !kept.iter().any(|k| k.approx_eq(v, 1e-12)) {
                kept.push(v.clone());
            }
        }
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let mut rest = kept.clone();
            rest.remove(i);
            let d = distance_to_hull(&kept[i], &rest);
            if d <= TOL_MEMBERSHIP {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Body {
            vertices: kept,
            balls,
        }
    }

    /// Max support gap over a direction set — a pseudo-distance that equals
    /// the Hausdorff distance in the limit of dense directions.
    pub fn support_gap(&self, other: &Body, dirs: &DirectionSet) -> Result<f64> {
        self.check_dim(other.dim())?;
        self.check_dim(dirs.dim())?;
        let mut gap: f64 = 0.0;
        for u in dirs.iter() {
            gap = gap.max((self.support(u)? - other.support(u)?).abs());
        }
        Ok(gap)
    }

    /// True when the body has no ball part (a polytope).
    pub fn is_polytope(&self) -> bool {
        self.balls.iter().all(|b| b.radius == 0.0)
    }

    /// For pure polytopes: vertices translated by zero-radius ball centers.
    pub fn polytope_points(&self) -> Option<Vec<Point>> {
        if !self.is_polytope() {
            return None;
        }
        let mut shift = Point::zero(self.dim());
        for b in &self.balls {
            shift = shift.add(&b.center);
        }
        Some(self.vertices.iter().map(|v| v.add(&shift)).collect())
    }

    /// Membership test via the support of the polytope part; bodies with a
    /// ball part fall back to distance-to-hull on a dilated check.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<bool> {
        self.check_dim(p.dim())?;
        if let Some(points) = self.polytope_points() {
            return Ok(distance_to_hull(p, &points) <= tol);
        }
        // conv(V) ⊕ B̄(c, r): x ∈ body iff dist(x − c, conv V) ≤ r.
        let reduced = self.reduce();
        let ball = &reduced.balls[0];
        let shifted = p.sub(&ball.center);
        Ok(crate::geometry::distance::raw_distance_to_hull(&shifted, &reduced.vertices)
            <= ball.radius + tol)
    }
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("a point cloud needs at least one point"));
        }
        let dim = points[0].dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        Ok(PointCloud { points })
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Convex hull of the cloud as a Body (no vertex pruning).
    pub fn to_body(&self) -> Body {
        Body {
            vertices: self.points.clone(),
            balls: Vec::new(),
        }
    }

    /// Dedup for large clouds: lexicographic sort, then merge neighbors
    /// within `tol`. Quasi-linear instead of quadratic.
    pub fn dedup_sorted(&self, tol: f64) -> PointCloud {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut out: Vec<Point> = Vec::new();
        for p in pts {
            let mut dup = false;
            for q in out.iter().rev() {
                if p.0[0] - q.0[0] > tol {
                    break;
                }
                if q.approx_eq(&p, tol) {
                    dup = true;
                    break;
                }
            }
            if !dup {
                out.push(p);
            }
        }
        PointCloud { points: out }
    }

    pub fn dedup(&self, tol: f64) -> PointCloud {
        let mut points: Vec<Point> = Vec::new();
        for p in &self.points {
            if !points.iter().any(|q| q.approx_eq(p, tol)) {
                points.push(p.clone());
            }
        }
        PointCloud { points }
    }

    /// Exact discrete Hausdorff distance (double max-min).
    pub fn hausdorff(&self, other: &PointCloud) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let directed = |a: &PointCloud, b: &PointCloud| -> f64 {
            a.points
                .iter()
                .map(|p| {
                    b.points
                        .iter()
                        .map(|q| p.dist(q))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        Ok(directed(self, other).max(directed(other, self)))
    }
}

/// Exactly the points that are not convex combinations of the others.
/// conv(result) = conv(cloud) (finite Krein–Milman).
pub fn extreme_points(cloud: &PointCloud) -> PointCloud {
    let unique = cloud.dedup(1e-12);
    if unique.len() <= 1 {
        return unique;
    }
    let mut extreme = Vec::new();
    for (i, p) in unique.points.iter().enumerate() {
        let rest: Vec<Point> = unique
            .points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if distance_to_hull(p, &rest) > TOL_MEMBERSHIP {
            extreme.push(p.clone());
        }
    }
    PointCloud { points: extreme }
}

/// Exact Hausdorff distance in R¹ between a finite point set and the
/// interval [lo, hi]. Used by the convexification-rate experiment where the
/// gap must come out exactly 1/(2n).
pub fn hausdorff_cloud_interval_1d(cloud: &PointCloud, lo: f64, hi: f64) -> Result<f64> {
    if cloud.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: cloud.dim(),
        });
    }
    let mut xs: Vec<f64> = cloud.points.iter().map(|p| p.0[0]).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let dist_to_cloud = |t: f64| -> f64 {
        xs.iter()
            .map(|x| (x - t).abs())
            .fold(f64::INFINITY, f64::min)
    };
    // Directed interval → cloud: candidates are the endpoints and the
    // midpoints of consecutive cloud points lying inside the interval.
    let mut d_iv = dist_to_cloud(lo).max(dist_to_cloud(hi));
    for w in xs.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if mid >= lo && mid <= hi {
            d_iv = d_iv.max(dist_to_cloud(mid));
        }
    }
    // Directed cloud → interval.
    let d_ci = xs
        .iter()
        .map(|&x| {
            if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(d_iv.max(d_ci))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point {
        Point(coords.to_vec())
    }

    #[test]
    fn support_of_origin_singleton() {
        let b = Body::singleton(pt(&[0.0, 0.0]));
        assert_eq!(b.support(&pt(&[3.0, 4.0])).unwrap(), 0.0);
    }

    #[test]
    fn support_of_unit_ball() {
        let b = Body::ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert!((b.support(&pt(&[0.0, 1.0])).unwrap() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn support_of_triangle_brute_force() {
        let vs = vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])];
        let u = pt(&[1.0, 1.0]);
        // Oracle: max over the vertex list directly.
        let oracle = vs.iter().map(|v| v.dot(&u)).fold(f64::NEG_INFINITY, f64::max);
        let b = Body::from_vertices(vs).unwrap();
        assert_eq!(b.support(&u).unwrap(), oracle);
        assert_eq!(oracle, 1.0);
    }

    #[test]
    fn support_dimension_mismatch() {
        let b = Body::singleton(pt(&[0.0, 0.0]));
        assert!(matches!(
            b.support(&pt(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minkowski_identity_element() {
        let a = Body::from_vertices(vec![pt(&[1.0, 2.0]), pt(&[3.0, -1.0])]).unwrap();
        let zero = Body::singleton(pt(&[0.0, 0.0]));
        let sum = a.minkowski_sum(&zero).unwrap();
        let dirs = DirectionSet::standard(2, 0);
        assert!(a.support_gap(&sum, &dirs).unwrap() <= 1e-15);
    }

    #[test]
    fn minkowski_segments_make_square() {
        let h = Body::from_vertices(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]).unwrap();
        let v = Body::from_vertices(vec![pt(&[0.0, 0.0]), pt(&[0.0, 1.0])]).unwrap();
        let square = Body::from_vertices(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
            pt(&[1.0, 1.0]),
        ])
        .unwrap();
        let dirs = DirectionSet::standard(2, 0);
        assert!(h.minkowski_sum(&v).unwrap().support_gap(&square, &dirs).unwrap() <= 1e-15);
    }

    #[test]
    fn minkowski_balls_add() {
        let a = Body::ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        let b = Body::ball(pt(&[1.0, 0.0]), 2.0).unwrap();
        let c = Body::ball(pt(&[1.0, 0.0]), 3.0).unwrap();
        let dirs = DirectionSet::with_count(2, 64, 0);
        assert!(a.minkowski_sum(&b).unwrap().support_gap(&c, &dirs).unwrap() <= 1e-12);
    }

    #[test]
    fn scale_laws() {
        let b = Body::from_vertices(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
            pt(&[1.0, 1.0]),
        ])
        .unwrap();
        let dirs = DirectionSet::standard(2, 0);
        assert!(b.scale(1.0).unwrap().support_gap(&b, &dirs).unwrap() == 0.0);
        let zero = b.scale(0.0).unwrap();
        let origin = Body::singleton(pt(&[0.0, 0.0]));
        assert!(zero.support_gap(&origin, &dirs).unwrap() == 0.0);
        let half = b.scale(0.5).unwrap();
        for u in dirs.iter() {
            assert!((half.support(u).unwrap() - 0.5 * b.support(u).unwrap()).abs() <= 1e-15);
        }
        assert!(matches!(b.scale(-0.1), Err(Error::NegativeScale(_))));
    }

    #[test]
    fn reduce_drops_interior_vertices() {
        let b = Body::from_vertices(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
            pt(&[1.0, 1.0]),
            pt(&[0.5, 0.5]),
        ])
        .unwrap();
        let r = b.reduce();
        assert_eq!(r.vertices.len(), 4);
        let dirs = DirectionSet::standard(2, 0);
        assert!(b.support_gap(&r, &dirs).unwrap() <= 1e-12);
    }

    #[test]
    fn reduce_collinear_and_singleton() {
        let b = Body::from_vertices(vec![pt(&[0.0]), pt(&[0.5]), pt(&[1.0])]).unwrap();
        assert_eq!(b.reduce().vertices.len(), 2);
        let s = Body::singleton(pt(&[2.0]));
        assert_eq!(s.reduce().vertices.len(), 1);
    }

    #[test]
    fn hausdorff_intervals_1d() {
        let a = Body::from_vertices(vec![pt(&[0.0]), pt(&[1.0])]).unwrap();
        let b = Body::from_vertices(vec![pt(&[0.0]), pt(&[2.0])]).unwrap();
        let dirs = DirectionSet::standard(1, 0);
        assert_eq!(a.support_gap(&b, &dirs).unwrap(), 1.0);
        assert_eq!(a.support_gap(&a, &dirs).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_grid_vs_interval() {
        let n = 10;
        let cloud =
            PointCloud::new((0..=n).map(|k| pt(&[k as f64 / n as f64])).collect()).unwrap();
        let d = hausdorff_cloud_interval_1d(&cloud, 0.0, 1.0).unwrap();
        assert!((d - 0.05).abs() <= 1e-15);
    }

    #[test]
    fn extreme_points_square_plus_center() {
        let cloud = PointCloud::new(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
            pt(&[1.0, 1.0]),
            pt(&[0.5, 0.5]),
        ])
        .unwrap();
        let ext = extreme_points(&cloud);
        assert_eq!(ext.len(), 4);
        assert!(!ext.points.iter().any(|p| p.approx_eq(&pt(&[0.5, 0.5]), 1e-9)));
    }

    #[test]
    fn extreme_points_triangle_all_kept() {
        let cloud =
            PointCloud::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]).unwrap();
        assert_eq!(extreme_points(&cloud).len(), 3);
    }

    #[test]
    fn extreme_points_circle_sample_all_kept() {
        // Finite sample of the sphere generator set: every point is extreme.
        let cloud = PointCloud::new(
            (0..16)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * (k as f64) / 16.0;
                    pt(&[t.cos(), t.sin()])
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(extreme_points(&cloud).len(), 16);
    }
}
