//! Euclidean distance from a point to the convex hull of a finite cloud.
//!
//! The solver is Wolfe's minimum-norm-point algorithm — the fully corrective
//! variant of the conditional-gradient (Frank–Wolfe/Gilbert) scheme. Each
//! outer step adds the vertex found by the linear minimization oracle; the
//! inner loop solves the affine minimization over the active set exactly and
//! drops vertices whose weights go negative. The duality gap certifies the
//! result and the algorithm terminates finitely, so membership can be
//! decided to machine precision.

use crate::geometry::point::{axpy, Point};

pub const TOL_FW: f64 = 1e-10;
pub const TOL_MEMBERSHIP: f64 = 1e-8;
const MAX_ITERS: usize = 10_000;

/// Distance from `p` to conv{points}. Returns 0 exactly when the duality-gap
/// test certifies membership within `TOL_MEMBERSHIP`.
pub fn distance_to_hull(p: &Point, points: &[Point]) -> f64 {
    let d = raw_distance_to_hull(p, points);
    if d <= TOL_MEMBERSHIP {
        0.0
    } else {
        d
    }
}

/// Distance without the membership snap-to-zero.
pub fn raw_distance_to_hull(p: &Point, points: &[Point]) -> f64 {
    assert!(!points.is_empty(), "cloud must be nonempty");
    let dim = p.dim();

    // Work on the translated set w_i = v_i − p; we need the min-norm point.
    let shifted: Vec<Point> = points.iter().map(|v| v.sub(p)).collect();

    let scale = 1.0 + shifted.iter().map(|w| w.norm()).fold(0.0, f64::max);
    // Duality gap on f(x) = ‖x‖²: certified once below fp noise; TOL_FW is
    // the documented outer guarantee.
    let gap_tol = (TOL_FW * scale).min(1e-14 * scale * scale);

    // Active set: indices into `shifted` plus barycentric weights.
    let start = (0..shifted.len())
        .min_by(|&a, &b| {
            shifted[a]
                .norm()
                .partial_cmp(&shifted[b].norm())
                .unwrap()
        })
        .unwrap();
    let mut active: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = shifted[start].clone();
    let mut stalled = 0usize;

    for _ in 0..MAX_ITERS {
        // Linear minimization oracle over all points.
        let mut q = 0;
        let mut best = f64::INFINITY;
        for (i, w) in shifted.iter().enumerate() {
            let dot = x.dot(w);
            if dot < best {
                best = dot;
                q = i;
            }
        }
        // Optimality: ⟨x,x⟩ ≤ ⟨x,q⟩ + gap means x is the min-norm point.
        if x.dot(&x) - best <= gap_tol {
            break;
        }
        if active.contains(&q) {
            // Oracle returned an active vertex: no further progress possible.
            break;
        }
        active.push(q);
        weights.push(0.0);

        // Inner loop: move to the affine minimizer over the active set,
        // dropping vertices whose weights would go negative.
        loop {
            let candidate = match affine_minimizer(&shifted, &active) {
                Some(c) => c,
                None => {
                    // Degenerate Gram system: drop the smallest-weight old
                    // vertex (never the one just added, or the outer loop
                    // would re-add it forever).
                    let (drop_idx, _) = weights[..weights.len() - 1]
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                        .unwrap();
                    active.remove(drop_idx);
                    weights.remove(drop_idx);
                    if active.len() <= 1 {
                        break;
                    }
                    continue;
                }
            };
            if candidate.iter().all(|&l| l >= -1e-14) {
                weights = candidate.iter().map(|&l| l.max(0.0)).collect();
                break;
            }
            // Line search from `weights` towards `candidate` until the first
            // weight hits zero, then drop that vertex.
            let mut theta = 1.0f64;
            for (w, &c) in weights.iter().zip(&candidate) {
                if c < *w {
                    theta = theta.min(w / (w - c));
                }
            }
            let mut merged: Vec<f64> = weights
                .iter()
                .zip(&candidate)
                .map(|(w, &c)| w + theta * (c - w))
                .collect();
            // Drop every vertex at (numerical) zero, keep at least one.
            let mut i = 0;
            while i < merged.len() && merged.len() > 1 {
                if merged[i] <= 1e-14 {
                    merged.remove(i);
                    active.remove(i);
                } else {
                    i += 1;
                }
            }
            weights = merged;
            let total: f64 = weights.iter().sum();
            for w in weights.iter_mut() {
                *w /= total;
            }
            if active.len() == 1 {
                break;
            }
        }

        let mut acc = vec![0.0; dim];
        for (idx, w) in active.iter().zip(&weights) {
            axpy(&mut acc, *w, &shifted[*idx]);
        }
        let next = Point(acc);
        // ‖x‖² decreases strictly off-stall; repeated non-decrease means the
        // numerical floor is reached.
        if x.dot(&x) - next.dot(&next) <= 1e-18 * scale * scale {
            stalled += 1;
            if stalled >= 5 {
                x = next;
                break;
            }
        } else {
            stalled = 0;
        }
        x = next;
    }

    x.norm()
}

/// Minimizer of ‖Σ λᵢ wᵢ‖² subject to Σ λᵢ = 1 over the affine hull of the
/// active vertices, via the KKT system with the Gram matrix.
fn affine_minimizer(shifted: &[Point], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    let n = k + 1;
    let mut mat = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            mat[r][c] = shifted[i].dot(&shifted[j]);
        }
        mat[r][k] = 1.0;
        mat[k][r] = 1.0;
    }
    rhs[k] = 1.0;
    let sol = solve_dense(mat, rhs)?;
    Some(sol[..k].to_vec())
}

/// Gaussian elimination with partial pivoting; None on (near-)singularity.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let norm = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&r1, &r2| {
            a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-13 * norm {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}
