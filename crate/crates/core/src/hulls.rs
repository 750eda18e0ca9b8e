//! Hull operators on finite selection sets: decomposable hull (dec), convex
//! hull (grid-sampled), Choquet decomposable hull (chd) and Choquet convex
//! decomposable hull (chcd), plus the identity suite relating them.
//!
//! On a finite probability space the L^p closure is the identity, so
//! chd A = dec-closure of A is exactly the atom-wise product set
//! F_A(ω) = {ξ(ω) : ξ ∈ A}, and chcd A is the product of conv F_A(ω).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_hull, extreme_points, Body, DirectionSet, Point, PointCloud, TOL_MEMBERSHIP,
};
use crate::prob::{all_assignments, FiniteProbSpace};
use crate::randomset::{unflatten, Selection};

pub const DEFAULT_GRID: usize = 8;
const SUITE_SET_LIMIT: usize = 200_000;

/// Atom-indexed value set: either a finite cloud (chd form) or a convex body
/// (chcd form). Represents the selection set {ξ : ξ(ω) ∈ value(ω) ∀ω}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum AtomValue {
    Cloud(PointCloud),
    Body(Body),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomwiseSet {
    pub space: FiniteProbSpace,
    pub values: Vec<AtomValue>,
}

/// A set of selections, either as an explicit finite list or in atom-wise
/// product form.
#[derive(Debug, Clone)]
pub enum SelectionSet {
    FiniteExact {
        space: FiniteProbSpace,
        members: Vec<Selection>,
        /// True when the list is a grid sample of a continuum (conv hulls).
        sampled: bool,
    },
    Atomwise(AtomwiseSet),
}

impl SelectionSet {
    pub fn finite(space: FiniteProbSpace, members: Vec<Selection>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput("selection set needs members"));
        }
        for m in &members {
            space.check_same(&m.space)?;
        }
        Ok(SelectionSet::FiniteExact {
            space,
            members,
            sampled: false,
        })
    }

    pub fn members(&self) -> Option<&[Selection]> {
        match self {
            SelectionSet::FiniteExact { members, .. } => Some(members),
            SelectionSet::Atomwise(_) => None,
        }
    }
}

/// Atom-wise mixing: result(ω) = selections[assignment(ω)](ω).
pub fn decompose(selections: &[Selection], assignment: &[usize]) -> Result<Selection> {
    if selections.is_empty() {
        return Err(Error::EmptyInput("decompose needs selections"));
    }
    let space = &selections[0].space;
    if assignment.len() != space.n_atoms() {
        return Err(Error::SpaceMismatch {
            left: space.n_atoms(),
            right: assignment.len(),
        });
    }
    let mut points = Vec::with_capacity(assignment.len());
    for (atom, &idx) in assignment.iter().enumerate() {
        let sel = selections.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx,
            len: selections.len(),
        })?;
        points.push(sel.points[atom].clone());
    }
    Ok(Selection {
        space: space.clone(),
        points,
    })
}

fn dedup_selections(list: Vec<Selection>) -> Vec<Selection> {
    if list.is_empty() {
        return list;
    }
    let space = list[0].space.clone();
    let dim = list[0].dim();
    let flat = PointCloud::new(list.iter().map(|s| s.flatten()).collect())
        .expect("nonempty")
        .dedup_sorted(1e-12);
    flat.points.iter().map(|p| unflatten(&space, dim, p)).collect()
}

/// All mⁿ atom-wise mixtures of the members (duplicates merged).
pub fn dec_hull(members: &[Selection]) -> Result<Vec<Selection>> {
    dec_hull_guarded(members, 1_000_000)
}

pub fn dec_hull_guarded(members: &[Selection], limit: u128) -> Result<Vec<Selection>> {
    if members.is_empty() {
        return Err(Error::EmptyInput("dec_hull needs members"));
    }
    let n = members[0].space.n_atoms();
    let m = members.len();
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > limit {
        return Err(Error::EnumerationTooLarge { size: total, limit });
    }
    let mut out = Vec::with_capacity(total as usize);
    for assignment in all_assignments(n, m)? {
        out.push(decompose(members, &assignment)?);
    }
    let out = dedup_selections(out);

    // Cross-check against the atom-wise product form F_A.
    let aw = chd_hull_finite(members)?;
    let expected: u128 = aw
        .values
        .iter()
        .map(|v| match v {
            AtomValue::Cloud(c) => c.len() as u128,
            AtomValue::Body(_) => unreachable!(),
        })
        .product();
    debug_assert_eq!(out.len() as u128, expected);
    Ok(out)
}

/// chd of a finite-exact set: the atom-wise clouds F_A(ω) = {ξ(ω) : ξ ∈ A}.
pub fn chd_hull_finite(members: &[Selection]) -> Result<AtomwiseSet> {
    if members.is_empty() {
        return Err(Error::EmptyInput("chd_hull needs members"));
    }
    let space = members[0].space.clone();
    let n = space.n_atoms();
    let mut values = Vec::with_capacity(n);
    for atom in 0..n {
        let cloud = PointCloud::new(members.iter().map(|s| s.points[atom].clone()).collect())?
            .dedup(1e-12);
        values.push(AtomValue::Cloud(cloud));
    }
    Ok(AtomwiseSet { space, values })
}

/// chd of an atomwise set is the set itself: product sets are decomposable
/// and closed on finite spaces.
pub fn chd_hull_atomwise(aw: &AtomwiseSet) -> AtomwiseSet {
    AtomwiseSet {
        space: aw.space.clone(),
        values: aw
            .values
            .iter()
            .map(|v| match v {
                AtomValue::Cloud(c) => AtomValue::Cloud(c.dedup(1e-12)),
                AtomValue::Body(b) => AtomValue::Body(b.clone()),
            })
            .collect(),
    }
}

pub fn chd_hull(set: &SelectionSet) -> Result<AtomwiseSet> {
    match set {
        SelectionSet::FiniteExact { members, .. } => chd_hull_finite(members),
        SelectionSet::Atomwise(aw) => Ok(chd_hull_atomwise(aw)),
    }
}

/// chcd of a finite-exact set: conv F_A(ω) per atom (the cconv ∘ chd route).
pub fn chcd_hull_finite(members: &[Selection]) -> Result<AtomwiseSet> {
    let chd = chd_hull_finite(members)?;
    Ok(convexify_atomwise(&chd))
}

/// Atom-wise convex hull of an atomwise set.
pub fn convexify_atomwise(aw: &AtomwiseSet) -> AtomwiseSet {
    AtomwiseSet {
        space: aw.space.clone(),
        values: aw
            .values
            .iter()
            .map(|v| match v {
                AtomValue::Cloud(c) => AtomValue::Body(c.to_body().reduce()),
                AtomValue::Body(b) => AtomValue::Body(b.clone()),
            })
            .collect(),
    }
}

pub fn chcd_hull(set: &SelectionSet) -> Result<AtomwiseSet> {
    match set {
        SelectionSet::FiniteExact { members, .. } => chcd_hull_finite(members),
        SelectionSet::Atomwise(aw) => Ok(convexify_atomwise(aw)),
    }
}

/// Membership of a selection in an atomwise set, within `tol` per atom.
pub fn atomwise_contains(aw: &AtomwiseSet, s: &Selection, tol: f64) -> Result<bool> {
    aw.space.check_same(&s.space)?;
    for (value, p) in aw.values.iter().zip(&s.points) {
        let inside = match value {
            AtomValue::Cloud(c) => c.points.iter().any(|q| q.approx_eq(p, tol.max(1e-12))),
            AtomValue::Body(b) => b.contains(p, tol)?,
        };
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of multisets of size g over m items: C(m+g−1, g).
fn multiset_count(m: usize, g: usize) -> u128 {
    let mut num: u128 = 1;
    for i in 0..g {
        num = num.saturating_mul((m + i) as u128);
        num /= (i + 1) as u128;
    }
    num
}

/// Grid sample of the convex hull of a finite selection set: all barycentric
/// mixtures with weights kᵢ/grid, i.e. averages of size-`grid` multisets of
/// members. Pure multisets reproduce the exact members, so the sample always
/// contains A itself.
pub fn conv_hull_sel(members: &[Selection], grid: usize) -> Result<Vec<Selection>> {
    conv_hull_sel_guarded(members, grid, 1_000_000)
}

pub fn conv_hull_sel_guarded(
    members: &[Selection],
    grid: usize,
    limit: u128,
) -> Result<Vec<Selection>> {
    if members.is_empty() {
        return Err(Error::EmptyInput("conv_hull_sel needs members"));
    }
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be ≥ 1".into()));
    }
    let m = members.len();
    let total = multiset_count(m, grid);
    if total > limit {
        return Err(Error::EnumerationTooLarge { size: total, limit });
    }
    let space = members[0].space.clone();
    let dim = members[0].dim();
    let n = space.n_atoms();
    let flat_dim = n * dim;

    let mut out: Vec<Selection> = Vec::with_capacity(total as usize);
    // Enumerate nondecreasing index multisets of size `grid`.
    let mut idx = vec![0usize; grid];
    loop {
        let mut acc = vec![0.0; flat_dim];
        for &i in &idx {
            crate::geometry::axpy(&mut acc, 1.0 / grid as f64, &members[i].flatten());
        }
        out.push(unflatten(&space, dim, &Point(acc)));

        // Next nondecreasing multiset.
        let mut pos = grid;
        loop {
            if pos == 0 {
                return Ok(dedup_selections(out));
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

/// One pass/fail line of the identity suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub pass: bool,
    pub max_dev: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_dev(&self) -> f64 {
        self.checks.iter().map(|c| c.max_dev).fold(0.0, f64::max)
    }
}

/// Symmetric set deviation between two selection lists: max over either list
/// of the sup-norm distance to the closest member of the other. Sorted on
/// the first coordinate so the equal-sets case stays quasi-linear.
fn selection_set_deviation(a: &[Selection], b: &[Selection]) -> f64 {
    fn sup_dist(p: &Point, q: &Point) -> f64 {
        p.0.iter()
            .zip(&q.0)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
    let directed = |from: &[Selection], to: &[Selection]| -> f64 {
        let mut sorted: Vec<Point> = to.iter().map(|s| s.flatten()).collect();
        sorted.sort_by(|x, y| x.0[0].partial_cmp(&y.0[0]).unwrap());
        let window = 1e-9;
        let mut dev: f64 = 0.0;
        for s in from {
            let p = s.flatten();
            let lo = sorted.partition_point(|q| q.0[0] < p.0[0] - window);
            let mut best = f64::INFINITY;
            for q in &sorted[lo..] {
                if q.0[0] > p.0[0] + window {
                    break;
                }
                best = best.min(sup_dist(&p, q));
            }
            if best > window {
                // No near match in the window: true nearest by full scan.
                best = sorted
                    .iter()
                    .map(|q| sup_dist(&p, q))
                    .fold(f64::INFINITY, f64::min);
            }
            dev = dev.max(best);
        }
        dev
    };
    directed(a, b).max(directed(b, a))
}

fn atomwise_deviation(a: &AtomwiseSet, b: &AtomwiseSet, dirs: &DirectionSet) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for (va, vb) in a.values.iter().zip(&b.values) {
        let gap = match (va, vb) {
            (AtomValue::Cloud(ca), AtomValue::Cloud(cb)) => ca.hausdorff(cb)?,
            (AtomValue::Body(ba), AtomValue::Body(bb)) => ba.support_gap(bb, dirs)?,
            (AtomValue::Cloud(c), AtomValue::Body(b)) | (AtomValue::Body(b), AtomValue::Cloud(c)) => {
                c.to_body().support_gap(b, dirs)?
            }
        };
        dev = dev.max(gap);
    }
    Ok(dev)
}

/// Verifies the hull-operator algebra on a small finite-exact instance:
/// conv∘dec = dec∘conv, idempotence of chd and chcd, the absorption laws
/// chcd∘chd = chcd and chd∘chcd = chcd, and the two chcd construction routes.
pub fn operator_identity_suite(
    members: &[Selection],
    grid: usize,
    dirs: &DirectionSet,
) -> Result<IdentityReport> {
    let tol = 1e-9;
    let mut checks = Vec::new();
    let mut push = |identity: &str, dev: f64| {
        checks.push(IdentityCheck {
            identity: identity.to_string(),
            pass: dev <= tol,
            max_dev: dev,
        });
    };

    let dec = dec_hull(members)?;
    let n = members[0].space.n_atoms();
    let m = members.len();

    // conv∘dec = dec∘conv on a common lattice. Pick the largest grid whose
    // two routes both stay under the enumeration limit.
    let mut g_id = grid.max(1);
    while g_id > 1
        && (multiset_count(dec.len(), g_id) > SUITE_SET_LIMIT as u128
            || multiset_count(m, g_id)
                .checked_pow(n as u32)
                .map_or(true, |c| c > SUITE_SET_LIMIT as u128))
    {
        g_id -= 1;
    }
    let conv_of_dec = conv_hull_sel_guarded(&dec, g_id, SUITE_SET_LIMIT as u128)?;
    let conv_a = conv_hull_sel_guarded(members, g_id, SUITE_SET_LIMIT as u128)?;
    let dec_of_conv = dec_hull_guarded(&conv_a, SUITE_SET_LIMIT as u128)?;
    push(
        &format!("conv∘dec = dec∘conv (lattice grid {g_id})"),
        selection_set_deviation(&conv_of_dec, &dec_of_conv),
    );

    // chd idempotent.
    let chd = chd_hull_finite(members)?;
    let chd2 = chd_hull_atomwise(&chd);
    push("chd idempotent", atomwise_deviation(&chd, &chd2, dirs)?);

    // chcd idempotent.
    let chcd = chcd_hull_finite(members)?;
    let chcd2 = convexify_atomwise(&chcd);
    push("chcd idempotent", atomwise_deviation(&chcd, &chcd2, dirs)?);

    // chcd ∘ chd = chcd.
    let chcd_of_chd = convexify_atomwise(&chd_hull_atomwise(&chd));
    push("chcd∘chd = chcd", atomwise_deviation(&chcd_of_chd, &chcd, dirs)?);

    // chd ∘ chcd = chcd.
    let chd_of_chcd = chd_hull_atomwise(&chcd);
    push("chd∘chcd = chcd", atomwise_deviation(&chd_of_chcd, &chcd, dirs)?);

    // chcd = chd∘conv: chd of the conv sample, convexified atom-wise, must
    // reproduce chcd exactly (the sample contains the original members).
    let chd_of_conv = chd_hull_finite(&conv_a)?;
    let route2 = convexify_atomwise(&chd_of_conv);
    push("chcd = cconv∘chd = chd∘conv", atomwise_deviation(&route2, &chcd, dirs)?);

    Ok(IdentityReport { checks })
}

/// Extreme points of conv(members) viewed as vectors in R^{n·d}. Extremality
/// is affine-invariant, so the plain Euclidean structure is used regardless
/// of atom weights.
pub fn extreme_selections(members: &[Selection]) -> Result<Vec<Selection>> {
    if members.is_empty() {
        return Err(Error::EmptyInput("extreme_selections needs members"));
    }
    let space = members[0].space.clone();
    let dim = members[0].dim();
    let flat = PointCloud::new(members.iter().map(|s| s.flatten()).collect())?;
    let ext = extreme_points(&flat);
    Ok(ext
        .points
        .iter()
        .map(|p| unflatten(&space, dim, p))
        .collect())
}

/// Exhaustive decomposability check: every atom-wise mixture of members is
/// again a member.
pub fn is_decomposable(members: &[Selection]) -> Result<bool> {
    let n = members[0].space.n_atoms();
    let m = members.len();
    for assignment in all_assignments(n, m)? {
        let mixed = decompose(members, &assignment)?;
        if !members.iter().any(|s| s.approx_eq(&mixed, 1e-12)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of a selection in conv(members) in the flattened space.
pub fn in_conv_of(members: &[Selection], s: &Selection) -> f64 {
    let flat: Vec<Point> = members.iter().map(|m| m.flatten()).collect();
    distance_to_hull(&s.flatten(), &flat)
}

/// True when `s` is within tol of conv(members).
pub fn is_in_conv_of(members: &[Selection], s: &Selection) -> bool {
    in_conv_of(members, s) <= TOL_MEMBERSHIP
}
