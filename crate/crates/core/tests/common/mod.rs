//! Seeded generators shared by the property and acceptance suites.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rsl_core::geometry::{Ball, Body, Point, PointCloud};
use rsl_core::prob::FiniteProbSpace;
use rsl_core::randomset::{RandomCloud, Selection};

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    Point((0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect())
}

pub fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, max_points: usize) -> PointCloud {
    let n = rng.gen_range(1..=max_points);
    PointCloud::new((0..n).map(|_| random_point(rng, dim)).collect()).unwrap()
}

pub fn random_body(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    let n = rng.gen_range(1..=6);
    let mut body = Body::from_vertices((0..n).map(|_| random_point(rng, dim)).collect()).unwrap();
    if rng.gen_bool(0.5) {
        body.balls.push(Ball {
            center: random_point(rng, dim),
            radius: rng.gen_range(0.0..2.0),
        });
    }
    body
}

pub fn random_space(rng: &mut ChaCha8Rng, max_atoms: usize) -> FiniteProbSpace {
    let n = rng.gen_range(1..=max_atoms);
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    FiniteProbSpace::new(weights).unwrap()
}

pub fn random_selections(
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
            .unwrap()
        })
        .collect()
}

pub fn random_random_cloud(
    rng: &mut ChaCha8Rng,
    max_atoms: usize,
    max_points: usize,
    dim: usize,
) -> RandomCloud {
    let space = random_space(rng, max_atoms);
    let values = (0..space.n_atoms())
        .map(|_| random_cloud(rng, dim, max_points))
        .collect();
    RandomCloud::new(space, values).unwrap()
}
