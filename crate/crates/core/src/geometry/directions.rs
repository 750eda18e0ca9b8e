use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;

/// A deterministic set of unit directions used for support sampling.
///
/// Support gaps over a `DirectionSet` are a pseudo-metric on convex bodies:
/// they upper-bound the true Hausdorff distance only in the limit of dense
/// directions. All set-equality checks in this crate go through one of these.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionSet {
    pub directions: Vec<Point>,
    pub rule: String,
    pub seed: u64,
}

impl DirectionSet {
    /// Default rule per ambient dimension: {±1} in R¹, 256 equal angles in
    /// R², 512 Fibonacci-sphere points in R³, and 2d axis directions plus
    /// 1024 seeded Gaussian directions above that.
    pub fn standard(dim: usize, seed: u64) -> Self {
        match dim {
            1 => Self::axes_1d(),
            2 => Self::circle(256),
            3 => Self::fibonacci_sphere(512),
            d => Self::axes_plus_random(d, 1024, seed),
        }
    }

    /// Same rules with an explicit count for d ∈ {2,3} and for the random part above.
    pub fn with_count(dim: usize, count: usize, seed: u64) -> Self {
        match dim {
            1 => Self::axes_1d(),
            2 => Self::circle(count.max(4)),
            3 => Self::fibonacci_sphere(count.max(6)),
            d => Self::axes_plus_random(d, count, seed),
        }
    }

    fn axes_1d() -> Self {
        DirectionSet {
            directions: vec![Point(vec![1.0]), Point(vec![-1.0])],
            rule: "axes-1d".into(),
            seed: 0,
        }
    }

    fn circle(count: usize) -> Self {
        let directions = (0..count)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (count as f64);
                Point(vec![theta.cos(), theta.sin()])
            })
            .collect();
        DirectionSet {
            directions,
            rule: format!("circle-{count}"),
            seed: 0,
        }
    }

    fn fibonacci_sphere(count: usize) -> Self {
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        let directions = (0..count)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / (count as f64);
                let r = (1.0 - z * z).sqrt();
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / golden;
                Point(vec![r * theta.cos(), r * theta.sin(), z])
            })
            .collect();
        DirectionSet {
            directions,
            rule: format!("fibonacci-{count}"),
            seed: 0,
        }
    }

    fn axes_plus_random(dim: usize, count: usize, seed: u64) -> Self {
        let mut directions = Vec::with_capacity(2 * dim + count);
        for i in 0..dim {
            for sign in [1.0, -1.0] {
                let mut c = vec![0.0; dim];
                c[i] = sign;
                directions.push(Point(c));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while directions.len() < 2 * dim + count {
            // Box-Muller Gaussian, normalized; rejection on near-zero norm.
            let coords: Vec<f64> = (0..dim)
                .map(|_| {
                    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    let u2: f64 = rng.gen::<f64>();
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                })
                .collect();
            let p = Point(coords);
            let n = p.norm();
            if n > 1e-8 {
                directions.push(p.scale(1.0 / n));
            }
        }
        DirectionSet {
            directions,
            rule: format!("axes-plus-gaussian-{count}"),
            seed,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions[0].dim()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.directions.iter()
    }
}
