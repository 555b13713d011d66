//! Seeded fixtures shared by the benchmarks.

use ghdyn_core::{FiniteMetricSpace, PointedSpace, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` random points of the unit square with the Euclidean metric.
pub fn random_plane_space(n: usize, seed: u64) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let dist: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            pts.iter()
                .map(|q| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt())
                .collect()
        })
        .collect();
    let labels = (0..n).map(|k| k.to_string()).collect();
    FiniteMetricSpace::new(labels, &dist, DEFAULT_TOL).expect("distinct random points")
}

pub fn random_pointed(n: usize, seed: u64) -> PointedSpace {
    PointedSpace::single(random_plane_space(n, seed), 0).expect("basepoint 0 exists")
}
