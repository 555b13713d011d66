#![allow(dead_code)]

use ghdyn_core::{FiniteMetricSpace, MapTable, PointedSpace, SelfMapSystem, DEFAULT_TOL};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct points on a quarter-grid of `[0, side]²` with the Euclidean metric.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<(f64, f64)> {
    let cells = (side * 4.0) as i64 + 1;
    let mut all: Vec<(i64, i64)> = (0..cells)
        .flat_map(|a| (0..cells).map(move |b| (a, b)))
        .collect();
    all.shuffle(rng);
    all.truncate(n);
    all.into_iter()
        .map(|(a, b)| (a as f64 / 4.0, b as f64 / 4.0))
        .collect()
}

pub fn euclidean(pts: &[(f64, f64)]) -> FiniteMetricSpace {
    let m: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            pts.iter()
                .map(|q| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt())
                .collect()
        })
        .collect();
    let labels = (0..pts.len()).map(|k| k.to_string()).collect();
    FiniteMetricSpace::new(labels, &m, DEFAULT_TOL).expect("euclidean points form a metric")
}

pub fn random_space(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteMetricSpace {
    let n = rng.gen_range(1..=max_points);
    let pts = random_points(rng, n, 3.0);
    euclidean(&pts)
}

pub fn random_pointed(rng: &mut ChaCha8Rng, max_points: usize) -> PointedSpace {
    let s = random_space(rng, max_points);
    let b = rng.gen_range(0..s.len());
    PointedSpace::single(s, b).unwrap()
}

pub fn random_map(rng: &mut ChaCha8Rng, dom: usize, cod: usize) -> MapTable {
    MapTable::new(cod, (0..dom).map(|_| rng.gen_range(0..cod)).collect()).unwrap()
}

pub fn random_system(rng: &mut ChaCha8Rng, max_points: usize, pointed: bool) -> SelfMapSystem {
    let s = random_space(rng, max_points);
    let n = s.len();
    let map = random_map(rng, n, n);
    let base = pointed.then(|| rng.gen_range(0..n));
    SelfMapSystem::new(s, map, base).unwrap()
}

/// A pointed space close to `pts`: every point moved by at most `jitter` in
/// each coordinate, the basepoint kept, and possibly the last point dropped.
pub fn jittered(
    rng: &mut ChaCha8Rng,
    pts: &[(f64, f64)],
    base: usize,
    jitter: f64,
) -> PointedSpace {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (k, p) in pts.iter().enumerate() {
        if k + 1 == pts.len() && k != base && pts.len() > 2 && rng.gen_bool(0.3) {
            break;
        }
        let q = if k == base {
            *p
        } else {
            (
                p.0 + rng.gen_range(-jitter..=jitter),
                p.1 + rng.gen_range(-jitter..=jitter),
            )
        };
        if out
            .iter()
            .all(|o| (o.0 - q.0).abs() + (o.1 - q.1).abs() > 1e-6)
        {
            out.push(q);
        } else {
            out.push((q.0 + 3.0 * jitter + 0.01, q.1));
        }
    }
    PointedSpace::single(euclidean(&out), base).unwrap()
}

/// Every map `dom → cod` in lexicographic order.
pub fn all_maps(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dom {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..cod).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    out
}

/// Straightforward check of the pointed conditions, written independently
/// of the library.
pub fn oracle_pointed_ok(
    img: &[usize],
    x: &FiniteMetricSpace,
    xb: usize,
    y: &FiniteMetricSpace,
    yb: usize,
    eps: f64,
    dynamics: Option<(&[usize], &[usize])>,
) -> bool {
    let tol = DEFAULT_TOL;
    if img[xb] != yb {
        return false;
    }
    let ball: Vec<usize> = (0..x.len())
        .filter(|&p| p == xb || x.d(xb, p) < 1.0 / eps - tol)
        .collect();
    for &a in &ball {
        for &b in &ball {
            if (y.d(img[a], img[b]) - x.d(a, b)).abs() > eps + tol {
                return false;
            }
        }
    }
    let inner = 1.0 / eps - eps;
    if inner > 0.0 {
        for q in 0..y.len() {
            if q == yb || y.d(yb, q) < inner - tol {
                let near = ball.iter().any(|&p| y.d(img[p], q) <= eps + tol);
                if !near {
                    return false;
                }
            }
        }
    }
    if let Some((f, g)) = dynamics {
        if y.d(img[f[xb]], g[yb]) > eps + tol {
            return false;
        }
        for &q in &ball {
            if y.d(img[f[q]], g[img[q]]) > eps + tol {
                return false;
            }
        }
    }
    true
}

/// Candidate ε values for the pointed problems, built from scratch.
pub fn oracle_candidates(
    x: &FiniteMetricSpace,
    xb: usize,
    y: &FiniteMetricSpace,
    yb: usize,
) -> Vec<f64> {
    let mut vals: Vec<f64> = Vec::new();
    let xd: Vec<f64> = (0..x.len())
        .flat_map(|a| (0..x.len()).map(move |b| (a, b)))
        .map(|(a, b)| x.d(a, b))
        .collect();
    let yd: Vec<f64> = (0..y.len())
        .flat_map(|a| (0..y.len()).map(move |b| (a, b)))
        .map(|(a, b)| y.d(a, b))
        .collect();
    vals.extend(&xd);
    vals.extend(&yd);
    for a in &xd {
        for b in &yd {
            vals.push((a - b).abs());
        }
    }
    for d in (0..x.len())
        .map(|p| x.d(xb, p))
        .chain((0..y.len()).map(|q| y.d(yb, q)))
    {
        if d > 0.0 {
            vals.push(1.0 / d);
        }
        vals.push((-d + (d * d + 4.0).sqrt()) / 2.0);
    }
    vals.retain(|v| *v > 0.0);
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.dedup();
    let mut out = vec![vals[0] / 2.0];
    out.extend(vals);
    out
}

/// Smallest candidate ε admitting approximations both ways (0 when the
/// representative below every critical value already works).
pub fn oracle_pointed_distance(
    x: &FiniteMetricSpace,
    xb: usize,
    y: &FiniteMetricSpace,
    yb: usize,
    dynamics: Option<(&[usize], &[usize])>,
) -> f64 {
    let cands = oracle_candidates(x, xb, y, yb);
    let fwd = all_maps(x.len(), y.len());
    let bwd = all_maps(y.len(), x.len());
    let rev = dynamics.map(|(f, g)| (g, f));
    for (k, &e) in cands.iter().enumerate() {
        let a = fwd
            .iter()
            .any(|m| oracle_pointed_ok(m, x, xb, y, yb, e, dynamics));
        let b = bwd
            .iter()
            .any(|m| oracle_pointed_ok(m, y, yb, x, xb, e, rev));
        if a && b {
            return if k == 0 { 0.0 } else { e };
        }
    }
    unreachable!("large ε is always feasible")
}

/// GH value `max(min_i a(i), min_j b(j))` by brute force.
pub fn oracle_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let one = |x: &FiniteMetricSpace, y: &FiniteMetricSpace| {
        all_maps(x.len(), y.len())
            .iter()
            .map(|m| {
                let mut v = 0.0f64;
                for a in 0..x.len() {
                    for b in 0..x.len() {
                        v = v.max((y.d(m[a], m[b]) - x.d(a, b)).abs());
                    }
                }
                for q in 0..y.len() {
                    v = v.max(m.iter().map(|&p| y.d(p, q)).fold(f64::INFINITY, f64::min));
                }
                v
            })
            .fold(f64::INFINITY, f64::min)
    };
    one(x, y).max(one(y, x))
}
