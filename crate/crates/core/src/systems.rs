//! Generators for example spaces and dynamical systems at chosen resolutions.
//!
//! The circle is sampled at `N` equally spaced points with the arclength
//! metric; the torus is the `N × N` grid with the max of the two circle
//! distances. All maps are exact integer maps on the grid indices.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::SelfMapSystem;
use crate::gh::MapTable;
use crate::metric::{FiniteMetricSpace, PointedSpace, DEFAULT_TOL};
use crate::pointed::SpaceSequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemsError {
    #[error("resolution must be at least {min}, got {got}")]
    InvalidResolution { min: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Named generator with its resolution and parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Circle { n: usize },
    Torus { n: usize },
    TwoPointFamily { n: f64 },
    TruncatedLine { radius: f64, step: f64 },
}

impl GridSpec {
    /// The generated space, pointed at index 0 for the circle and torus.
    pub fn build(&self) -> Result<PointedSpace, SystemsError> {
        match *self {
            GridSpec::Circle { n } => {
                Ok(PointedSpace::single(make_circle(n)?, 0).expect("index 0 exists"))
            }
            GridSpec::Torus { n } => {
                Ok(PointedSpace::single(make_torus(n)?, 0).expect("index 0 exists"))
            }
            GridSpec::TwoPointFamily { n } => two_point_family(n),
            GridSpec::TruncatedLine { radius, step } => truncated_line(radius, step),
        }
    }
}

fn check_resolution(n: usize, min: usize) -> Result<(), SystemsError> {
    if n < min {
        Err(SystemsError::InvalidResolution { min, got: n })
    } else {
        Ok(())
    }
}

/// Arc step `2π/N`.
pub fn circle_step(n: usize) -> f64 {
    2.0 * PI / n as f64
}

fn arc(n: usize, a: usize, b: usize) -> f64 {
    let k = a.abs_diff(b) % n;
    k.min(n - k) as f64 * circle_step(n)
}

fn from_flat(labels: Vec<String>, flat: Vec<f64>) -> FiniteMetricSpace {
    FiniteMetricSpace::assume_valid(labels, flat, DEFAULT_TOL)
}

/// `N` equally spaced points on the circle of length 2π.
pub fn make_circle(n: usize) -> Result<FiniteMetricSpace, SystemsError> {
    check_resolution(n, 3)?;
    let flat = (0..n * n).map(|k| arc(n, k / n, k % n)).collect();
    Ok(from_flat((0..n).map(|k| k.to_string()).collect(), flat))
}

/// `k ↦ 2k mod N` on the circle, pointed at the fixed point 0. Bijective
/// exactly when `N` is odd.
pub fn doubling_map(n: usize) -> Result<SelfMapSystem, SystemsError> {
    let space = make_circle(n)?;
    let map = MapTable::new(n, (0..n).map(|k| 2 * k % n).collect()).expect("indices in range");
    Ok(SelfMapSystem::new(space, map, Some(0)).expect("self-map"))
}

/// `k ↦ k + s mod N` on the circle.
pub fn rotation(n: usize, s: usize) -> Result<SelfMapSystem, SystemsError> {
    let space = make_circle(n)?;
    let map = MapTable::new(n, (0..n).map(|k| (k + s) % n).collect()).expect("indices in range");
    Ok(SelfMapSystem::new(space, map, Some(0)).expect("self-map"))
}

/// Identity on `space`, pointed at `basepoint`.
pub fn identity_system(space: FiniteMetricSpace, basepoint: Option<usize>) -> SelfMapSystem {
    SelfMapSystem::identity(space, basepoint).expect("identity is a self-map")
}

/// Index of the torus cell `(a, b)`.
pub fn torus_index(n: usize, a: usize, b: usize) -> usize {
    (a % n) * n + b % n
}

/// Cell coordinates of a torus index.
pub fn torus_cell(n: usize, p: usize) -> (usize, usize) {
    (p / n, p % n)
}

/// `N × N` grid on the flat torus with the max of the two arc distances.
pub fn make_torus(n: usize) -> Result<FiniteMetricSpace, SystemsError> {
    check_resolution(n, 3)?;
    let m = n * n;
    let mut flat = vec![0.0; m * m];
    for p in 0..m {
        let (a, b) = torus_cell(n, p);
        for q in 0..m {
            let (c, d) = torus_cell(n, q);
            flat[p * m + q] = arc(n, a, c).max(arc(n, b, d));
        }
    }
    let labels = (0..m)
        .map(|p| {
            let (a, b) = torus_cell(n, p);
            format!("{a}:{b}")
        })
        .collect();
    Ok(from_flat(labels, flat))
}

fn torus_linear(n: usize, m: [[i64; 2]; 2], shift: (i64, i64)) -> MapTable {
    let ni = n as i64;
    let image = (0..n * n)
        .map(|p| {
            let (a, b) = torus_cell(n, p);
            let (a, b) = (a as i64, b as i64);
            let u = (m[0][0] * a + m[0][1] * b + shift.0).rem_euclid(ni);
            let v = (m[1][0] * a + m[1][1] * b + shift.1).rem_euclid(ni);
            torus_index(n, u as usize, v as usize)
        })
        .collect();
    MapTable::new(n * n, image).expect("indices in range")
}

const CAT: [[i64; 2]; 2] = [[2, 1], [1, 1]];
const CAT_INVERSE: [[i64; 2]; 2] = [[1, -1], [-1, 2]];

/// The hyperbolic automorphism `(a, b) ↦ (2a + b, a + b) mod N`, pointed at
/// the fixed cell `(0, 0)`.
pub fn torus_automorphism(n: usize) -> Result<SelfMapSystem, SystemsError> {
    shifted_torus_automorphism(n, (0, 0))
}

/// Inverse of [`torus_automorphism`] as a map table.
pub fn torus_automorphism_inverse(n: usize) -> Result<MapTable, SystemsError> {
    check_resolution(n, 3)?;
    Ok(torus_linear(n, CAT_INVERSE, (0, 0)))
}

/// `q ↦ A q + c mod N`, the automorphism followed by a constant grid shift.
pub fn shifted_torus_automorphism(
    n: usize,
    shift: (i64, i64),
) -> Result<SelfMapSystem, SystemsError> {
    let space = make_torus(n)?;
    let map = torus_linear(n, CAT, shift);
    Ok(SelfMapSystem::new(space, map, Some(0)).expect("self-map"))
}

/// The translation `h(q) = q + w` with `(A − I) w = c`, which satisfies
/// `A∘h = h∘(A + c)` exactly on the grid.
pub fn torus_shift_conjugacy(n: usize, shift: (i64, i64)) -> Result<MapTable, SystemsError> {
    check_resolution(n, 3)?;
    // (A − I)⁻¹ = [[0, 1], [1, −1]]
    let w = (shift.1, shift.0 - shift.1);
    Ok(torus_linear(n, [[1, 0], [0, 1]], w))
}

/// The eight shifts by one grid cell (axis and diagonal neighbours).
pub const ONE_CELL_SHIFTS: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
];

/// Two points at distance `n`, labelled `"0"` and `"n"`, pointed at the first.
pub fn two_point_family(n: f64) -> Result<PointedSpace, SystemsError> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(SystemsError::InvalidParameter(format!(
            "n must be >= 1, got {n}"
        )));
    }
    let space = from_flat(vec!["0".into(), format!("{n}")], vec![0.0, n, n, 0.0]);
    Ok(PointedSpace::single(space, 0).expect("index 0 exists"))
}

/// The one-point space.
pub fn singleton() -> PointedSpace {
    PointedSpace::single(from_flat(vec!["0".into()], vec![0.0]), 0).expect("index 0 exists")
}

fn line_space(pts: &[f64]) -> FiniteMetricSpace {
    let flat = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| (a - b).abs()))
        .collect();
    from_flat(pts.iter().map(|p| format!("{p}")).collect(), flat)
}

/// Samples `k·step` of `[−R, R]` plus the endpoints `±R`, pointed at 0.
pub fn truncated_line(radius: f64, step: f64) -> Result<PointedSpace, SystemsError> {
    if !(radius > 0.0 && step > 0.0 && step <= radius && radius.is_finite()) {
        return Err(SystemsError::InvalidParameter(format!(
            "need 0 < step <= R, got R = {radius}, step = {step}"
        )));
    }
    let k = (radius / step + 1e-9).floor() as i64;
    let mut pts: Vec<f64> = (-k..=k).map(|i| i as f64 * step).collect();
    if (k as f64) * step < radius - DEFAULT_TOL {
        pts.insert(0, -radius);
        pts.push(radius);
    }
    let base = pts.iter().position(|&p| p == 0.0).expect("0 is sampled");
    Ok(PointedSpace::single(line_space(&pts), base).expect("basepoint exists"))
}

/// Sequences, maps and probes for a map-convergence check.
#[derive(Debug, Clone)]
pub struct MapConvergenceFixture {
    pub seq_x: SpaceSequence,
    pub target_x: PointedSpace,
    pub seq_y: SpaceSequence,
    pub target_y: PointedSpace,
    pub maps: Vec<MapTable>,
    pub limit: MapTable,
    /// Probe where the map sequence should converge.
    pub regular_probe: usize,
    /// Probe where two preimage families collide (two-lobe family only).
    pub colliding_probe: Option<usize>,
}

/// Two lobes `a_0..a_3` at `0, −1, −2, −3` and `b_0..b_3` at `s, s+1, s+2, s+3`
/// with `s = 1/(k+1)`, converging to the 7-point space where `a_0` and `b_0`
/// merge. Each `f_k` pushes points outward within their lobe, so near the
/// merged point the images split between `a_1` and `b_1` and no limit map
/// exists there.
pub fn two_lobe_family(count: usize) -> MapConvergenceFixture {
    // target order: c, a1, a2, a3, b1, b2, b3
    let target_pts = [0.0, -1.0, -2.0, -3.0, 1.0, 2.0, 3.0];
    let target = PointedSpace::single(line_space(&target_pts), 0).expect("basepoint exists");
    let mut entries = Vec::with_capacity(count);
    let mut into_target = Vec::with_capacity(count);
    for k in 1..=count {
        let s = 1.0 / (k as f64 + 1.0);
        // order: a0..a3, b0..b3
        let pts = [0.0, -1.0, -2.0, -3.0, s, s + 1.0, s + 2.0, s + 3.0];
        entries.push(PointedSpace::single(line_space(&pts), 0).expect("basepoint exists"));
        into_target.push(MapTable::new(7, vec![0, 1, 2, 3, 0, 4, 5, 6]).expect("indices in range"));
    }
    let push = MapTable::new(8, vec![1, 2, 3, 3, 5, 6, 7, 7]).expect("indices in range");
    let limit = MapTable::new(7, vec![1, 2, 3, 3, 5, 6, 6]).expect("indices in range");
    let seq = SpaceSequence::new(entries, Some(into_target), vec![]).expect("lengths match");
    MapConvergenceFixture {
        seq_x: seq.clone(),
        target_x: target.clone(),
        seq_y: seq,
        target_y: target,
        maps: vec![push; count],
        limit,
        regular_probe: 2,
        colliding_probe: Some(0),
    }
}

/// Maps `m ↦ m + 1/(k+1)` from the line samples `{0, 1, 2}` into a space
/// holding all perturbed copies, converging to the inclusion `m ↦ m`.
pub fn perturbed_identity_family(count: usize) -> MapConvergenceFixture {
    let mut y_pts: Vec<f64> = vec![0.0, 1.0, 2.0];
    for k in 1..=count {
        let s = 1.0 / (k as f64 + 1.0);
        y_pts.extend([s, 1.0 + s, 2.0 + s]);
    }
    let x = PointedSpace::single(line_space(&[0.0, 1.0, 2.0]), 0).expect("basepoint exists");
    let y_space = line_space(&y_pts);
    let m = y_pts.len();
    let y = PointedSpace::single(y_space, 0).expect("basepoint exists");
    let maps: Vec<MapTable> = (1..=count)
        .map(|k| MapTable::new(m, (0..3).map(|p| 3 * k + p).collect()).expect("indices in range"))
        .collect();
    let seq_x = SpaceSequence::new(
        vec![x.clone(); count],
        Some(vec![MapTable::identity(3); count]),
        vec![],
    )
    .expect("lengths match");
    let seq_y = SpaceSequence::new(
        vec![y.clone(); count],
        Some(vec![MapTable::identity(m); count]),
        vec![],
    )
    .expect("lengths match");
    MapConvergenceFixture {
        seq_x,
        target_x: x,
        seq_y,
        target_y: y,
        maps,
        limit: MapTable::new(m, vec![0, 1, 2]).expect("indices in range"),
        regular_probe: 1,
        colliding_probe: None,
    }
}
