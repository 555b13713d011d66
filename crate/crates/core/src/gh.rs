//! Distortion, ε-Gromov–Hausdorff approximations, ε-inverses and the
//! Gromov–Hausdorff distance between finite spaces.
//!
//! Two distances are provided and kept apart:
//!
//! * [`gh_exact`]: the infimum of ε admitting a pair of ε-approximations
//!   `i: X → Y`, `j: Y → X` (distortion and covering radius both at most ε).
//!   With this definition a space is at distance `diam(X)` from a point.
//! * [`gh_hat_exact`]: half the least distortion of a correspondence, the
//!   embedding-based distance. It differs from the former by bounded factors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{le_tol, FiniteMetricSpace, MetricError, PointSet};
use crate::search::{for_each_map, map_count, saturating_pow};

/// Default budget for exhaustive map enumeration.
pub const DEFAULT_MAX_ENUM: u128 = 10_000_000;
/// Default number of local-search restarts for [`gh_upper`].
pub const DEFAULT_RESTARTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhError {
    #[error("map of shape {dom}->{cod} does not fit spaces of sizes {x}->{y}")]
    SizeMismatch {
        dom: usize,
        cod: usize,
        x: usize,
        y: usize,
    },
    #[error("image index {index} at position {position} exceeds codomain size {cod}")]
    InvalidImage {
        position: usize,
        index: usize,
        cod: usize,
    },
    #[error("eps must be positive and finite, got {0}")]
    NonPositiveEps(f64),
    #[error("map is not an {eps}-approximation")]
    NotAnApproximation { eps: f64 },
    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    EnumerationBudgetExceeded { required: u128, budget: u128 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A function between finite sets, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MapTable {
    dom_size: usize,
    cod_size: usize,
    image: Vec<usize>,
}

impl MapTable {
    pub fn new(cod_size: usize, image: Vec<usize>) -> Result<Self, GhError> {
        if let Some((position, &index)) = image.iter().enumerate().find(|(_, &v)| v >= cod_size) {
            return Err(GhError::InvalidImage {
                position,
                index,
                cod: cod_size,
            });
        }
        Ok(Self {
            dom_size: image.len(),
            cod_size,
            image,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dom_size: n,
            cod_size: n,
            image: (0..n).collect(),
        }
    }

    pub fn constant(dom_size: usize, cod_size: usize, value: usize) -> Result<Self, GhError> {
        Self::new(cod_size, vec![value; dom_size])
    }

    pub fn dom_size(&self) -> usize {
        self.dom_size
    }

    pub fn cod_size(&self) -> usize {
        self.cod_size
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.image[p]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MapTable) -> Result<MapTable, GhError> {
        if next.dom_size != self.cod_size {
            return Err(GhError::SizeMismatch {
                dom: next.dom_size,
                cod: next.cod_size,
                x: self.cod_size,
                y: next.cod_size,
            });
        }
        Ok(MapTable {
            dom_size: self.dom_size,
            cod_size: next.cod_size,
            image: self.image.iter().map(|&p| next.image[p]).collect(),
        })
    }

    pub fn image_of(&self, set: &PointSet) -> PointSet {
        PointSet::new(self.cod_size, set.iter().map(|p| self.image[p]))
            .expect("image indices are validated")
    }

    pub fn full_image(&self) -> PointSet {
        PointSet::new(self.cod_size, self.image.iter().copied())
            .expect("image indices are validated")
    }

    pub fn is_permutation(&self) -> bool {
        self.dom_size == self.cod_size && self.full_image().len() == self.dom_size
    }

    /// Inverse of a permutation.
    pub fn inverse(&self) -> Option<MapTable> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0; self.dom_size];
        for (p, &q) in self.image.iter().enumerate() {
            inv[q] = p;
        }
        Some(MapTable {
            dom_size: self.dom_size,
            cod_size: self.cod_size,
            image: inv,
        })
    }

    pub(crate) fn check_spaces(
        &self,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> Result<(), GhError> {
        if self.dom_size != x.len() || self.cod_size != y.len() {
            return Err(GhError::SizeMismatch {
                dom: self.dom_size,
                cod: self.cod_size,
                x: x.len(),
                y: y.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxKind {
    Unpointed,
    Pointed,
    Multipointed,
}

/// A condition violation recorded by an approximation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// A pair whose distance is distorted by more than ε.
    Pair {
        a: usize,
        b: usize,
        domain_distance: f64,
        image_distance: f64,
    },
    /// A codomain point farther than ε from the image.
    Uncovered { point: usize, distance: f64 },
    /// The basepoint is not mapped to the target basepoint.
    Basepoint {
        index: usize,
        expected: usize,
        actual: usize,
    },
}

/// Ball radius used by a pointed check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointedApproxParams {
    pub eps: f64,
    /// `1/ε`, or the sample radius around the basepoint when `clamped`.
    pub radius: f64,
    /// `1/ε` exceeds the farthest sample point, so the ball is the whole sample.
    pub clamped: bool,
}

impl PointedApproxParams {
    pub fn new(eps: f64, sample_radius: f64) -> Self {
        let inv = 1.0 / eps;
        if inv > sample_radius {
            Self {
                eps,
                radius: sample_radius,
                clamped: true,
            }
        } else {
            Self {
                eps,
                radius: inv,
                clamped: false,
            }
        }
    }
}

/// Result of an ε-approximation check, with per-condition verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxCertificate {
    pub eps: f64,
    pub kind: ApproxKind,
    pub distortion_ok: bool,
    pub surjectivity_ok: bool,
    /// Always true for unpointed checks.
    pub basepoint_ok: bool,
    pub witnesses: Vec<Witness>,
    pub measured_distortion: f64,
    pub measured_covering_radius: f64,
    /// Pointed checks: ball radius per basepoint.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub balls: Vec<PointedApproxParams>,
    /// Pointed checks with `1/ε - ε ≤ 0`: the covering condition is vacuous.
    pub degenerate: bool,
    /// Multi-pointed checks: basepoint positions (1-based) with a failing condition.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failing_basepoints: Vec<usize>,
}

impl ApproxCertificate {
    pub fn is_valid(&self) -> bool {
        self.distortion_ok && self.surjectivity_ok && self.basepoint_ok
    }

    pub fn clamped(&self) -> bool {
        self.balls.iter().any(|b| b.clamped)
    }
}

fn pair_tol(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    x.tol().max(y.tol())
}

pub(crate) fn distortion_over(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    pts: &[usize],
) -> f64 {
    let mut worst = 0.0f64;
    for (k, &a) in pts.iter().enumerate() {
        for &b in &pts[k + 1..] {
            let v = (y.d(map.apply(a), map.apply(b)) - x.d(a, b)).abs();
            worst = worst.max(v);
        }
    }
    worst
}

/// Largest additive distortion `|d_Y(i a, i b) − d_X(a, b)|` over all pairs.
pub fn distortion(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, GhError> {
    map.check_spaces(x, y)?;
    let all: Vec<usize> = (0..x.len()).collect();
    Ok(distortion_over(map, x, y, &all))
}

/// Distortion restricted to pairs from `u`.
pub fn distortion_on(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    u: &PointSet,
) -> Result<f64, GhError> {
    map.check_spaces(x, y)?;
    if u.universe() != x.len() {
        return Err(MetricError::UniverseMismatch {
            set: u.universe(),
            space: x.len(),
        }
        .into());
    }
    Ok(distortion_over(map, x, y, u.as_slice()))
}

/// `max_y d(y, i(X))`.
pub fn covering_radius(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, GhError> {
    map.check_spaces(x, y)?;
    let img = map.full_image();
    Ok((0..y.len())
        .map(|q| y.dist_to_set(q, &img))
        .fold(0.0, f64::max))
}

fn check_eps(eps: f64) -> Result<(), GhError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(GhError::NonPositiveEps(eps))
    }
}

/// Checks `map ∈ App_ε(X, Y)`: distortion at most ε and every point of `Y`
/// within ε of the image.
pub fn is_gha(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    eps: f64,
) -> Result<ApproxCertificate, GhError> {
    check_eps(eps)?;
    map.check_spaces(x, y)?;
    let tol = pair_tol(x, y);
    let mut witnesses = Vec::new();
    let mut measured_distortion = 0.0f64;
    for a in 0..x.len() {
        for b in (a + 1)..x.len() {
            let dx = x.d(a, b);
            let dy = y.d(map.apply(a), map.apply(b));
            let v = (dy - dx).abs();
            measured_distortion = measured_distortion.max(v);
            if !le_tol(v, eps, tol) {
                witnesses.push(Witness::Pair {
                    a,
                    b,
                    domain_distance: dx,
                    image_distance: dy,
                });
            }
        }
    }
    let distortion_ok = le_tol(measured_distortion, eps, tol);
    let img = map.full_image();
    let mut measured_covering_radius = 0.0f64;
    for q in 0..y.len() {
        let dq = y.dist_to_set(q, &img);
        measured_covering_radius = measured_covering_radius.max(dq);
        if !le_tol(dq, eps, tol) {
            witnesses.push(Witness::Uncovered {
                point: q,
                distance: dq,
            });
        }
    }
    Ok(ApproxCertificate {
        eps,
        kind: ApproxKind::Unpointed,
        distortion_ok,
        surjectivity_ok: le_tol(measured_covering_radius, eps, tol),
        basepoint_ok: true,
        witnesses,
        measured_distortion,
        measured_covering_radius,
        balls: Vec::new(),
        degenerate: false,
        failing_basepoints: Vec::new(),
    })
}

/// ε-inverse of a certified ε-approximation: each `y` goes to an `x`
/// minimizing `d_Y(i(x), y)`, lowest index on ties.
pub fn eps_inverse(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    eps: f64,
) -> Result<MapTable, GhError> {
    if !is_gha(map, x, y, eps)?.is_valid() {
        return Err(GhError::NotAnApproximation { eps });
    }
    let image = (0..y.len())
        .map(|q| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for p in 0..x.len() {
                let d = y.d(map.apply(p), q);
                if d < best_d {
                    best_d = d;
                    best = p;
                }
            }
            best
        })
        .collect();
    MapTable::new(x.len(), image)
}

/// `max(dis(i), covering radius of i)`: the least ε with `i ∈ App_ε`.
pub(crate) fn gha_objective(
    image: &[usize],
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cutoff: f64,
) -> f64 {
    let n = x.len();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in (a + 1)..n {
            worst = worst.max((y.d(image[a], image[b]) - x.d(a, b)).abs());
        }
        if worst > cutoff {
            return worst;
        }
    }
    for q in 0..y.len() {
        let dq = image
            .iter()
            .map(|&p| y.d(p, q))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(dq);
        if worst > cutoff {
            return worst;
        }
    }
    worst
}

/// Optimal (or best found) approximation pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhSolution {
    pub value: f64,
    /// `i: X → Y`.
    pub forward: MapTable,
    /// `j: Y → X`.
    pub backward: MapTable,
    /// Least ε admitting `forward` alone.
    pub forward_value: f64,
    pub backward_value: f64,
}

fn best_one_way(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (f64, MapTable) {
    let mut best = f64::INFINITY;
    let mut arg = vec![0; x.len()];
    for_each_map(x.len(), y.len(), &[], |img| {
        let v = gha_objective(img, x, y, best);
        if v < best {
            best = v;
            arg.copy_from_slice(img);
        }
        true
    });
    (
        best,
        MapTable::new(y.len(), arg).expect("enumerated map is valid"),
    )
}

/// Exact GH distance by exhaustive search. The two directions decouple, so
/// the search visits `|Y|^|X| + |X|^|Y|` maps.
pub fn gh_exact(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    max_enum: u128,
) -> Result<GhSolution, GhError> {
    let required = map_count(x.len(), y.len(), 0).saturating_add(map_count(y.len(), x.len(), 0));
    if required > max_enum {
        return Err(GhError::EnumerationBudgetExceeded {
            required,
            budget: max_enum,
        });
    }
    let (fv, forward) = best_one_way(x, y);
    let (bv, backward) = best_one_way(y, x);
    Ok(GhSolution {
        value: fv.max(bv),
        forward,
        backward,
        forward_value: fv,
        backward_value: bv,
    })
}

const MAX_PASSES: usize = 200;

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn local_search_one_way(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    restart: usize,
    seed: u64,
) -> (f64, Vec<usize>) {
    let (n, m) = (x.len(), y.len());
    let mut rng = restart_rng(seed, restart);
    let mut image: Vec<usize> = if restart == 0 {
        (0..n).map(|p| p % m).collect()
    } else {
        (0..n).map(|_| rng.gen_range(0..m)).collect()
    };
    let mut current = gha_objective(&image, x, y, f64::INFINITY);
    let mut moves: Vec<(usize, usize)> = (0..n).flat_map(|p| (0..m).map(move |v| (p, v))).collect();
    for _ in 0..MAX_PASSES {
        moves.shuffle(&mut rng);
        let mut improved = false;
        for &(p, v) in &moves {
            if image[p] == v {
                continue;
            }
            let old = image[p];
            image[p] = v;
            let val = gha_objective(&image, x, y, current);
            if val <= current {
                improved |= val < current;
                current = val;
            } else {
                image[p] = old;
            }
        }
        if !improved {
            break;
        }
    }
    (current, image)
}

fn best_local(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    restarts: usize,
    seed: u64,
) -> (f64, MapTable) {
    let runs: Vec<(f64, Vec<usize>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| local_search_one_way(x, y, r, seed))
        .collect();
    // first restart wins ties, so the result matches a sequential run
    let (v, img) = runs
        .into_iter()
        .reduce(|best, cand| if cand.0 < best.0 { cand } else { best })
        .expect("at least one restart");
    (
        v,
        MapTable::new(y.len(), img).expect("search keeps images valid"),
    )
}

/// Upper bound on [`gh_exact`] by single-reassignment local search with random
/// restarts. Deterministic for a given seed. The first restart starts from the
/// index-wise map `k ↦ k mod |Y|`.
pub fn gh_upper(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    restarts: usize,
    seed: u64,
) -> GhSolution {
    let (fv, forward) = best_local(x, y, restarts, seed);
    let (bv, backward) = best_local(y, x, restarts, seed.wrapping_add(1));
    GhSolution {
        value: fv.max(bv),
        forward,
        backward,
        forward_value: fv,
        backward_value: bv,
    }
}

/// Correspondence-based distance together with the generating map pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhHatSolution {
    /// Half the least correspondence distortion.
    pub value: f64,
    pub correspondence_distortion: f64,
    pub forward: MapTable,
    pub backward: MapTable,
}

fn cross_distortion(
    i: &[usize],
    j: &[usize],
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cutoff: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for (p, &ip) in i.iter().enumerate() {
        for (q, &jq) in j.iter().enumerate() {
            worst = worst.max((x.d(p, jq) - y.d(ip, q)).abs());
        }
        if worst >= cutoff {
            return worst;
        }
    }
    worst
}

fn all_maps_by_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<(f64, Vec<usize>)> {
    let all: Vec<usize> = (0..x.len()).collect();
    let mut out = Vec::new();
    for_each_map(x.len(), y.len(), &[], |img| {
        let m = MapTable {
            dom_size: x.len(),
            cod_size: y.len(),
            image: img.to_vec(),
        };
        out.push((distortion_over(&m, x, y, &all), m.image));
        true
    });
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Exact correspondence distance `½ min dis(R)` over correspondences
/// `R = graph(i) ∪ graph(j)ᵀ`. Every correspondence contains one of these with
/// no larger distortion, so this is the minimum over all correspondences.
/// The pair search is pruned by the one-sided distortions; the budget counts
/// `|Y|^|X| · |X|^|Y|` pairs.
pub fn gh_hat_exact(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    max_enum: u128,
) -> Result<GhHatSolution, GhError> {
    let required =
        saturating_pow(y.len(), x.len()).saturating_mul(saturating_pow(x.len(), y.len()));
    if required > max_enum {
        return Err(GhError::EnumerationBudgetExceeded {
            required,
            budget: max_enum,
        });
    }
    let fwd = all_maps_by_distortion(x, y);
    let bwd = all_maps_by_distortion(y, x);
    let mut best = f64::INFINITY;
    let mut arg = (0usize, 0usize);
    for (a, (di, i)) in fwd.iter().enumerate() {
        if *di >= best {
            break;
        }
        for (b, (dj, j)) in bwd.iter().enumerate() {
            let base = di.max(*dj);
            if base >= best {
                break;
            }
            let total = base.max(cross_distortion(i, j, x, y, best));
            if total < best {
                best = total;
                arg = (a, b);
            }
        }
    }
    Ok(GhHatSolution {
        value: best / 2.0,
        correspondence_distortion: best,
        forward: MapTable::new(y.len(), fwd[arg.0].1.clone())?,
        backward: MapTable::new(x.len(), bwd[arg.1].1.clone())?,
    })
}

/// Evaluation of `d_GH ≤ 2·d̂_GH ≤ 3·d_GH` on one pair. Reported, not assumed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub gh: f64,
    pub gh_hat: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn gh_sandwich(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    max_enum: u128,
) -> Result<SandwichReport, GhError> {
    let gh = gh_exact(x, y, max_enum)?.value;
    let gh_hat = gh_hat_exact(x, y, max_enum)?.value;
    let tol = pair_tol(x, y);
    Ok(SandwichReport {
        gh,
        gh_hat,
        lower_holds: le_tol(gh, 2.0 * gh_hat, tol),
        upper_holds: le_tol(2.0 * gh_hat, 3.0 * gh, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{validate_metric, DEFAULT_TOL};

    fn space(m: Vec<Vec<f64>>) -> FiniteMetricSpace {
        validate_metric(&m, DEFAULT_TOL).unwrap()
    }

    fn two(d: f64) -> FiniteMetricSpace {
        space(vec![vec![0.0, d], vec![d, 0.0]])
    }

    fn path3() -> FiniteMetricSpace {
        space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
    }

    fn point() -> FiniteMetricSpace {
        space(vec![vec![0.0]])
    }

    #[test]
    fn distortion_examples() {
        let p = path3();
        assert_eq!(distortion(&MapTable::identity(3), &p, &p).unwrap(), 0.0);
        let t = two(1.0);
        assert_eq!(
            distortion(&MapTable::constant(2, 2, 0).unwrap(), &t, &t).unwrap(),
            1.0
        );
        let m = MapTable::new(2, vec![0, 0, 1]).unwrap();
        assert_eq!(distortion(&m, &p, &t).unwrap(), 1.0);
        assert_eq!(
            distortion_on(&m, &p, &t, &p.set([1, 2]).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(
            distortion_on(&m, &p, &t, &p.set([2]).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(distortion_on(&m, &p, &t, &p.all()).unwrap(), 1.0);
        assert!(matches!(
            distortion(&m, &t, &p),
            Err(GhError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn gha_examples() {
        let p = path3();
        assert!(is_gha(&MapTable::identity(3), &p, &p, 0.01)
            .unwrap()
            .is_valid());
        let t = two(1.0);
        let c = is_gha(&MapTable::constant(2, 2, 0).unwrap(), &t, &t, 0.5).unwrap();
        assert!(!c.surjectivity_ok);
        assert!(c.witnesses.contains(&Witness::Uncovered {
            point: 1,
            distance: 1.0
        }));
        let c = is_gha(&MapTable::constant(2, 1, 0).unwrap(), &t, &point(), 1.1).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.measured_distortion, 1.0);
        assert!(matches!(
            is_gha(&MapTable::identity(3), &p, &p, 0.0),
            Err(GhError::NonPositiveEps(_))
        ));
    }

    #[test]
    fn eps_inverse_examples() {
        let p = path3();
        let rev = MapTable::new(3, vec![2, 1, 0]).unwrap();
        let inv = eps_inverse(&rev, &p, &p, 0.1).unwrap();
        assert_eq!(inv.image(), &[2, 1, 0]);

        let t = two(1.0);
        let pt = point();
        let c = MapTable::constant(2, 1, 0).unwrap();
        let inv = eps_inverse(&c, &t, &pt, 1.1).unwrap();
        assert_eq!(inv.image(), &[0]);
        let round = c.then(&inv).unwrap();
        for q in 0..2 {
            assert!(t.d(round.apply(q), q) <= t.diameter());
            assert!(t.d(round.apply(q), q) <= 3.0 * 1.1);
        }
        assert!(matches!(
            eps_inverse(&c, &t, &pt, 0.5),
            Err(GhError::NotAnApproximation { .. })
        ));
    }

    #[test]
    fn gh_exact_examples() {
        let p = path3();
        assert_eq!(gh_exact(&p, &p, DEFAULT_MAX_ENUM).unwrap().value, 0.0);
        assert_eq!(gh_exact(&p, &point(), DEFAULT_MAX_ENUM).unwrap().value, 2.0);
        // enumeration of the 8 map pairs: bijections give 1, constants give 2
        assert_eq!(
            gh_exact(&two(1.0), &two(2.0), DEFAULT_MAX_ENUM)
                .unwrap()
                .value,
            1.0
        );
        assert!(matches!(
            gh_exact(&p, &p, 10),
            Err(GhError::EnumerationBudgetExceeded {
                required: 54,
                budget: 10
            })
        ));
    }

    #[test]
    fn gh_upper_examples() {
        let p = path3();
        assert_eq!(gh_upper(&p, &p, 1, 7).value, 0.0);
        assert_eq!(gh_upper(&p, &point(), 4, 7).value, 2.0);
        assert_eq!(gh_upper(&p, &two(1.0), 8, 3), gh_upper(&p, &two(1.0), 8, 3));
    }

    #[test]
    fn gh_hat_examples() {
        let p = path3();
        assert_eq!(gh_hat_exact(&p, &p, DEFAULT_MAX_ENUM).unwrap().value, 0.0);
        assert_eq!(
            gh_hat_exact(&p, &point(), DEFAULT_MAX_ENUM).unwrap().value,
            1.0
        );
        let r = gh_sandwich(&two(1.0), &two(2.0), DEFAULT_MAX_ENUM).unwrap();
        assert!(r.lower_holds && r.upper_holds);
        assert_eq!(r.gh_hat, 0.5);
    }

    #[test]
    fn map_table_ops() {
        assert!(matches!(
            MapTable::new(2, vec![0, 2]),
            Err(GhError::InvalidImage { .. })
        ));
        let swap = MapTable::new(2, vec![1, 0]).unwrap();
        assert!(swap.is_permutation());
        assert_eq!(swap.then(&swap).unwrap(), MapTable::identity(2));
        assert_eq!(swap.inverse().unwrap(), swap);
        assert!(MapTable::constant(2, 2, 0).unwrap().inverse().is_none());
    }
}
