//! Pseudo-orbits, tracing, expansivity and the conjugacy built from unique
//! shadowing points.
//!
//! Orbit quantifiers over `n ∈ ℤ` run over a finite window `[−N, N]`. For a
//! non-invertible map negative offsets are unavailable and the window is
//! one-sided, `[0, N]`; reports flag this. The tracing and pseudo-orbit
//! inequalities are strict and are evaluated robustly: `a < b` holds only
//! when `a < b − tol`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{pgh0_distance, pgh0_pair_bound, DynError, SelfMapSystem};
use crate::gh::{distortion_over, ApproxCertificate, GhError, MapTable, DEFAULT_MAX_ENUM};
use crate::metric::{lt_tol, FiniteMetricSpace, PointSet};
use crate::pointed::{critical_values, is_pointed_gha, PointedProblem};
use crate::search::map_count;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("scale function values must be finite and positive")]
    InvalidScale,
    #[error("scale function has {got} values for a space of {expected} points")]
    ScaleLength { expected: usize, got: usize },
    #[error("invalid pseudo-orbit: {0}")]
    InvalidOrbit(String),
    #[error("negative offsets need an invertible map")]
    NonInvertibleNegativeOffset,
    #[error("map is not invertible")]
    NonInvertible,
    #[error("no separation of point {x0} within |n| < {n_max}")]
    NoSeparationWithinBudget { x0: usize, n_max: usize },
    #[error("pseudo-orbit from q = {q} violates the step bound at offset {n}")]
    PseudoOrbitViolation { q: usize, n: i64 },
    #[error("more than one shadowing point for q in {points:?}")]
    NonUniqueShadowing { points: Vec<usize> },
    #[error("no shadowing point for q in {points:?}")]
    NoTracer { points: Vec<usize> },
    #[error("j is not a pointed {delta}-approximation with small semi-conjugacy defect")]
    NotCertified { delta: f64 },
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Gh(#[from] GhError),
}

/// A strictly positive function on the points of a space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleFunction {
    values: Vec<f64>,
}

impl ScaleFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, StabilityError> {
        if values.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(Self { values })
        } else {
            Err(StabilityError::InvalidScale)
        }
    }

    pub fn constant(n: usize, c: f64) -> Result<Self, StabilityError> {
        Self::new(vec![c; n])
    }

    pub fn at(&self, p: usize) -> f64 {
        self.values[p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn check(&self, space: &FiniteMetricSpace) -> Result<(), StabilityError> {
        if self.values.len() == space.len() {
            Ok(())
        } else {
            Err(StabilityError::ScaleLength {
                expected: space.len(),
                got: self.values.len(),
            })
        }
    }
}

/// Points `x_n` for offsets `n_min ≤ n ≤ n_max` with `n_min ≤ 0 ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoOrbit {
    n_min: i64,
    n_max: i64,
    points: Vec<usize>,
}

impl PseudoOrbit {
    pub fn new(n_min: i64, n_max: i64, points: Vec<usize>) -> Result<Self, StabilityError> {
        if n_min > 0 || n_max < 0 {
            return Err(StabilityError::InvalidOrbit(format!(
                "window [{n_min}, {n_max}] must contain 0"
            )));
        }
        if points.len() as i64 != n_max - n_min + 1 {
            return Err(StabilityError::InvalidOrbit(format!(
                "{} points for a window of {} offsets",
                points.len(),
                n_max - n_min + 1
            )));
        }
        Ok(Self {
            n_min,
            n_max,
            points,
        })
    }

    /// The true orbit of `x0` over `[n_min, n_max]`.
    pub fn true_orbit(
        f: &SelfMapSystem,
        x0: usize,
        n_min: i64,
        n_max: i64,
    ) -> Result<Self, StabilityError> {
        let inv = inverse_for(f, n_min)?;
        let points = (n_min..=n_max)
            .map(|n| iterate(f, inv.as_ref(), x0, n))
            .collect();
        Self::new(n_min, n_max, points)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn at(&self, n: i64) -> usize {
        self.points[(n - self.n_min) as usize]
    }

    fn check(&self, space: &FiniteMetricSpace) -> Result<(), StabilityError> {
        match self.points.iter().find(|&&p| p >= space.len()) {
            Some(p) => Err(StabilityError::InvalidOrbit(format!(
                "point {p} out of range"
            ))),
            None => Ok(()),
        }
    }
}

fn inverse_for(f: &SelfMapSystem, n_min: i64) -> Result<Option<MapTable>, StabilityError> {
    if n_min >= 0 {
        return Ok(None);
    }
    f.inverse()
        .map(Some)
        .ok_or(StabilityError::NonInvertibleNegativeOffset)
}

fn iterate(f: &SelfMapSystem, inv: Option<&MapTable>, p: usize, n: i64) -> usize {
    if n >= 0 {
        f.iterate(p, n as usize)
    } else {
        let inv = inv.expect("inverse available for negative offsets");
        (0..(-n)).fold(p, |q, _| inv.apply(q))
    }
}

/// `f^n(p)` for every point and every offset of a window.
struct OrbitTable {
    n_min: i64,
    width: usize,
    table: Vec<usize>,
}

impl OrbitTable {
    fn new(f: &SelfMapSystem, n_min: i64, n_max: i64) -> Result<Self, StabilityError> {
        let inv = inverse_for(f, n_min)?;
        let width = (n_max - n_min + 1) as usize;
        let mut table = vec![0; f.len() * width];
        for p in 0..f.len() {
            let row = &mut table[p * width..(p + 1) * width];
            let zero = (-n_min) as usize;
            row[zero] = p;
            for k in zero + 1..width {
                row[k] = f.apply(row[k - 1]);
            }
            if let Some(inv) = &inv {
                for k in (0..zero).rev() {
                    row[k] = inv.apply(row[k + 1]);
                }
            }
        }
        Ok(Self {
            n_min,
            width,
            table,
        })
    }

    fn row(&self, p: usize) -> &[usize] {
        &self.table[p * self.width..(p + 1) * self.width]
    }
}

/// One violated inequality along an orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitWitness {
    pub offset: i64,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateReport {
    pub holds: bool,
    pub witnesses: Vec<OrbitWitness>,
}

/// Checks `d(f(x_n), x_{n+1}) < δ(f(x_n))` for every consecutive pair.
pub fn is_pseudo_orbit(
    orbit: &PseudoOrbit,
    f: &SelfMapSystem,
    delta: &ScaleFunction,
) -> Result<PredicateReport, StabilityError> {
    if orbit.points.len() < 2 {
        return Err(StabilityError::InvalidOrbit(
            "window needs at least two offsets".into(),
        ));
    }
    orbit.check(&f.space)?;
    delta.check(&f.space)?;
    let tol = f.space.tol();
    let witnesses: Vec<OrbitWitness> = (orbit.n_min..orbit.n_max)
        .filter_map(|n| {
            let fx = f.apply(orbit.at(n));
            let distance = f.space.d(fx, orbit.at(n + 1));
            let bound = delta.at(fx);
            (!lt_tol(distance, bound, tol)).then_some(OrbitWitness {
                offset: n,
                distance,
                bound,
            })
        })
        .collect();
    Ok(PredicateReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Checks `d(f^n(x), x_n) < ε(f^n(x))` for every offset of the window.
pub fn traces(
    point: usize,
    orbit: &PseudoOrbit,
    f: &SelfMapSystem,
    eps: &ScaleFunction,
) -> Result<PredicateReport, StabilityError> {
    orbit.check(&f.space)?;
    eps.check(&f.space)?;
    f.space.check_index(point).map_err(DynError::from)?;
    let inv = inverse_for(f, orbit.n_min)?;
    let tol = f.space.tol();
    let witnesses: Vec<OrbitWitness> = (orbit.n_min..=orbit.n_max)
        .filter_map(|n| {
            let fx = iterate(f, inv.as_ref(), point, n);
            let distance = f.space.d(fx, orbit.at(n));
            let bound = eps.at(fx);
            (!lt_tol(distance, bound, tol)).then_some(OrbitWitness {
                offset: n,
                distance,
                bound,
            })
        })
        .collect();
    Ok(PredicateReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowReport {
    pub orbit: PseudoOrbit,
    pub tracers: PointSet,
    pub unique: bool,
    pub eps_used: ScaleFunction,
}

fn tracers_with(
    table: &OrbitTable,
    orbit: &PseudoOrbit,
    space: &FiniteMetricSpace,
    eps: &ScaleFunction,
) -> Vec<usize> {
    let tol = space.tol();
    let start = (orbit.n_min - table.n_min) as usize;
    (0..space.len())
        .filter(|&p| {
            let row = &table.row(p)[start..start + orbit.points.len()];
            row.iter()
                .zip(&orbit.points)
                .all(|(&fx, &xn)| lt_tol(space.d(fx, xn), eps.at(fx), tol))
        })
        .collect()
}

/// Every point tracing `orbit`, by exhaustive scan.
pub fn shadowing_points(
    orbit: &PseudoOrbit,
    f: &SelfMapSystem,
    eps: &ScaleFunction,
) -> Result<ShadowReport, StabilityError> {
    orbit.check(&f.space)?;
    eps.check(&f.space)?;
    let table = OrbitTable::new(f, orbit.n_min, orbit.n_max)?;
    let found = tracers_with(&table, orbit, &f.space, eps);
    Ok(ShadowReport {
        orbit: orbit.clone(),
        unique: found.len() == 1,
        tracers: f.space.set(found).expect("indices in range"),
        eps_used: eps.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansivityEstimate {
    /// `e(x) = min_{y ≠ x} max_{|n| < N} d(f^n x, f^n y)`.
    pub values: Vec<f64>,
    /// `min_x e(x)`.
    pub constant: f64,
    /// Every point separates from its nearest neighbour by more than their
    /// initial distance; false for maps that never spread points apart,
    /// such as the identity.
    pub feasible: bool,
    pub window: usize,
}

impl ExpansivityEstimate {
    pub fn scale(&self) -> Result<ScaleFunction, StabilityError> {
        ScaleFunction::new(self.values.clone())
    }
}

/// Per-point separation constant over offsets `|n| < window`. On a finite
/// space every pair already separates at `n = 0`, so the estimate is only
/// called feasible when the dynamics amplify the nearest-neighbour distance
/// at every point.
pub fn estimate_expansivity(
    f: &SelfMapSystem,
    window: usize,
) -> Result<ExpansivityEstimate, StabilityError> {
    if !f.bijective {
        return Err(StabilityError::NonInvertible);
    }
    let w = window.max(1) as i64 - 1;
    let table = OrbitTable::new(f, -w, w)?;
    let s = &f.space;
    let tol = s.tol();
    let per_point: Vec<(f64, bool)> = (0..s.len())
        .into_par_iter()
        .map(|x| {
            let rx = table.row(x);
            let mut e = f64::INFINITY;
            let mut nearest = f64::INFINITY;
            for y in (0..s.len()).filter(|&y| y != x) {
                let sep = rx
                    .iter()
                    .zip(table.row(y))
                    .map(|(&a, &b)| s.d(a, b))
                    .fold(0.0, f64::max);
                e = e.min(sep);
                nearest = nearest.min(s.d(x, y));
            }
            (e, e > nearest + tol)
        })
        .collect();
    let values: Vec<f64> = per_point.iter().map(|v| v.0).collect();
    let constant = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ExpansivityEstimate {
        feasible: s.len() > 1 && per_point.iter().all(|v| v.1),
        values,
        constant,
        window: window.max(1),
    })
}

/// A scale function `γ` with `γ(x) < inf{α(y) : y ∈ B(x, γ(x))}` at every
/// point, by descending iteration from `α`.
pub fn gamma_from(
    alpha: &ScaleFunction,
    space: &FiniteMetricSpace,
) -> Result<ScaleFunction, StabilityError> {
    alpha.check(space)?;
    let theta = 1.0 - space.tol();
    let mut gamma = alpha.values.clone();
    loop {
        let next: Vec<f64> = (0..space.len())
            .map(|x| {
                let inf = space
                    .ball(x, gamma[x])
                    .iter()
                    .map(|y| alpha.at(y))
                    .fold(f64::INFINITY, f64::min);
                gamma[x].min(theta * inf)
            })
            .collect();
        if next == gamma {
            return ScaleFunction::new(gamma);
        }
        gamma = next;
    }
}

/// Checks the inequality defining [`gamma_from`]'s output at every point.
pub fn gamma_condition_holds(
    gamma: &ScaleFunction,
    alpha: &ScaleFunction,
    space: &FiniteMetricSpace,
) -> bool {
    (0..space.len()).all(|x| {
        (0..space.len())
            .filter(|&y| space.d(x, y) < gamma.at(x))
            .all(|y| gamma.at(x) < alpha.at(y))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexamples: Vec<(usize, usize)>,
}

/// Checks `d(x, y) < max{γ(x), γ(y)} ⟹ d(x, y) < ε(x)` on `pairs`, or on all
/// ordered pairs.
pub fn gamma_implication_check(
    space: &FiniteMetricSpace,
    gamma: &ScaleFunction,
    eps: &ScaleFunction,
    pairs: Option<&[(usize, usize)]>,
) -> Result<ImplicationReport, StabilityError> {
    gamma.check(space)?;
    eps.check(space)?;
    let n = space.len();
    let all: Vec<(usize, usize)>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            all = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
            &all
        }
    };
    let counterexamples: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| {
            let d = space.d(x, y);
            d < gamma.at(x).max(gamma.at(y)) && d >= eps.at(x)
        })
        .collect();
    Ok(ImplicationReport {
        holds: counterexamples.is_empty(),
        checked: pairs.len(),
        counterexamples,
    })
}

/// Smallest `N ≤ n_max` such that every `y` with `d(x0, y) ≥ λ(x0)` has
/// `d(f^n x0, f^n y) ≥ e(f^n x0)` for some `|n| < N`.
pub fn separation_time(
    f: &SelfMapSystem,
    x0: usize,
    lambda: &ScaleFunction,
    e: &ScaleFunction,
    n_max: usize,
) -> Result<usize, StabilityError> {
    if !f.bijective {
        return Err(StabilityError::NonInvertible);
    }
    lambda.check(&f.space)?;
    e.check(&f.space)?;
    f.space.check_index(x0).map_err(DynError::from)?;
    let s = &f.space;
    let inv = f.inverse().expect("bijective");
    let far: Vec<usize> = (0..s.len())
        .filter(|&y| s.d(x0, y) >= lambda.at(x0))
        .collect();
    // first |n| at which each far point separates
    let mut first = vec![usize::MAX; far.len()];
    let (mut fx, mut bx) = (x0, x0);
    let mut fy: Vec<usize> = far.clone();
    let mut by: Vec<usize> = far.clone();
    for k in 0..n_max {
        for (i, slot) in first.iter_mut().enumerate() {
            if *slot == usize::MAX && (s.d(fx, fy[i]) >= e.at(fx) || s.d(bx, by[i]) >= e.at(bx)) {
                *slot = k;
            }
        }
        if first.iter().all(|&v| v != usize::MAX) {
            return Ok(k + 1);
        }
        fx = f.apply(fx);
        bx = inv.apply(bx);
        for i in 0..far.len() {
            fy[i] = f.apply(fy[i]);
            by[i] = inv.apply(by[i]);
        }
    }
    if far.is_empty() && n_max > 0 {
        return Ok(1);
    }
    Err(StabilityError::NoSeparationWithinBudget { x0, n_max })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationStep {
    pub eps_bar: f64,
    pub unique: usize,
    pub none: usize,
    pub multiple: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    /// Smallest scanned value giving exactly one tracer on every orbit.
    pub eps_bar: Option<f64>,
    pub steps: Vec<CalibrationStep>,
}

/// Scans constant tracing scales at the midpoints between consecutive
/// distance values (and half the smallest one), ascending, and returns the
/// first at which every orbit has exactly one tracer.
pub fn calibrate_eps_bar(
    f: &SelfMapSystem,
    orbits: &[PseudoOrbit],
) -> Result<Calibration, StabilityError> {
    let n_min = orbits.iter().map(|o| o.n_min).min().unwrap_or(0);
    let n_max = orbits.iter().map(|o| o.n_max).max().unwrap_or(0);
    for o in orbits {
        o.check(&f.space)?;
    }
    let table = OrbitTable::new(f, n_min, n_max)?;
    let dv = f.space.distance_values();
    let mut scan = Vec::with_capacity(dv.len());
    if let Some(&first) = dv.first() {
        scan.push(first / 2.0);
    }
    scan.extend(dv.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    let mut steps = Vec::new();
    for e in scan {
        let scale = ScaleFunction::constant(f.len(), e)?;
        let counts: Vec<usize> = orbits
            .par_iter()
            .map(|o| tracers_with(&table, o, &f.space, &scale).len())
            .collect();
        let step = CalibrationStep {
            eps_bar: e,
            unique: counts.iter().filter(|&&c| c == 1).count(),
            none: counts.iter().filter(|&&c| c == 0).count(),
            multiple: counts.iter().filter(|&&c| c > 1).count(),
        };
        let done = step.unique == orbits.len();
        steps.push(step);
        if done {
            return Ok(Calibration {
                eps_bar: Some(e),
                steps,
            });
        }
    }
    Ok(Calibration {
        eps_bar: None,
        steps,
    })
}

/// Inputs of [`build_conjugacy`].
#[derive(Debug, Clone)]
pub struct ConjugacyParams {
    /// Pseudo-orbit bound, a scale function on the domain of `f`.
    pub delta: ScaleFunction,
    /// Target closeness, a scale function on the domain of `f`.
    pub eps: ScaleFunction,
    pub window: usize,
    /// Constant tracing scale; defaults to `¼·min{min ε, min γ}` with `γ`
    /// derived from the expansivity estimate.
    pub eps_bar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyResult {
    pub h: MapTable,
    /// `B(y, 1/δ)` with `δ = δ(f(x))`.
    pub ball: PointSet,
    pub delta: f64,
    pub eps_bar: f64,
    pub eps_bar_source: String,
    pub window: usize,
    pub one_sided: bool,
    /// `max d(f(h(q)), h(g(q)))` over `q` in the ball with `g(q)` in the ball.
    pub defect: f64,
    /// The same over `q` in the ball with `g(q)` outside it, where `h = j`.
    pub boundary_defect: f64,
    /// `max_{q ∈ ball} d(h(q), j(q))`.
    pub max_dist_to_j: f64,
    /// Distortion of `h` on the ball.
    pub distortion: f64,
    /// `distortion < min ε`.
    pub distortion_ok: bool,
    /// `h` as a pointed approximation at `min ε`.
    pub certificate: ApproxCertificate,
    pub j_certificate_eps: f64,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

fn default_eps_bar(
    f: &SelfMapSystem,
    eps: &ScaleFunction,
    window: usize,
    warnings: &mut Vec<String>,
) -> Result<(f64, String), StabilityError> {
    if f.bijective {
        let est = estimate_expansivity(f, window)?;
        if est.feasible {
            let gamma = gamma_from(&est.scale()?, &f.space)?;
            return Ok((
                0.25 * eps.min().min(gamma.min()),
                format!(
                    "quarter of min(eps, gamma) with expansivity constant {} over |n| < {window}",
                    est.constant
                ),
            ));
        }
    }
    warnings
        .push("expansivity estimate infeasible; eps_bar falls back to a quarter of min eps".into());
    Ok((0.25 * eps.min(), "quarter of min eps".into()))
}

/// Builds `h: Y → X` by sending each `q ∈ B(y, 1/δ)` to the unique point
/// tracing the pseudo-orbit `n ↦ j(g^n(q))` at scale `ε̄`; `h = j` off the
/// ball. Requires `j` to be a pointed `δ`-approximation with semi-conjugacy
/// defect at most `δ`, where `δ = δ(f(x))`.
pub fn build_conjugacy(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    j: &MapTable,
    params: &ConjugacyParams,
) -> Result<ConjugacyResult, StabilityError> {
    j.check_spaces(&g.space, &f.space)?;
    params.delta.check(&f.space)?;
    params.eps.check(&f.space)?;
    let (x, y) = (f.basepoint()?, g.basepoint()?);
    let delta = params.delta.at(f.apply(x));
    let mut warnings = Vec::new();

    let problem = PointedProblem::new(&g.space, y, &f.space, x, Some((&g.map, &f.map)));
    if !problem.map_feasibility(j.image(), &[delta])[0] {
        return Err(StabilityError::NotCertified { delta });
    }

    let one_sided = !(f.bijective && g.bijective);
    if one_sided {
        warnings.push("non-invertible map: one-sided window [0, N]".into());
    }
    let w = params.window as i64;
    let n_min = if one_sided { 0 } else { -w };
    let (eps_bar, source) = match params.eps_bar {
        Some(e) => (e, "supplied".to_string()),
        None => default_eps_bar(f, &params.eps, params.window, &mut warnings)?,
    };
    let scale = ScaleFunction::constant(f.len(), eps_bar)?;
    let f_table = OrbitTable::new(f, n_min, w)?;
    let g_table = OrbitTable::new(g, n_min, w)?;
    let ball = g.space.ball(y, 1.0 / delta);

    enum Outcome {
        Unique(usize),
        None,
        Many,
        Violation(i64),
    }
    let outcomes: Vec<Outcome> = ball
        .as_slice()
        .par_iter()
        .map(|&q| {
            let points: Vec<usize> = g_table.row(q).iter().map(|&p| j.apply(p)).collect();
            let orbit = PseudoOrbit::new(n_min, w, points).expect("window is consistent");
            let tol = f.space.tol();
            for n in n_min..w {
                let fx = f.apply(orbit.at(n));
                if !lt_tol(f.space.d(fx, orbit.at(n + 1)), params.delta.at(fx), tol) {
                    return Outcome::Violation(n);
                }
            }
            match tracers_with(&f_table, &orbit, &f.space, &scale).as_slice() {
                [p] => Outcome::Unique(*p),
                [] => Outcome::None,
                _ => Outcome::Many,
            }
        })
        .collect();

    let mut image = j.image().to_vec();
    let (mut none, mut many) = (Vec::new(), Vec::new());
    for (&q, o) in ball.as_slice().iter().zip(&outcomes) {
        match *o {
            Outcome::Unique(p) => image[q] = p,
            Outcome::None => none.push(q),
            Outcome::Many => many.push(q),
            Outcome::Violation(n) => return Err(StabilityError::PseudoOrbitViolation { q, n }),
        }
    }
    if !many.is_empty() {
        return Err(StabilityError::NonUniqueShadowing { points: many });
    }
    if !none.is_empty() {
        return Err(StabilityError::NoTracer { points: none });
    }
    let h = MapTable::new(f.len(), image).expect("tracers are valid points");

    let (mut defect, mut boundary_defect, mut max_dist_to_j) = (0.0f64, 0.0f64, 0.0f64);
    for q in ball.iter() {
        let v = f.space.d(f.apply(h.apply(q)), h.apply(g.apply(q)));
        if ball.contains(g.apply(q)) {
            defect = defect.max(v);
        } else {
            boundary_defect = boundary_defect.max(v);
        }
        max_dist_to_j = max_dist_to_j.max(f.space.d(h.apply(q), j.apply(q)));
    }
    let distortion = distortion_over(&h, &g.space, &f.space, ball.as_slice());
    let eps_min = params.eps.min();
    let certificate =
        is_pointed_gha(&h, &g.pointed()?, &f.pointed()?, eps_min).map_err(DynError::from)?;
    Ok(ConjugacyResult {
        h,
        ball,
        delta,
        eps_bar,
        eps_bar_source: source,
        window: params.window,
        one_sided,
        defect,
        boundary_defect,
        max_dist_to_j,
        distortion,
        distortion_ok: distortion < eps_min,
        certificate,
        j_certificate_eps: delta,
        notes: vec!["tracing uses the constant scale eps_bar at every offset".into()],
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    Exact,
    PairBound,
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StabilityVerdict {
    /// A semi-conjugacy in `App_ε` was built on the sample.
    Stable,
    /// The distance is not below `δ(f(x))`; the instance says nothing.
    NotClose,
    /// The pipeline could not decide, with the reason.
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub distance: Option<f64>,
    pub distance_source: DistanceSource,
    pub delta_at_fx: f64,
    pub conjugacy: Option<ConjugacyResult>,
    pub verdict: StabilityVerdict,
}

/// Options for [`stability_report`].
#[derive(Debug, Clone)]
pub struct StabilitySearch {
    pub max_enum: u128,
    /// Approximations used when the exact distance is out of budget, and
    /// `j` for the conjugacy.
    pub i: Option<MapTable>,
    pub j: Option<MapTable>,
}

impl Default for StabilitySearch {
    fn default() -> Self {
        Self {
            max_enum: DEFAULT_MAX_ENUM,
            i: None,
            j: None,
        }
    }
}

/// End-to-end instance check: measures the pointed C⁰-GH distance, and when
/// it is below `δ(f(x))` builds the conjugacy and checks it.
pub fn stability_report(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    params: &ConjugacyParams,
    search: &StabilitySearch,
) -> Result<StabilityReport, StabilityError> {
    let x = f.basepoint()?;
    let delta_at_fx = params.delta.at(f.apply(x));
    let required = map_count(f.len(), g.len(), 1).saturating_add(map_count(g.len(), f.len(), 1));
    let mut exact_j = None;
    let (distance, source) = if required <= search.max_enum {
        let d = pgh0_distance(f, g, search.max_enum, &[])?;
        exact_j = Some(d.interval.backward.clone());
        (Some(d.interval.upper), DistanceSource::Exact)
    } else if let (Some(i), Some(j)) = (&search.i, &search.j) {
        match pgh0_pair_bound(i, j, f, g)? {
            Some(v) => (Some(v), DistanceSource::PairBound),
            None => (None, DistanceSource::Unavailable),
        }
    } else {
        (None, DistanceSource::Unavailable)
    };
    let inconclusive = |reason: String, conjugacy| StabilityReport {
        distance,
        distance_source: source,
        delta_at_fx,
        conjugacy,
        verdict: StabilityVerdict::Inconclusive { reason },
    };
    let Some(dist) = distance else {
        return Ok(inconclusive(
            "distance not available within budget".into(),
            None,
        ));
    };
    if dist >= delta_at_fx {
        return Ok(StabilityReport {
            distance,
            distance_source: source,
            delta_at_fx,
            conjugacy: None,
            verdict: StabilityVerdict::NotClose,
        });
    }
    let Some(j) = search.j.clone().or(exact_j) else {
        return Ok(inconclusive("no approximation j available".into(), None));
    };
    match build_conjugacy(f, g, &j, params) {
        Ok(c) => {
            let tol = f.space.tol();
            if c.defect <= tol && c.distortion_ok {
                Ok(StabilityReport {
                    distance,
                    distance_source: source,
                    delta_at_fx,
                    conjugacy: Some(c),
                    verdict: StabilityVerdict::Stable,
                })
            } else {
                let reason = format!(
                    "defect {} and distortion {} on the sample",
                    c.defect, c.distortion
                );
                Ok(inconclusive(reason, Some(c)))
            }
        }
        Err(
            e @ (StabilityError::NonUniqueShadowing { .. }
            | StabilityError::NoTracer { .. }
            | StabilityError::PseudoOrbitViolation { .. }
            | StabilityError::NotCertified { .. }),
        ) => Ok(inconclusive(e.to_string(), None)),
        Err(e) => Err(e),
    }
}

/// Candidate ε values at which a single map pair is evaluated by
/// [`pgh0_pair_bound`]; exposed for reporting.
pub fn pair_bound_candidates(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
) -> Result<Vec<f64>, StabilityError> {
    Ok(critical_values(
        &f.space,
        f.basepoint()?,
        &g.space,
        g.basepoint()?,
        &[],
    ))
}
