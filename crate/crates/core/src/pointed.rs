//! Pointed and multi-pointed ε-approximations, the pointed GH distance and
//! the checks built on them: ball inclusions, the factor-2 triangle
//! inequality, Lipschitz/co-Lipschitz maps and pointed convergence of
//! sequences of spaces, points and maps.
//!
//! A map `i: (X, x) → (Y, y)` is a pointed ε-approximation when
//!
//! 1. `i(x) = y`,
//! 2. the distortion of `i` on `B(x, 1/ε)` is at most ε,
//! 3. every point of `B(y, 1/ε − ε)` lies within ε of `i(B(x, 1/ε))`.
//!
//! Balls are open and the ε-bounds closed, so for every fixed map the set of
//! admissible ε is a finite union of intervals `[c, c')` whose endpoints are
//! drawn from a finite set of critical values (distances, distance
//! differences, reciprocals `1/d` and roots of `1/ε − ε = d`). The pointed
//! distance is therefore found exactly by testing every critical value.
//! Feasibility need not be monotone in ε, so each candidate is tested on its
//! own and non-monotone gaps are reported.

use serde::Serialize;
use thiserror::Error;

use crate::gh::{
    distortion_over, ApproxCertificate, ApproxKind, GhError, MapTable, PointedApproxParams, Witness,
};
use crate::metric::{le_tol, lt_tol, FiniteMetricSpace, MetricError, PointSet, PointedSpace};
use crate::search::{for_each_map, map_count};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointedError {
    #[error("expected single-pointed spaces")]
    NotSinglePointed,
    #[error("basepoint counts differ: {0} vs {1}")]
    BasepointCountMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("map is not a pointed {0}-approximation")]
    NotCertified(f64),
    #[error("no certified approximation found for entry {0}")]
    SearchFailed(usize),
    #[error("sequence has {entries} entries but {other} {what}")]
    LengthMismatch {
        entries: usize,
        other: usize,
        what: &'static str,
    },
    #[error("sequence carries no approximation maps")]
    MissingMaps,
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn pair_tol(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    x.tol().max(y.tol())
}

/// Positive root of `ε² + dε − 1 = 0`, i.e. the ε with `1/ε − ε = d`.
pub(crate) fn inner_radius_root(d: f64) -> f64 {
    (-d + (d * d + 4.0).sqrt()) / 2.0
}

/// Sorted critical values for pointed problems between `(x, xb)` and
/// `(y, yb)`, plus `extra` grid values. The first entry is a representative
/// of the interval below the smallest critical value; feasibility there
/// means the infimum is 0. Symmetric in the two spaces.
pub(crate) fn critical_values(
    x: &FiniteMetricSpace,
    xb: usize,
    y: &FiniteMetricSpace,
    yb: usize,
    extra: &[f64],
) -> Vec<f64> {
    let mut dx = x.distance_values();
    let mut dy = y.distance_values();
    let mut out = Vec::with_capacity((dx.len() + 1) * (dy.len() + 1) + 4 * (x.len() + y.len()));
    out.extend_from_slice(&dx);
    out.extend_from_slice(&dy);
    dx.push(0.0);
    dy.push(0.0);
    for &a in &dx {
        for &b in &dy {
            out.push((a - b).abs());
        }
    }
    out.push(inner_radius_root(0.0));
    for &d in x.row(xb).iter().chain(y.row(yb)) {
        if d > 0.0 {
            out.push(1.0 / d);
            out.push(inner_radius_root(d));
        }
    }
    out.extend_from_slice(extra);
    out.retain(|v| v.is_finite() && *v > 0.0);
    out.sort_by(f64::total_cmp);
    out.dedup();
    let first = out.first().copied().unwrap_or(1.0);
    out.insert(0, first / 2.0);
    out
}

/// One direction of a pointed (optionally dynamical) approximation search.
///
/// With `dynamics = Some((f, g))` the extra conditions of the pointed C⁰-GH
/// distance are imposed: `d(i(f(x)), g(y)) ≤ ε` and
/// `sup_{q ∈ B(x, 1/ε)} d(i(f(q)), g(i(q))) ≤ ε`.
pub(crate) struct PointedProblem<'a> {
    dom: &'a FiniteMetricSpace,
    dom_base: usize,
    cod: &'a FiniteMetricSpace,
    cod_base: usize,
    dynamics: Option<(&'a MapTable, &'a MapTable)>,
    tol: f64,
    dom_order: Vec<usize>,
    dom_radii: Vec<f64>,
    cod_order: Vec<usize>,
    cod_radii: Vec<f64>,
}

struct Profile {
    /// `dis[k]`: distortion over the first `k` points of `dom_order`.
    dis: Vec<f64>,
    /// `cov[k * (m + 1) + l]`: max over the first `l` points of `cod_order`
    /// of the distance to the image of the first `k` points of `dom_order`.
    cov: Vec<f64>,
    triple: f64,
    defect: Vec<f64>,
}

fn sorted_by_distance(s: &FiniteMetricSpace, base: usize) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s.d(base, a).total_cmp(&s.d(base, b)).then(a.cmp(&b)));
    let radii = order.iter().map(|&p| s.d(base, p)).collect();
    (order, radii)
}

impl<'a> PointedProblem<'a> {
    pub(crate) fn new(
        dom: &'a FiniteMetricSpace,
        dom_base: usize,
        cod: &'a FiniteMetricSpace,
        cod_base: usize,
        dynamics: Option<(&'a MapTable, &'a MapTable)>,
    ) -> Self {
        let (dom_order, dom_radii) = sorted_by_distance(dom, dom_base);
        let (cod_order, cod_radii) = sorted_by_distance(cod, cod_base);
        Self {
            dom,
            dom_base,
            cod,
            cod_base,
            dynamics,
            tol: pair_tol(dom, cod),
            dom_order,
            dom_radii,
            cod_order,
            cod_radii,
        }
    }

    /// Prefix lengths of the domain ball `B(x, 1/ε)` and the covered ball
    /// `B(y, 1/ε − ε)` (0 when degenerate).
    fn levels(&self, eps: f64) -> (usize, usize) {
        let r = 1.0 / eps;
        let k = self
            .dom_radii
            .partition_point(|&d| lt_tol(d, r, self.tol))
            .max(1);
        let r2 = r - eps;
        let l = if r2 <= 0.0 {
            0
        } else {
            self.cod_radii
                .partition_point(|&d| lt_tol(d, r2, self.tol))
                .max(1)
        };
        (k, l)
    }

    fn profile(&self, image: &[usize]) -> Profile {
        let n = self.dom_order.len();
        let m = self.cod_order.len();
        let mut dis = vec![0.0f64; n + 1];
        for k in 1..n {
            let a = self.dom_order[k];
            let mut worst = dis[k];
            for &b in &self.dom_order[..k] {
                worst = worst.max((self.cod.d(image[a], image[b]) - self.dom.d(a, b)).abs());
            }
            dis[k + 1] = worst;
        }
        let mut cov = vec![0.0; (n + 1) * (m + 1)];
        let mut nearest = vec![f64::INFINITY; m];
        for k in 1..=n {
            let ip = image[self.dom_order[k - 1]];
            let row = &mut cov[k * (m + 1)..(k + 1) * (m + 1)];
            let mut run = 0.0f64;
            for l in 0..m {
                let q = self.cod_order[l];
                nearest[l] = nearest[l].min(self.cod.d(ip, q));
                run = run.max(nearest[l]);
                row[l + 1] = run;
            }
        }
        let (triple, defect) = match self.dynamics {
            None => (0.0, Vec::new()),
            Some((f, g)) => {
                let triple = self
                    .cod
                    .d(image[f.apply(self.dom_base)], g.apply(self.cod_base));
                let mut defect = vec![0.0f64; n + 1];
                for k in 1..=n {
                    let q = self.dom_order[k - 1];
                    let v = self.cod.d(image[f.apply(q)], g.apply(image[q]));
                    defect[k] = defect[k - 1].max(v);
                }
                (triple, defect)
            }
        };
        Profile {
            dis,
            cov,
            triple,
            defect,
        }
    }

    fn feasible(&self, p: &Profile, eps: f64, (k, l): (usize, usize)) -> bool {
        let m = self.cod_order.len();
        let tol = self.tol;
        if !le_tol(p.dis[k], eps, tol) {
            return false;
        }
        if l > 0 && !le_tol(p.cov[k * (m + 1) + l], eps, tol) {
            return false;
        }
        if self.dynamics.is_some() && !(le_tol(p.triple, eps, tol) && le_tol(p.defect[k], eps, tol))
        {
            return false;
        }
        true
    }

    pub(crate) fn map_count(&self) -> u128 {
        map_count(self.dom.len(), self.cod.len(), 1)
    }

    /// For every candidate, the first enumerated map feasible there.
    pub(crate) fn search(&self, candidates: &[f64]) -> Vec<Option<Vec<usize>>> {
        let levels: Vec<(usize, usize)> = candidates.iter().map(|&e| self.levels(e)).collect();
        let mut found: Vec<Option<Vec<usize>>> = vec![None; candidates.len()];
        let mut open = candidates.len();
        for_each_map(
            self.dom.len(),
            self.cod.len(),
            &[(self.dom_base, self.cod_base)],
            |img| {
                let prof = self.profile(img);
                for (c, slot) in found.iter_mut().enumerate() {
                    if slot.is_none() && self.feasible(&prof, candidates[c], levels[c]) {
                        *slot = Some(img.to_vec());
                        open -= 1;
                    }
                }
                open > 0
            },
        );
        found
    }

    /// Feasibility of one map at each candidate.
    pub(crate) fn map_feasibility(&self, image: &[usize], candidates: &[f64]) -> Vec<bool> {
        if image[self.dom_base] != self.cod_base {
            return vec![false; candidates.len()];
        }
        let prof = self.profile(image);
        candidates
            .iter()
            .map(|&e| self.feasible(&prof, e, self.levels(e)))
            .collect()
    }
}

/// Interval answer of a pointed distance computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceInterval {
    /// Largest infeasible candidate below `upper` (0 if none).
    pub lower: f64,
    /// Smallest feasible candidate, or 0 when feasible below every critical value.
    pub upper: f64,
    /// The ε at which the reported maps certify (`upper`, or the
    /// representative below the smallest critical value when `upper` is 0).
    pub witness_eps: f64,
    /// No infeasible candidate above `upper`.
    pub monotone: bool,
    /// Infeasible candidates above `upper`.
    pub gaps: Vec<f64>,
    pub candidates_evaluated: usize,
    /// User grid values merged with the critical values.
    pub grid: Vec<f64>,
    pub forward: MapTable,
    pub backward: MapTable,
}

/// Combines two directional searches into an interval.
pub(crate) fn combine_directions(
    candidates: &[f64],
    fwd: Vec<Option<Vec<usize>>>,
    bwd: Vec<Option<Vec<usize>>>,
    fwd_cod: usize,
    bwd_cod: usize,
    grid: &[f64],
) -> DistanceInterval {
    let feasible: Vec<bool> = fwd
        .iter()
        .zip(&bwd)
        .map(|(a, b)| a.is_some() && b.is_some())
        .collect();
    let up = feasible
        .iter()
        .position(|&f| f)
        .expect("the largest critical value is always feasible");
    let upper = if up == 0 { 0.0 } else { candidates[up] };
    let lower = (0..up)
        .rev()
        .find(|&c| !feasible[c])
        .map(|c| if c == 0 { 0.0 } else { candidates[c] })
        .unwrap_or(0.0);
    let gaps: Vec<f64> = (up + 1..candidates.len())
        .filter(|&c| !feasible[c])
        .map(|c| candidates[c])
        .collect();
    DistanceInterval {
        lower,
        upper,
        witness_eps: candidates[up],
        monotone: gaps.is_empty(),
        gaps,
        candidates_evaluated: candidates.len(),
        grid: grid.to_vec(),
        forward: MapTable::new(fwd_cod, fwd[up].clone().unwrap()).expect("enumerated"),
        backward: MapTable::new(bwd_cod, bwd[up].clone().unwrap()).expect("enumerated"),
    }
}

fn single_base(p: &PointedSpace) -> Result<usize, PointedError> {
    if p.is_single() {
        Ok(p.basepoint())
    } else {
        Err(PointedError::NotSinglePointed)
    }
}

struct BaseCheck {
    distortion: f64,
    covering: f64,
    distortion_ok: bool,
    covering_ok: bool,
    basepoint_ok: bool,
    degenerate: bool,
    ball: PointedApproxParams,
    witnesses: Vec<Witness>,
}

fn check_at_basepoint(
    map: &MapTable,
    x: &FiniteMetricSpace,
    xb: usize,
    y: &FiniteMetricSpace,
    yb: usize,
    eps: f64,
    index: usize,
) -> BaseCheck {
    let tol = pair_tol(x, y);
    let mut witnesses = Vec::new();
    let basepoint_ok = map.apply(xb) == yb;
    if !basepoint_ok {
        witnesses.push(Witness::Basepoint {
            index,
            expected: yb,
            actual: map.apply(xb),
        });
    }
    let ball = x.ball(xb, 1.0 / eps);
    let pts = ball.as_slice();
    let mut distortion = 0.0f64;
    for (k, &a) in pts.iter().enumerate() {
        for &b in &pts[k + 1..] {
            let dx = x.d(a, b);
            let dy = y.d(map.apply(a), map.apply(b));
            let v = (dy - dx).abs();
            distortion = distortion.max(v);
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
    let inner = 1.0 / eps - eps;
    let degenerate = inner <= 0.0;
    let mut covering = 0.0f64;
    if !degenerate {
        let img = map.image_of(&ball);
        for q in y.ball(yb, inner).iter() {
            let dq = y.dist_to_set(q, &img);
            covering = covering.max(dq);
            if !le_tol(dq, eps, tol) {
                witnesses.push(Witness::Uncovered {
                    point: q,
                    distance: dq,
                });
            }
        }
    }
    BaseCheck {
        distortion,
        covering,
        distortion_ok: le_tol(distortion, eps, tol),
        covering_ok: le_tol(covering, eps, tol),
        basepoint_ok,
        degenerate,
        ball: PointedApproxParams::new(eps, x.eccentricity(xb)),
        witnesses,
    }
}

fn check_eps(eps: f64) -> Result<(), PointedError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(GhError::NonPositiveEps(eps).into())
    }
}

/// Checks the three pointed conditions for `map: (X, x) → (Y, y)` at `eps`.
/// When `1/ε − ε ≤ 0` the covering condition is vacuous and the certificate
/// is marked `degenerate`.
pub fn is_pointed_gha(
    map: &MapTable,
    x: &PointedSpace,
    y: &PointedSpace,
    eps: f64,
) -> Result<ApproxCertificate, PointedError> {
    check_eps(eps)?;
    map.check_spaces(&x.space, &y.space)?;
    let (xb, yb) = (single_base(x)?, single_base(y)?);
    let c = check_at_basepoint(map, &x.space, xb, &y.space, yb, eps, 0);
    Ok(ApproxCertificate {
        eps,
        kind: ApproxKind::Pointed,
        distortion_ok: c.distortion_ok,
        surjectivity_ok: c.covering_ok,
        basepoint_ok: c.basepoint_ok,
        witnesses: c.witnesses,
        measured_distortion: c.distortion,
        measured_covering_radius: c.covering,
        balls: vec![c.ball],
        degenerate: c.degenerate,
        failing_basepoints: Vec::new(),
    })
}

/// The pointed conditions for every basepoint pair `(x_n, y_n)`.
pub fn is_multipointed_gha(
    map: &MapTable,
    x: &PointedSpace,
    y: &PointedSpace,
    eps: f64,
) -> Result<ApproxCertificate, PointedError> {
    check_eps(eps)?;
    map.check_spaces(&x.space, &y.space)?;
    if x.basepoints().len() != y.basepoints().len() {
        return Err(PointedError::BasepointCountMismatch(
            x.basepoints().len(),
            y.basepoints().len(),
        ));
    }
    let mut cert = ApproxCertificate {
        eps,
        kind: ApproxKind::Multipointed,
        distortion_ok: true,
        surjectivity_ok: true,
        basepoint_ok: true,
        witnesses: Vec::new(),
        measured_distortion: 0.0,
        measured_covering_radius: 0.0,
        balls: Vec::new(),
        degenerate: false,
        failing_basepoints: Vec::new(),
    };
    for (n, (&xb, &yb)) in x.basepoints().iter().zip(y.basepoints()).enumerate() {
        let c = check_at_basepoint(map, &x.space, xb, &y.space, yb, eps, n + 1);
        cert.distortion_ok &= c.distortion_ok;
        cert.surjectivity_ok &= c.covering_ok;
        cert.basepoint_ok &= c.basepoint_ok;
        cert.measured_distortion = cert.measured_distortion.max(c.distortion);
        cert.measured_covering_radius = cert.measured_covering_radius.max(c.covering);
        cert.degenerate |= c.degenerate;
        cert.balls.push(c.ball);
        if !(c.distortion_ok && c.covering_ok && c.basepoint_ok) {
            cert.failing_basepoints.push(n + 1);
        }
        cert.witnesses.extend(c.witnesses);
    }
    Ok(cert)
}

/// Pointed GH distance by exhaustive search over basepoint-preserving maps
/// at every critical value and every `eps_grid` value.
pub fn pgh_distance(
    x: &PointedSpace,
    y: &PointedSpace,
    eps_grid: &[f64],
    max_enum: u128,
) -> Result<DistanceInterval, PointedError> {
    let (xb, yb) = (single_base(x)?, single_base(y)?);
    let fwd = PointedProblem::new(&x.space, xb, &y.space, yb, None);
    let bwd = PointedProblem::new(&y.space, yb, &x.space, xb, None);
    let required = fwd.map_count().saturating_add(bwd.map_count());
    if required > max_enum {
        return Err(GhError::EnumerationBudgetExceeded {
            required,
            budget: max_enum,
        }
        .into());
    }
    let candidates = critical_values(&x.space, xb, &y.space, yb, eps_grid);
    let f = fwd.search(&candidates);
    let b = bwd.search(&candidates);
    Ok(combine_directions(
        &candidates,
        f,
        b,
        y.space.len(),
        x.space.len(),
        eps_grid,
    ))
}

/// Smallest critical value at which `map` alone is a pointed approximation.
pub fn smallest_certified_eps(
    map: &MapTable,
    x: &PointedSpace,
    y: &PointedSpace,
) -> Result<Option<f64>, PointedError> {
    map.check_spaces(&x.space, &y.space)?;
    let (xb, yb) = (single_base(x)?, single_base(y)?);
    let candidates = critical_values(&x.space, xb, &y.space, yb, &[]);
    let problem = PointedProblem::new(&x.space, xb, &y.space, yb, None);
    let feas = problem.map_feasibility(map.image(), &candidates);
    Ok(feas
        .iter()
        .position(|&f| f)
        .map(|c| if c == 0 { 0.0 } else { candidates[c] }))
}

/// Outcome of the ball-inclusion check for a certified pointed approximation
/// at radius `r` with `ε < r < 1/ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSandwich {
    pub eps: f64,
    pub r: f64,
    /// `i(B(x, r)) ⊆ B(y, r + ε)`.
    pub image_inclusion: bool,
    /// `B(y, r − ε) ⊆ N_ε(i(B(x, r)))`.
    pub inner_inclusion: bool,
    /// `N_ε(i(B(x, r))) ⊆ B(y, r + 2ε)`.
    pub outer_inclusion: bool,
    /// `B(y, r − 2ε) ⊆ N_ε(i(B(x, r)))`, the inner inclusion that follows
    /// from the three pointed conditions in general.
    pub inner_inclusion_2eps: bool,
    /// Points violating one of the inclusions, with the name of the inclusion.
    pub witnesses: Vec<(String, usize)>,
}

impl BallSandwich {
    /// All three displayed inclusions hold.
    pub fn passes(&self) -> bool {
        self.image_inclusion && self.inner_inclusion && self.outer_inclusion
    }
}

/// Checks the ball sandwich `B(y, r−ε) ⊆ N_ε(i(B(x, r))) ⊆ B(y, r+2ε)`
/// together with `i(B(x, r)) ⊆ B(y, r+ε)`. Here `N_ε` is the closed tube
/// matching the certificate's covering condition.
pub fn ball_sandwich_check(
    map: &MapTable,
    x: &PointedSpace,
    y: &PointedSpace,
    eps: f64,
    r: f64,
) -> Result<BallSandwich, PointedError> {
    if !(0.0 < eps && eps < r && r < 1.0 / eps) {
        return Err(PointedError::PreconditionViolated(format!(
            "need 0 < eps < r < 1/eps, got eps = {eps}, r = {r}"
        )));
    }
    let cert = is_pointed_gha(map, x, y, eps)?;
    if !cert.is_valid() {
        return Err(PointedError::NotCertified(eps));
    }
    let (xb, yb) = (x.basepoint(), y.basepoint());
    let (xs, ys) = (&x.space, &y.space);
    let tol = pair_tol(xs, ys);
    let img = map.image_of(&xs.ball(xb, r));
    let in_tube = |q: usize| le_tol(ys.dist_to_set(q, &img), eps, tol);
    let mut witnesses = Vec::new();

    let mut image_inclusion = true;
    for q in img.iter() {
        if ys.d(yb, q) >= r + eps + tol {
            image_inclusion = false;
            witnesses.push(("image".to_string(), q));
        }
    }
    let mut outer_inclusion = true;
    for q in (0..ys.len()).filter(|&q| in_tube(q)) {
        if ys.d(yb, q) >= r + 2.0 * eps + tol {
            outer_inclusion = false;
            witnesses.push(("outer".to_string(), q));
        }
    }
    let mut inner_inclusion = true;
    for q in ys.ball(yb, r - eps).iter() {
        if !in_tube(q) {
            inner_inclusion = false;
            witnesses.push(("inner".to_string(), q));
        }
    }
    let inner_inclusion_2eps =
        r - 2.0 * eps <= 0.0 || ys.ball(yb, r - 2.0 * eps).iter().all(in_tube);
    Ok(BallSandwich {
        eps,
        r,
        image_inclusion,
        inner_inclusion,
        outer_inclusion,
        inner_inclusion_2eps,
        witnesses,
    })
}

/// Composite map check from the triangle inequality argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeCheck {
    pub eps12: f64,
    pub eps23: f64,
    /// `2(ε₁₂ + ε₂₃)`.
    pub eps13: f64,
    /// `i₂₃ ∘ i₁₂` at `eps13`.
    pub forward: ApproxCertificate,
    /// `i₂₁ ∘ i₃₂` at `eps13`.
    pub backward: ApproxCertificate,
}

impl CompositeCheck {
    pub fn certified(&self) -> bool {
        self.forward.is_valid() && self.backward.is_valid()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleReport {
    pub d12: f64,
    pub d23: f64,
    pub d13: f64,
    /// Both `d12` and `d23` are at most 1/2.
    pub applicable: bool,
    /// `d13 ≤ 2(d12 + d23)` up to tolerance (only meaningful when applicable).
    pub inequality_holds: bool,
    pub composite: Option<CompositeCheck>,
}

impl TriangleReport {
    /// No violation: either not applicable or both the inequality and the
    /// composite certificate hold.
    pub fn ok(&self) -> bool {
        !self.applicable
            || (self.inequality_holds && self.composite.as_ref().is_some_and(|c| c.certified()))
    }
}

/// Factor-2 triangle inequality for pointed GH distances, with the composite
/// approximation `i₂₃ ∘ i₁₂` certified at `ε₁₃ = 2(ε₁₂ + ε₂₃)`.
pub fn triangle_check(
    p1: &PointedSpace,
    p2: &PointedSpace,
    p3: &PointedSpace,
    max_enum: u128,
) -> Result<TriangleReport, PointedError> {
    let d12 = pgh_distance(p1, p2, &[], max_enum)?;
    let d23 = pgh_distance(p2, p3, &[], max_enum)?;
    let d13 = pgh_distance(p1, p3, &[], max_enum)?;
    let tol = p1.space.tol().max(p2.space.tol()).max(p3.space.tol());
    let applicable = d12.upper <= 0.5 + tol && d23.upper <= 0.5 + tol;
    let inequality_holds = le_tol(d13.upper, 2.0 * (d12.upper + d23.upper), tol);
    let composite = if applicable {
        let (e12, e23) = (d12.witness_eps, d23.witness_eps);
        let e13 = 2.0 * (e12 + e23);
        let fwd_map = d12.forward.then(&d23.forward)?;
        let bwd_map = d23.backward.then(&d12.backward)?;
        Some(CompositeCheck {
            eps12: e12,
            eps23: e23,
            eps13: e13,
            forward: is_pointed_gha(&fwd_map, p1, p3, e13)?,
            backward: is_pointed_gha(&bwd_map, p3, p1, e13)?,
        })
    } else {
        None
    };
    Ok(TriangleReport {
        d12: d12.upper,
        d23: d23.upper,
        d13: d13.upper,
        applicable,
        inequality_holds,
        composite,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LclSide {
    /// `f(B(x, r)) ⊆ B(f(x), C r)` fails.
    Lipschitz,
    /// `B(f(x), r/C) ⊆ f(B(x, r))` fails.
    CoLipschitz,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LclViolation {
    pub point: usize,
    pub radius: f64,
    pub side: LclSide,
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LclReport {
    pub c: f64,
    pub holds: bool,
    pub violations: Vec<LclViolation>,
}

/// Checks `B(f(x), r/C) ⊆ f(B(x, r)) ⊆ B(f(x), C r)` for every point and
/// every radius in `radii`.
pub fn is_lcl(
    map: &MapTable,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    c: f64,
    radii: &[f64],
) -> Result<LclReport, PointedError> {
    if !(c >= 1.0 && c.is_finite()) {
        return Err(PointedError::PreconditionViolated(format!(
            "C must be >= 1, got {c}"
        )));
    }
    map.check_spaces(x, y)?;
    let tol = pair_tol(x, y);
    let mut violations = Vec::new();
    for p in 0..x.len() {
        let fp = map.apply(p);
        for &r in radii {
            let img = map.image_of(&x.ball(p, r));
            for q in img.iter() {
                if y.d(fp, q) >= c * r + tol {
                    violations.push(LclViolation {
                        point: p,
                        radius: r,
                        side: LclSide::Lipschitz,
                        witness: q,
                    });
                }
            }
            for q in y.ball(fp, r / c).iter() {
                if !img.contains(q) {
                    violations.push(LclViolation {
                        point: p,
                        radius: r,
                        side: LclSide::CoLipschitz,
                        witness: q,
                    });
                }
            }
        }
    }
    Ok(LclReport {
        c,
        holds: violations.is_empty(),
        violations,
    })
}

/// Pointed spaces `(X_k, x_k)` with optional approximations `i_k: X_k → X`
/// into a fixed target and optional precomputed `ε_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSequence {
    pub entries: Vec<PointedSpace>,
    pub maps: Option<Vec<MapTable>>,
    pub eps_seq: Vec<f64>,
}

impl SpaceSequence {
    pub fn new(
        entries: Vec<PointedSpace>,
        maps: Option<Vec<MapTable>>,
        eps_seq: Vec<f64>,
    ) -> Result<Self, PointedError> {
        if let Some(m) = &maps {
            if m.len() != entries.len() {
                return Err(PointedError::LengthMismatch {
                    entries: entries.len(),
                    other: m.len(),
                    what: "maps",
                });
            }
        }
        if !eps_seq.is_empty() && eps_seq.len() != entries.len() {
            return Err(PointedError::LengthMismatch {
                entries: entries.len(),
                other: eps_seq.len(),
                what: "eps values",
            });
        }
        Ok(Self {
            entries,
            maps,
            eps_seq,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    /// Smallest certified ε per entry.
    pub eps: Vec<f64>,
    /// The approximation used per entry.
    pub maps: Vec<MapTable>,
    /// For each threshold, the first index from which every ε_k is at most it.
    pub below_from: Vec<Option<usize>>,
    pub thresholds: Vec<f64>,
    pub nonincreasing: bool,
    pub converged: bool,
}

/// Per-entry smallest certified ε against `target`. With supplied maps the
/// one-directional certificate of each map is used; otherwise the pointed
/// distance is computed and its forward witness kept.
pub fn sequence_convergence(
    seq: &SpaceSequence,
    target: &PointedSpace,
    thresholds: &[f64],
    max_enum: u128,
) -> Result<SequenceReport, PointedError> {
    let mut eps = Vec::with_capacity(seq.len());
    let mut maps = Vec::with_capacity(seq.len());
    for (k, entry) in seq.entries.iter().enumerate() {
        match &seq.maps {
            Some(ms) => {
                let e = smallest_certified_eps(&ms[k], entry, target)?
                    .ok_or(PointedError::SearchFailed(k))?;
                eps.push(e);
                maps.push(ms[k].clone());
            }
            None => {
                let d = pgh_distance(entry, target, &[], max_enum)?;
                eps.push(d.upper);
                maps.push(d.forward);
            }
        }
    }
    let tol = target.space.tol();
    let below_from: Vec<Option<usize>> = thresholds
        .iter()
        .map(|&t| {
            let last_bad = eps.iter().rposition(|&e| !le_tol(e, t, tol));
            match last_bad {
                None => Some(0),
                Some(k) if k + 1 < eps.len() => Some(k + 1),
                Some(_) => None,
            }
        })
        .collect();
    let nonincreasing = eps.windows(2).all(|w| le_tol(w[1], w[0], tol));
    let converged = !eps.is_empty() && below_from.iter().all(Option::is_some);
    Ok(SequenceReport {
        eps,
        maps,
        below_from,
        thresholds: thresholds.to_vec(),
        nonincreasing,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConvergenceReport {
    /// `d(i_k(x_k), x)` per entry.
    pub distances: Vec<f64>,
    pub threshold: f64,
    pub window: usize,
    pub converged: bool,
}

/// Distances `d(i_k(x_k), x)`; converged when the last `window` entries are
/// all at most `threshold`.
pub fn point_convergence(
    seq: &SpaceSequence,
    target: &PointedSpace,
    points: &[usize],
    target_point: usize,
    threshold: f64,
    window: usize,
) -> Result<PointConvergenceReport, PointedError> {
    let maps = seq.maps.as_ref().ok_or(PointedError::MissingMaps)?;
    if points.len() != seq.len() {
        return Err(PointedError::LengthMismatch {
            entries: seq.len(),
            other: points.len(),
            what: "points",
        });
    }
    target.space.check_index(target_point)?;
    let mut distances = Vec::with_capacity(seq.len());
    for (k, (&p, m)) in points.iter().zip(maps).enumerate() {
        m.check_spaces(&seq.entries[k].space, &target.space)?;
        seq.entries[k].space.check_index(p)?;
        distances.push(target.space.d(m.apply(p), target_point));
    }
    let tol = target.space.tol();
    let w = window.max(1).min(distances.len());
    let converged = !distances.is_empty()
        && distances[distances.len() - w..]
            .iter()
            .all(|&d| le_tol(d, threshold, tol));
    Ok(PointConvergenceReport {
        distances,
        threshold,
        window: w,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub probe: usize,
    /// Worst `d(j_k(f_k(p)), f(x))` over selections `p` with
    /// `d(i_k(p), x) ≤ ε_k`; `None` when no point of `X_k` is selected.
    pub errors: Vec<Option<f64>>,
    /// Indices `k` with error at most the threshold.
    pub witness_subsequence: Vec<usize>,
    pub converges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapConvergenceReport {
    pub threshold: f64,
    pub tail: usize,
    pub probes: Vec<ProbeReport>,
}

fn certified_eps(seq: &SpaceSequence, target: &PointedSpace) -> Result<Vec<f64>, PointedError> {
    if !seq.eps_seq.is_empty() {
        return Ok(seq.eps_seq.clone());
    }
    let maps = seq.maps.as_ref().ok_or(PointedError::MissingMaps)?;
    seq.entries
        .iter()
        .zip(maps)
        .enumerate()
        .map(|(k, (e, m))| {
            smallest_certified_eps(m, e, target)?.ok_or(PointedError::SearchFailed(k))
        })
        .collect()
}

/// Convergence of maps `f_k: X_k → Y_k` to `f: X → Y` at each probe `x`.
/// Every point of `X_k` that `i_k` sends within `ε_k` of `x` counts as a
/// selection converging to `x`; the map sequence converges at `x` when the
/// worst image error `d(j_k(f_k(p)), f(x))` stays at most `threshold` over the
/// last `tail` entries.
#[allow(clippy::too_many_arguments)]
pub fn map_convergence(
    seq_x: &SpaceSequence,
    target_x: &PointedSpace,
    seq_y: &SpaceSequence,
    target_y: &PointedSpace,
    maps: &[MapTable],
    limit: &MapTable,
    probes: &[usize],
    threshold: f64,
    tail: usize,
) -> Result<MapConvergenceReport, PointedError> {
    let ix = seq_x.maps.as_ref().ok_or(PointedError::MissingMaps)?;
    let jy = seq_y.maps.as_ref().ok_or(PointedError::MissingMaps)?;
    if seq_y.len() != seq_x.len() || maps.len() != seq_x.len() {
        return Err(PointedError::LengthMismatch {
            entries: seq_x.len(),
            other: if maps.len() != seq_x.len() {
                maps.len()
            } else {
                seq_y.len()
            },
            what: "maps or codomain entries",
        });
    }
    limit.check_spaces(&target_x.space, &target_y.space)?;
    let eps = certified_eps(seq_x, target_x)?;
    let tol = target_x.space.tol().max(target_y.space.tol());
    let mut reports = Vec::with_capacity(probes.len());
    for &x in probes {
        target_x.space.check_index(x)?;
        let fx = limit.apply(x);
        let mut errors = Vec::with_capacity(seq_x.len());
        for k in 0..seq_x.len() {
            let xs = &seq_x.entries[k].space;
            maps[k].check_spaces(xs, &seq_y.entries[k].space)?;
            let worst = (0..xs.len())
                .filter(|&p| le_tol(target_x.space.d(ix[k].apply(p), x), eps[k], tol))
                .map(|p| target_y.space.d(jy[k].apply(maps[k].apply(p)), fx))
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| a.max(v)))
                });
            errors.push(worst);
        }
        let witness_subsequence: Vec<usize> = errors
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some_and(|v| le_tol(v, threshold, tol)))
            .map(|(k, _)| k)
            .collect();
        let t = tail.max(1).min(errors.len());
        let converges = !errors.is_empty()
            && errors[errors.len() - t..]
                .iter()
                .all(|e| e.is_some_and(|v| le_tol(v, threshold, tol)));
        reports.push(ProbeReport {
            probe: x,
            errors,
            witness_subsequence,
            converges,
        });
    }
    Ok(MapConvergenceReport {
        threshold,
        tail,
        probes: reports,
    })
}

/// `dis(map)` over the ball `B(x, 1/ε)`.
pub fn ball_distortion(
    map: &MapTable,
    x: &PointedSpace,
    y: &FiniteMetricSpace,
    eps: f64,
) -> Result<f64, PointedError> {
    map.check_spaces(&x.space, y)?;
    let ball: PointSet = x.space.ball(x.basepoint(), 1.0 / eps);
    Ok(distortion_over(map, &x.space, y, ball.as_slice()))
}
