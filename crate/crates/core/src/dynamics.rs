//! Distances between self-maps of finite metric spaces: the C⁰ distance, the
//! C⁰-GH distance, its pointed version, local conjugacy checks and checkers
//! for the basic properties of the pointed distance.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::gh::{distortion_over, gha_objective, GhError, MapTable};
use crate::metric::{le_tol, lt_tol, FiniteMetricSpace, MetricError, PointSet, PointedSpace};
use crate::pointed::{
    combine_directions, critical_values, pgh_distance, DistanceInterval, PointedError,
    PointedProblem,
};
use crate::search::{for_each_map, map_count};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("the two systems do not live on the same space")]
    SpaceMismatch,
    #[error("map must send the space to itself ({dom} -> {cod})")]
    NotSelfMap { dom: usize, cod: usize },
    #[error("system has no basepoint")]
    NoBasepoint,
    #[error("point {0} of U or f(U) lies outside the domain of h")]
    DomainEscape(usize),
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error(transparent)]
    Pointed(#[from] PointedError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A self-map `f: X → X`, optionally pointed.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapSystem {
    pub space: FiniteMetricSpace,
    pub basepoint: Option<usize>,
    pub map: MapTable,
    /// The map is a permutation.
    pub bijective: bool,
}

impl SelfMapSystem {
    pub fn new(
        space: FiniteMetricSpace,
        map: MapTable,
        basepoint: Option<usize>,
    ) -> Result<Self, DynError> {
        if map.dom_size() != space.len() || map.cod_size() != space.len() {
            return Err(DynError::NotSelfMap {
                dom: map.dom_size(),
                cod: map.cod_size(),
            });
        }
        if let Some(b) = basepoint {
            space.check_index(b)?;
        }
        let bijective = map.is_permutation();
        Ok(Self {
            space,
            basepoint,
            map,
            bijective,
        })
    }

    pub fn identity(space: FiniteMetricSpace, basepoint: Option<usize>) -> Result<Self, DynError> {
        let n = space.len();
        Self::new(space, MapTable::identity(n), basepoint)
    }

    pub fn with_basepoint(mut self, basepoint: usize) -> Result<Self, DynError> {
        self.space.check_index(basepoint)?;
        self.basepoint = Some(basepoint);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map.apply(p)
    }

    /// `f^n(p)` for `n ≥ 0`.
    pub fn iterate(&self, p: usize, n: usize) -> usize {
        (0..n).fold(p, |q, _| self.map.apply(q))
    }

    pub fn inverse(&self) -> Option<MapTable> {
        self.map.inverse()
    }

    pub fn pointed(&self) -> Result<PointedSpace, DynError> {
        let b = self.basepoint.ok_or(DynError::NoBasepoint)?;
        Ok(PointedSpace::single(self.space.clone(), b)?)
    }

    pub fn basepoint(&self) -> Result<usize, DynError> {
        self.basepoint.ok_or(DynError::NoBasepoint)
    }
}

/// `sup_x d(f(x), g(x))`.
pub fn c0_distance(f: &SelfMapSystem, g: &SelfMapSystem) -> Result<f64, DynError> {
    if f.space != g.space {
        return Err(DynError::SpaceMismatch);
    }
    Ok((0..f.len())
        .map(|p| f.space.d(f.apply(p), g.apply(p)))
        .fold(0.0, f64::max))
}

/// `sup_{q ∈ B(x, 1/ε₀)} d(f(q), g(q))` on a shared pointed space.
pub fn restricted_c0_distance(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    eps0: f64,
) -> Result<f64, DynError> {
    if f.space != g.space || f.basepoint != g.basepoint {
        return Err(DynError::SpaceMismatch);
    }
    let x = f.basepoint()?;
    Ok(f.space
        .ball(x, 1.0 / eps0)
        .iter()
        .map(|p| f.space.d(f.apply(p), g.apply(p)))
        .fold(0.0, f64::max))
}

/// `max_p d(g(i(p)), i(f(p)))`.
fn semiconjugacy_defect(image: &[usize], a: &SelfMapSystem, b: &SelfMapSystem) -> f64 {
    (0..a.len())
        .map(|p| b.space.d(b.apply(image[p]), image[a.apply(p)]))
        .fold(0.0, f64::max)
}

fn best_dynamic_one_way(a: &SelfMapSystem, b: &SelfMapSystem) -> (f64, MapTable) {
    let mut best = f64::INFINITY;
    let mut arg = vec![0; a.len()];
    for_each_map(a.len(), b.len(), &[], |img| {
        let v = gha_objective(img, &a.space, &b.space, best);
        if v < best {
            let v = v.max(semiconjugacy_defect(img, a, b));
            if v < best {
                best = v;
                arg.copy_from_slice(img);
            }
        }
        true
    });
    (
        best,
        MapTable::new(b.len(), arg).expect("enumerated map is valid"),
    )
}

fn unpointed_candidates(x: &FiniteMetricSpace, y: &FiniteMetricSpace, extra: &[f64]) -> Vec<f64> {
    let mut dx = x.distance_values();
    let mut dy = y.distance_values();
    let mut out: Vec<f64> = dx.iter().chain(&dy).copied().collect();
    dx.push(0.0);
    dy.push(0.0);
    for &a in &dx {
        for &b in &dy {
            out.push((a - b).abs());
        }
    }
    out.extend_from_slice(extra);
    out.retain(|v| v.is_finite() && *v > 0.0);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// C⁰-GH distance by exhaustive search. An approximation `i: X → Y` is
/// admissible at ε when `dis(i) ≤ ε`, `Y = N_ε(i(X))` and
/// `d_{C⁰}(g∘i, i∘f) ≤ ε`; the two directions decouple. The value is exact;
/// `lower` is the largest critical value below it.
pub fn gh0_distance(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    max_enum: u128,
    eps_grid: &[f64],
) -> Result<DistanceInterval, DynError> {
    let required = map_count(f.len(), g.len(), 0).saturating_add(map_count(g.len(), f.len(), 0));
    if required > max_enum {
        return Err(GhError::EnumerationBudgetExceeded {
            required,
            budget: max_enum,
        }
        .into());
    }
    let (fv, forward) = best_dynamic_one_way(f, g);
    let (bv, backward) = best_dynamic_one_way(g, f);
    let value = fv.max(bv);
    let tol = f.space.tol().max(g.space.tol());
    let candidates = unpointed_candidates(&f.space, &g.space, eps_grid);
    let lower = candidates
        .iter()
        .rev()
        .find(|&&c| c < value && !le_tol(value, c, tol))
        .copied()
        .unwrap_or(0.0);
    Ok(DistanceInterval {
        lower,
        upper: value,
        witness_eps: value,
        monotone: true,
        gaps: Vec::new(),
        candidates_evaluated: candidates.len(),
        grid: eps_grid.to_vec(),
        forward,
        backward,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// A point `q` of the domain ball whose pair `i(f(q))`, `g(i(q))` leaves the
/// ball `B(g(y), 1/ε)`; the ambient distance was used for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutOfWindow {
    pub direction: Direction,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pgh0Result {
    #[serde(flatten)]
    pub interval: DistanceInterval,
    pub out_of_window: Vec<OutOfWindow>,
}

fn out_of_window(
    map: &MapTable,
    a: &SelfMapSystem,
    ab: usize,
    b: &SelfMapSystem,
    bb: usize,
    eps: f64,
    direction: Direction,
) -> Vec<OutOfWindow> {
    let tol = a.space.tol().max(b.space.tol());
    let center = b.apply(bb);
    let r = 1.0 / eps;
    a.space
        .ball(ab, r)
        .iter()
        .filter(|&q| {
            let u = map.apply(a.apply(q));
            let v = b.apply(map.apply(q));
            !(lt_tol(b.space.d(center, u), r, tol) || u == center)
                || !(lt_tol(b.space.d(center, v), r, tol) || v == center)
        })
        .map(|point| OutOfWindow { direction, point })
        .collect()
}

/// Pointed C⁰-GH distance by exhaustive search over basepoint-preserving
/// map pairs at every critical value and grid value. Besides the pointed
/// conditions each map must satisfy `d(i(f(x)), g(y)) ≤ ε` and
/// `sup_{q ∈ B(x, 1/ε)} d(i(f(q)), g(i(q))) ≤ ε`.
pub fn pgh0_distance(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    max_enum: u128,
    eps_grid: &[f64],
) -> Result<Pgh0Result, DynError> {
    let (x, y) = (f.basepoint()?, g.basepoint()?);
    let fwd = PointedProblem::new(&f.space, x, &g.space, y, Some((&f.map, &g.map)));
    let bwd = PointedProblem::new(&g.space, y, &f.space, x, Some((&g.map, &f.map)));
    let required = fwd.map_count().saturating_add(bwd.map_count());
    if required > max_enum {
        return Err(GhError::EnumerationBudgetExceeded {
            required,
            budget: max_enum,
        }
        .into());
    }
    let candidates = critical_values(&f.space, x, &g.space, y, eps_grid);
    let a = fwd.search(&candidates);
    let b = bwd.search(&candidates);
    let interval = combine_directions(&candidates, a, b, g.len(), f.len(), eps_grid);
    let e = interval.witness_eps;
    let mut oow = out_of_window(&interval.forward, f, x, g, y, e, Direction::Forward);
    oow.extend(out_of_window(
        &interval.backward,
        g,
        y,
        f,
        x,
        e,
        Direction::Backward,
    ));
    Ok(Pgh0Result {
        interval,
        out_of_window: oow,
    })
}

/// Smallest critical value at which the given pair `(i, j)` satisfies every
/// condition of the pointed C⁰-GH distance, or `None`.
pub fn pgh0_pair_bound(
    i: &MapTable,
    j: &MapTable,
    f: &SelfMapSystem,
    g: &SelfMapSystem,
) -> Result<Option<f64>, DynError> {
    i.check_spaces(&f.space, &g.space)?;
    j.check_spaces(&g.space, &f.space)?;
    let (x, y) = (f.basepoint()?, g.basepoint()?);
    let candidates = critical_values(&f.space, x, &g.space, y, &[]);
    let a = PointedProblem::new(&f.space, x, &g.space, y, Some((&f.map, &g.map)))
        .map_feasibility(i.image(), &candidates);
    let b = PointedProblem::new(&g.space, y, &f.space, x, Some((&g.map, &f.map)))
        .map_feasibility(j.image(), &candidates);
    Ok((0..candidates.len())
        .find(|&c| a[c] && b[c])
        .map(|c| if c == 0 { 0.0 } else { candidates[c] }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyCheck {
    pub h: MapTable,
    pub domain_set: PointSet,
    pub target_set: PointSet,
    /// `max_{x ∈ U} d(h(f(x)), g(h(x)))`.
    pub defect: f64,
    /// `h(U) = V`.
    pub onto_ok: bool,
    /// Distortion of `h` on `U ∪ f(U)`, when an isometric conjugacy was asked for.
    pub distortion: Option<f64>,
}

impl ConjugacyCheck {
    pub fn holds(&self, tol: f64) -> bool {
        le_tol(self.defect, 0.0, tol)
            && self.onto_ok
            && self.distortion.is_none_or(|d| le_tol(d, 0.0, tol))
    }
}

/// Checks `h(U) = V` and `h∘f = g∘h` on `U`. `h_domain` restricts where `h`
/// is defined; `U ∪ f(U)` must stay inside it.
pub fn is_local_conjugacy(
    h: &MapTable,
    h_domain: Option<&PointSet>,
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    u: &PointSet,
    v: &PointSet,
    isometric: bool,
) -> Result<ConjugacyCheck, DynError> {
    h.check_spaces(&f.space, &g.space)?;
    if u.universe() != f.len() || v.universe() != g.len() {
        return Err(MetricError::UniverseMismatch {
            set: if u.universe() != f.len() {
                u.universe()
            } else {
                v.universe()
            },
            space: if u.universe() != f.len() {
                f.len()
            } else {
                g.len()
            },
        }
        .into());
    }
    let fu = f.map.image_of(u);
    let reach = u.union(&fu);
    if let Some(dom) = h_domain {
        if let Some(p) = reach.iter().find(|&p| !dom.contains(p)) {
            return Err(DynError::DomainEscape(p));
        }
    }
    let defect = u
        .iter()
        .map(|p| g.space.d(h.apply(f.apply(p)), g.apply(h.apply(p))))
        .fold(0.0, f64::max);
    let onto_ok = h.image_of(u) == *v;
    let distortion = isometric.then(|| distortion_over(h, &f.space, &g.space, reach.as_slice()));
    Ok(ConjugacyCheck {
        h: h.clone(),
        domain_set: u.clone(),
        target_set: v.clone(),
        defect,
        onto_ok,
        distortion,
    })
}

/// Best Lipschitz constant `max d(f a, f b) / d(a, b)`.
pub fn lipschitz_constant(f: &SelfMapSystem) -> f64 {
    let s = &f.space;
    let mut c = 0.0f64;
    for a in 0..s.len() {
        for b in (a + 1)..s.len() {
            c = c.max(s.d(f.apply(a), f.apply(b)) / s.d(a, b));
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyItem {
    pub item: u8,
    pub applicable: bool,
    pub holds: bool,
    pub values: BTreeMap<String, f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub items: Vec<PropertyItem>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| !i.applicable || i.holds)
    }

    pub fn item(&self, n: u8) -> Option<&PropertyItem> {
        self.items.iter().find(|i| i.item == n)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PropertyParams<'a> {
    /// Radius parameter of the restricted C⁰ distance (item 1); defaults to
    /// the smallest grid value, or the smallest critical value without a grid.
    pub eps0: Option<f64>,
    pub eps_grid: Vec<f64>,
    pub max_enum: u128,
    /// Third system for the factor-2 triangle inequality (item 5).
    pub third: Option<&'a SelfMapSystem>,
}

fn item(n: u8, applicable: bool, holds: bool, values: &[(&str, f64)], note: &str) -> PropertyItem {
    PropertyItem {
        item: n,
        applicable,
        holds,
        values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        note: note.to_string(),
    }
}

fn is_identity(f: &SelfMapSystem) -> bool {
    f.map == MapTable::identity(f.len())
}

/// Evaluates items 1, 2, 4, 5 and 6 of the basic properties of the pointed
/// C⁰-GH distance on the given systems, reporting measured values.
pub fn pointed_property_checks(
    f: &SelfMapSystem,
    g: &SelfMapSystem,
    params: &PropertyParams<'_>,
) -> Result<PropertyReport, DynError> {
    let tol = f.space.tol().max(g.space.tol());
    let max_enum = if params.max_enum == 0 {
        crate::gh::DEFAULT_MAX_ENUM
    } else {
        params.max_enum
    };
    let fg = pgh0_distance(f, g, max_enum, &params.eps_grid)?.interval;
    let gf = pgh0_distance(g, f, max_enum, &params.eps_grid)?.interval;
    let mut items = Vec::new();

    let shared = f.space == g.space && f.basepoint == g.basepoint;
    if shared {
        let eps0 = params.eps0.unwrap_or_else(|| {
            params
                .eps_grid
                .iter()
                .copied()
                .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |a| a.min(v))))
                .unwrap_or_else(|| {
                    critical_values(
                        &f.space,
                        f.basepoint.unwrap(),
                        &g.space,
                        g.basepoint.unwrap(),
                        &[],
                    )[1]
                })
        });
        let d0 = restricted_c0_distance(f, g, eps0)?;
        items.push(item(
            1,
            true,
            le_tol(fg.upper, d0, tol),
            &[("pgh0", fg.upper), ("restricted_c0", d0), ("eps0", eps0)],
            "pgh0 <= sup over B(x, 1/eps0) of d(f, g)",
        ));
    } else {
        items.push(item(
            1,
            false,
            true,
            &[],
            "systems live on different pointed spaces",
        ));
    }

    let (px, py) = (f.pointed()?, g.pointed()?);
    let pgh = pgh_distance(&px, &py, &params.eps_grid, max_enum)?;
    let ids = is_identity(f) && is_identity(g);
    let mut holds = le_tol(pgh.upper, fg.upper, tol);
    if ids {
        holds &= pgh.upper == fg.upper;
    }
    items.push(item(
        2,
        true,
        holds,
        &[("pgh", pgh.upper), ("pgh0", fg.upper)],
        if ids {
            "identity maps: pgh0 = pgh"
        } else {
            "pgh <= pgh0"
        },
    ));

    items.push(item(
        4,
        true,
        fg.upper == gf.upper && fg.lower == gf.lower,
        &[("pgh0_fg", fg.upper), ("pgh0_gf", gf.upper)],
        "symmetry",
    ));

    match params.third {
        Some(r) => {
            let d12 = fg.upper;
            let d23 = pgh0_distance(g, r, max_enum, &params.eps_grid)?
                .interval
                .upper;
            let d13 = pgh0_distance(f, r, max_enum, &params.eps_grid)?
                .interval
                .upper;
            let applicable = d12 <= 0.5 + tol && d23 <= 0.5 + tol;
            items.push(item(
                5,
                applicable,
                le_tol(d13, 2.0 * (d12 + d23), tol),
                &[
                    ("d12", d12),
                    ("d23", d23),
                    ("d13", d13),
                    ("c1", lipschitz_constant(f)),
                    ("c2", lipschitz_constant(g)),
                    ("c3", lipschitz_constant(r)),
                ],
                "d13 <= 2 (d12 + d23) when d12, d23 <= 1/2",
            ));
        }
        None => items.push(item(5, false, true, &[], "no third system supplied")),
    }

    items.push(item(
        6,
        true,
        fg.upper >= 0.0 && fg.upper.is_finite(),
        &[("pgh0", fg.upper)],
        "0 <= pgh0 < infinity",
    ));
    Ok(PropertyReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gh::{gh_exact, DEFAULT_MAX_ENUM};
    use crate::metric::{validate_metric, DEFAULT_TOL};

    fn line(pts: &[f64]) -> FiniteMetricSpace {
        let m: Vec<Vec<f64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| (a - b).abs()).collect())
            .collect();
        validate_metric(&m, DEFAULT_TOL).unwrap()
    }

    fn sys(pts: &[f64], map: Vec<usize>, base: Option<usize>) -> SelfMapSystem {
        let n = pts.len();
        SelfMapSystem::new(line(pts), MapTable::new(n, map).unwrap(), base).unwrap()
    }

    #[test]
    fn c0_examples() {
        let id = sys(&[0.0, 1.0], vec![0, 1], None);
        let swap = sys(&[0.0, 1.0], vec![1, 0], None);
        assert_eq!(c0_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(c0_distance(&id, &swap).unwrap(), 1.0);
        let other = sys(&[0.0, 2.0], vec![0, 1], None);
        assert_eq!(c0_distance(&id, &other), Err(DynError::SpaceMismatch));
        assert!(swap.bijective);
        assert!(!sys(&[0.0, 1.0], vec![0, 0], None).bijective);
    }

    #[test]
    fn gh0_identity_matches_gh() {
        let x = line(&[0.0, 1.0, 3.0]);
        let y = line(&[0.0, 2.0]);
        let f = SelfMapSystem::identity(x.clone(), None).unwrap();
        let g = SelfMapSystem::identity(y.clone(), None).unwrap();
        let d = gh0_distance(&f, &g, DEFAULT_MAX_ENUM, &[]).unwrap();
        assert_eq!(d.upper, gh_exact(&x, &y, DEFAULT_MAX_ENUM).unwrap().value);
        assert!(d.lower < d.upper);
    }

    #[test]
    fn gh0_singleton_is_diameter() {
        let x = line(&[0.0, 1.0, 3.5]);
        let f = sys(&[0.0, 1.0, 3.5], vec![1, 2, 0], None);
        let g = SelfMapSystem::identity(line(&[0.0]), None).unwrap();
        assert_eq!(
            gh0_distance(&f, &g, DEFAULT_MAX_ENUM, &[]).unwrap().upper,
            x.diameter()
        );
    }

    #[test]
    fn pgh0_two_point_family() {
        for n in 2..=10 {
            let f = sys(&[0.0, n as f64], vec![0, 0], Some(0));
            let g = sys(&[0.0], vec![0], Some(0));
            let d = pgh0_distance(&f, &g, DEFAULT_MAX_ENUM, &[]).unwrap();
            assert!(
                (d.interval.upper - 1.0 / n as f64).abs() < 1e-12,
                "n={n}: {d:?}"
            );
        }
        // A map moving the basepoint cannot be matched by the identity on a point.
        let swap = sys(&[0.0, 3.0], vec![1, 0], Some(0));
        let g = sys(&[0.0], vec![0], Some(0));
        assert_eq!(
            pgh0_distance(&swap, &g, DEFAULT_MAX_ENUM, &[])
                .unwrap()
                .interval
                .upper,
            3.0
        );
    }

    #[test]
    fn pgh0_isometric_conjugates_are_zero() {
        let f = sys(&[0.0, 1.0, 2.0], vec![2, 1, 0], Some(1));
        let g = sys(&[5.0, 4.0, 3.0], vec![2, 1, 0], Some(1));
        let d = pgh0_distance(&f, &g, DEFAULT_MAX_ENUM, &[]).unwrap();
        assert_eq!((d.interval.lower, d.interval.upper), (0.0, 0.0));
    }

    #[test]
    fn local_conjugacy_examples() {
        let pts = [0.0, 1.0, 2.0, 3.0];
        let f = sys(&pts, vec![1, 2, 3, 3], None);
        let u = f.space.set([0, 1]).unwrap();
        let id = MapTable::identity(4);
        let c = is_local_conjugacy(&id, None, &f, &f, &u, &u, true).unwrap();
        assert!(c.holds(DEFAULT_TOL));
        let k = MapTable::constant(4, 4, 0).unwrap();
        let c = is_local_conjugacy(&k, None, &f, &f, &u, &u, false).unwrap();
        assert!(!c.onto_ok);
        let dom = f.space.set([0, 1]).unwrap();
        assert_eq!(
            is_local_conjugacy(&id, Some(&dom), &f, &f, &u, &u, false),
            Err(DynError::DomainEscape(2))
        );
    }

    #[test]
    fn property_items_on_small_systems() {
        let f = sys(&[0.0, 1.0, 3.0], vec![1, 1, 2], Some(0));
        let g = sys(&[0.0, 1.0, 3.0], vec![0, 2, 2], Some(0));
        let r = pointed_property_checks(&f, &g, &PropertyParams::default()).unwrap();
        for n in [1, 2, 4, 6] {
            assert!(r.item(n).unwrap().applicable);
        }
        assert!(r.item(2).unwrap().holds && r.item(4).unwrap().holds && r.item(6).unwrap().holds);
        assert!(r.item(1).unwrap().holds, "{r:?}");

        let idx = SelfMapSystem::identity(line(&[0.0, 1.0, 3.0]), Some(0)).unwrap();
        let idy = SelfMapSystem::identity(line(&[0.0, 2.0]), Some(0)).unwrap();
        let r = pointed_property_checks(&idx, &idy, &PropertyParams::default()).unwrap();
        assert!(r.item(2).unwrap().holds);
        assert_eq!(
            r.item(2).unwrap().values["pgh"],
            r.item(2).unwrap().values["pgh0"]
        );
    }
}
