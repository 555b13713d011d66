//! Validated finite metric spaces, point sets, balls, tubes and the Hausdorff
//! distance between subsets of one space.
//!
//! Balls are open: `B(c, r) = { p : d(c, p) < r }`. Every comparison goes
//! through the space tolerance. Strict inequalities on radii are evaluated as
//! `d < r - tol`; the `≤`-style feasibility predicates used by the approximation
//! checks are evaluated as `a <= b + tol` (see [`le_tol`] and [`lt_tol`]).

use serde::Serialize;
use thiserror::Error;

/// Default comparison tolerance for distances.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `a ≤ b` up to `tol`.
#[inline]
pub fn le_tol(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol
}

/// `a < b` with a margin of `tol`.
#[inline]
pub fn lt_tol(a: f64, b: f64, tol: f64) -> bool {
    a < b - tol
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("metric space must contain at least one point")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("{labels} labels supplied for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("non-finite distance at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("negative distance {value} at ({i}, {j})")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("nonzero self-distance {value} at point {i}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetric matrix: d({i},{j}) = {dij} but d({j},{i}) = {dji}")]
    AsymmetricMatrix {
        i: usize,
        j: usize,
        dij: f64,
        dji: f64,
    },
    #[error("points {i} and {j} are at distance {value}, not distinct")]
    DuplicatePoints { i: usize, j: usize, value: f64 },
    #[error("triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("tolerance must be finite and nonnegative, got {0}")]
    InvalidTolerance(f64),
    #[error("index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("set is empty")]
    EmptySet,
    #[error("point set belongs to a space of {set} points, not {space}")]
    UniverseMismatch { set: usize, space: usize },
    #[error("basepoint list is empty")]
    NoBasepoint,
}

/// A finite metric space with labeled points and a validated distance matrix.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
    tol: f64,
}

/// Validates `matrix` as a metric with tolerance `tol`. Points are labeled
/// `"0"`, `"1"`, ...
pub fn validate_metric(matrix: &[Vec<f64>], tol: f64) -> Result<FiniteMetricSpace, MetricError> {
    let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
    FiniteMetricSpace::new(labels, matrix, tol)
}

impl FiniteMetricSpace {
    /// Builds and validates a space. Checks run in the order: shape, finiteness,
    /// sign, diagonal, symmetry, distinctness, triangle inequality. The first
    /// violation found (scanning indices in increasing order) is returned.
    pub fn new(labels: Vec<String>, matrix: &[Vec<f64>], tol: f64) -> Result<Self, MetricError> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(MetricError::InvalidTolerance(tol));
        }
        let n = matrix.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if labels.len() != n {
            return Err(MetricError::LabelCount {
                labels: labels.len(),
                points: n,
            });
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let dist: Vec<f64> = matrix.iter().flatten().copied().collect();
        let at = |i: usize, j: usize| dist[i * n + j];

        for i in 0..n {
            for j in 0..n {
                let v = at(i, j);
                if !v.is_finite() {
                    return Err(MetricError::NonFinite { i, j });
                }
                if v < 0.0 {
                    return Err(MetricError::NegativeDistance { i, j, value: v });
                }
            }
        }
        for i in 0..n {
            if at(i, i) > tol {
                return Err(MetricError::NonzeroDiagonal { i, value: at(i, i) });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (at(i, j) - at(j, i)).abs() > tol {
                    return Err(MetricError::AsymmetricMatrix {
                        i,
                        j,
                        dij: at(i, j),
                        dji: at(j, i),
                    });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, j) <= tol {
                    return Err(MetricError::DuplicatePoints {
                        i,
                        j,
                        value: at(i, j),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, j) > at(i, k) + at(k, j) + tol {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        let mut space = Self {
            labels,
            dist,
            n,
            tol,
        };
        // Snap the diagonal to exact zero and symmetrize.
        for i in 0..n {
            space.dist[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let v = space.dist[i * n + j];
                space.dist[j * n + i] = v;
            }
        }
        Ok(space)
    }

    /// Builds a space from a flat row-major matrix without checking the metric
    /// axioms. Used by the generators, whose metrics are correct by
    /// construction and too large for the cubic triangle check.
    pub fn assume_valid(labels: Vec<String>, flat: Vec<f64>, tol: f64) -> Self {
        let n = labels.len();
        assert_eq!(flat.len(), n * n, "flat matrix must be n*n");
        assert!(n > 0, "empty space");
        Self {
            labels,
            dist: flat,
            n,
            tol,
        }
    }

    /// Same points and distances with a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Result<Self, MetricError> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(MetricError::InvalidTolerance(tol));
        }
        self.tol = tol;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn tol(&self) -> f64 {
        self.tol
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Rows of the distance matrix.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn check_index(&self, index: usize) -> Result<(), MetricError> {
        if index < self.n {
            Ok(())
        } else {
            Err(MetricError::IndexOutOfRange {
                index,
                size: self.n,
            })
        }
    }

    /// Largest distance; 0 for a singleton.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Largest distance from `p`.
    pub fn eccentricity(&self, p: usize) -> f64 {
        self.row(p).iter().copied().fold(0.0, f64::max)
    }

    /// Smallest distance between distinct points (`+inf` for a singleton).
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                best = best.min(self.d(i, j));
            }
        }
        best
    }

    /// Sorted distinct entries of the upper triangle.
    pub fn distance_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn all(&self) -> PointSet {
        PointSet {
            universe: self.n,
            members: (0..self.n).collect(),
        }
    }

    pub fn set<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<PointSet, MetricError> {
        PointSet::new(self.n, members)
    }

    /// Open ball `{ p : d(center, p) < r }`. Always contains `center`.
    pub fn ball(&self, center: usize, r: f64) -> PointSet {
        let members = (0..self.n)
            .filter(|&p| p == center || lt_tol(self.d(center, p), r, self.tol))
            .collect();
        PointSet {
            universe: self.n,
            members,
        }
    }

    /// Distance from `p` to a set; `+inf` for the empty set.
    pub fn dist_to_set(&self, p: usize, set: &PointSet) -> f64 {
        set.iter()
            .map(|a| self.d(p, a))
            .fold(f64::INFINITY, f64::min)
    }

    /// ε-tube `N_ε(A) = { z : d(z, A) < ε }`.
    pub fn tube(&self, set: &PointSet, eps: f64) -> PointSet {
        let members = (0..self.n)
            .filter(|&z| set.contains(z) || lt_tol(self.dist_to_set(z, set), eps, self.tol))
            .collect();
        PointSet {
            universe: self.n,
            members,
        }
    }

    /// Hausdorff distance between two nonempty subsets.
    pub fn hausdorff(&self, a: &PointSet, b: &PointSet) -> Result<f64, MetricError> {
        for s in [a, b] {
            if s.universe != self.n {
                return Err(MetricError::UniverseMismatch {
                    set: s.universe,
                    space: self.n,
                });
            }
            if s.is_empty() {
                return Err(MetricError::EmptySet);
            }
        }
        let one_way = |from: &PointSet, to: &PointSet| {
            from.iter()
                .map(|p| self.dist_to_set(p, to))
                .fold(0.0, f64::max)
        };
        Ok(one_way(a, b).max(one_way(b, a)))
    }
}

/// Sorted, duplicate-free set of point indices of a space with `universe` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PointSet {
    universe: usize,
    members: Vec<usize>,
}

impl PointSet {
    pub fn new<I: IntoIterator<Item = usize>>(
        universe: usize,
        members: I,
    ) -> Result<Self, MetricError> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= universe) {
            return Err(MetricError::IndexOutOfRange {
                index: bad,
                size: universe,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { universe, members })
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            members: Vec::new(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        PointSet {
            universe: self.universe.max(other.universe),
            members,
        }
    }
}

/// A space with one or more distinguished basepoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PointedSpace {
    pub space: FiniteMetricSpace,
    basepoints: Vec<usize>,
}

impl PointedSpace {
    pub fn new(space: FiniteMetricSpace, basepoints: Vec<usize>) -> Result<Self, MetricError> {
        if basepoints.is_empty() {
            return Err(MetricError::NoBasepoint);
        }
        for &b in &basepoints {
            space.check_index(b)?;
        }
        Ok(Self { space, basepoints })
    }

    pub fn single(space: FiniteMetricSpace, basepoint: usize) -> Result<Self, MetricError> {
        Self::new(space, vec![basepoint])
    }

    /// The first basepoint.
    pub fn basepoint(&self) -> usize {
        self.basepoints[0]
    }

    pub fn basepoints(&self) -> &[usize] {
        &self.basepoints
    }

    pub fn is_single(&self) -> bool {
        self.basepoints.len() == 1
    }
}
