mod common;

use common::euclidean;
use ghdyn_core::{
    c0_distance, covering_radius, distortion, gh_exact, gh_sandwich, gh_upper, is_gha,
    pgh_distance, validate_metric, FiniteMetricSpace, MapTable, MetricError, PointedSpace,
    SelfMapSystem, DEFAULT_MAX_ENUM,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn space(max: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    prop::collection::btree_set((0u8..13, 0u8..13), 1..=max).prop_map(|s| {
        euclidean(
            &s.into_iter()
                .map(|(a, b)| (a as f64 / 4.0, b as f64 / 4.0))
                .collect::<Vec<_>>(),
        )
    })
}

fn pointed(max: usize) -> impl Strategy<Value = PointedSpace> {
    space(max).prop_flat_map(|s| {
        let n = s.len();
        (Just(s), 0..n).prop_map(|(s, b)| PointedSpace::single(s, b).unwrap())
    })
}

fn system(max: usize) -> impl Strategy<Value = SelfMapSystem> {
    space(max).prop_flat_map(|s| {
        let n = s.len();
        (Just(s), prop::collection::vec(0..n, n)).prop_map(move |(s, img)| {
            SelfMapSystem::new(s, MapTable::new(n, img).unwrap(), None).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gh_is_symmetric_and_bounded(x in space(5), y in space(5)) {
        let a = gh_exact(&x, &y, DEFAULT_MAX_ENUM).unwrap().value;
        let b = gh_exact(&y, &x, DEFAULT_MAX_ENUM).unwrap().value;
        prop_assert_eq!(a, b);
        prop_assert!(a <= x.diameter().max(y.diameter()) + TOL);
        prop_assert!(a >= (x.diameter() - y.diameter()).abs() / 2.0 - TOL);
    }

    #[test]
    fn gh_of_a_space_with_itself_is_zero(x in space(6)) {
        prop_assert!(gh_exact(&x, &x, DEFAULT_MAX_ENUM).unwrap().value.abs() <= TOL);
    }

    #[test]
    fn heuristic_never_beats_exact(x in space(5), y in space(5), seed in any::<u64>()) {
        let exact = gh_exact(&x, &y, DEFAULT_MAX_ENUM).unwrap().value;
        prop_assert!(gh_upper(&x, &y, 4, seed).value >= exact - TOL);
    }

    #[test]
    fn gh_witnesses_are_certified(x in space(5), y in space(5)) {
        let sol = gh_exact(&x, &y, DEFAULT_MAX_ENUM).unwrap();
        let eps = sol.value.max(TOL);
        prop_assert!(is_gha(&sol.forward, &x, &y, eps).unwrap().is_valid());
        prop_assert!(is_gha(&sol.backward, &y, &x, eps).unwrap().is_valid());
        let measured = distortion(&sol.forward, &x, &y).unwrap().max(covering_radius(&sol.forward, &x, &y).unwrap());
        prop_assert!(measured <= eps + TOL);
    }

    #[test]
    fn gh_hat_sandwich_holds(x in space(4), y in space(4)) {
        let s = gh_sandwich(&x, &y, DEFAULT_MAX_ENUM).unwrap();
        prop_assert!(s.lower_holds && s.upper_holds, "{:?}", s);
    }

    #[test]
    fn pgh_is_symmetric_with_monotone_flag(x in pointed(4), y in pointed(4)) {
        let a = pgh_distance(&x, &y, &[], DEFAULT_MAX_ENUM).unwrap();
        let b = pgh_distance(&y, &x, &[], DEFAULT_MAX_ENUM).unwrap();
        prop_assert_eq!(a.upper, b.upper);
        prop_assert!(a.lower <= a.upper);
        prop_assert_eq!(a.monotone, a.gaps.is_empty());
    }

    #[test]
    fn c0_is_a_metric_on_maps(f in system(5)) {
        prop_assert_eq!(c0_distance(&f, &f).unwrap(), 0.0);
        let n = f.len();
        let g = SelfMapSystem::new(f.space.clone(), MapTable::identity(n), None).unwrap();
        let h = SelfMapSystem::new(f.space.clone(), MapTable::constant(n, n, 0).unwrap(), None).unwrap();
        let fg = c0_distance(&f, &g).unwrap();
        let gh = c0_distance(&g, &h).unwrap();
        prop_assert_eq!(fg, c0_distance(&g, &f).unwrap());
        prop_assert!(c0_distance(&f, &h).unwrap() <= fg + gh + TOL);
    }

    #[test]
    fn validation_rejects_broken_triangles(a in 0.1f64..1.0, b in 0.1f64..1.0, extra in 0.01f64..1.0) {
        let c = a + b + extra;
        let m = vec![vec![0.0, a, c], vec![a, 0.0, b], vec![c, b, 0.0]];
        let rejected = matches!(validate_metric(&m, TOL), Err(MetricError::TriangleViolation { .. }));
        prop_assert!(rejected);
        let ok = vec![vec![0.0, a, a + b], vec![a, 0.0, b], vec![a + b, b, 0.0]];
        prop_assert!(validate_metric(&ok, TOL).is_ok());
    }
}
