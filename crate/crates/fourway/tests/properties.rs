//! Property tests over randomized configurations and point sets.

use fourway::af::{af2_feasible, af_equivalent_snrs};
use fourway::model::{capacity, RateTuple, SystemConfig};
use fourway::tracer::{boundary_height, contained_within, convex_closure};
use proptest::prelude::*;

fn arb_config() -> impl Strategy<Value = SystemConfig> {
    (
        prop::array::uniform4(0.01f64..3.0),
        prop::array::uniform5(0.1f64..30.0),
        0.2f64..5.0,
    )
        .prop_map(|(g, p, noise)| SystemConfig {
            g11: g[0],
            g12: g[1],
            g22: g[2],
            g21: g[3],
            p1: p[0],
            p_r1: p[1],
            p_b: p[2],
            p_r2: p[3],
            p2: p[4],
            noise_var: noise,
        })
}

fn arb_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn capacity_strictly_increasing_and_concave(a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(capacity(lo) < capacity(hi));
        let mid = capacity(0.5 * (lo + hi));
        let chord = 0.5 * (capacity(lo) + capacity(hi));
        prop_assert!(mid >= chord - 1e-12);
    }

    #[test]
    fn validation_is_idempotent(cfg in arb_config()) {
        let once = cfg.validated().unwrap();
        let twice = once.validated().unwrap();
        prop_assert_eq!(once, twice);
        prop_assert_eq!(once.noise_var, 1.0);
    }

    #[test]
    fn hull_is_idempotent_and_dominates(points in arb_points()) {
        let hull = convex_closure(&points).unwrap();
        let again = convex_closure(&hull).unwrap();
        prop_assert_eq!(&hull, &again);
        let (inside, worst) = contained_within(&points, &hull, 1e-9);
        prop_assert!(inside, "input point above its hull by {}", worst);
        // Endpoints touch the axes.
        prop_assert_eq!(hull.first().unwrap().0, 0.0);
        prop_assert_eq!(hull.last().unwrap().1, 0.0);
    }

    #[test]
    fn hull_height_never_below_any_input(points in arb_points(), x in 0.0f64..5.0) {
        let hull = convex_closure(&points).unwrap();
        // Height is nonincreasing in x beyond every input's abscissa.
        let h = boundary_height(&hull, x);
        for &(px, py) in &points {
            if px >= x {
                prop_assert!(h >= py - 1e-9);
            }
        }
    }

    #[test]
    fn bc_corner_points_reachable_at_extreme_splits(cfg in arb_config()) {
        // At the extreme superposition splits the two-phase AF downlink
        // reaches each user's single-layer capacity.
        let cfg = cfg.validated().unwrap();
        let snrs = af_equivalent_snrs(&cfg);
        let corner1 = RateTuple::new(0.0, 0.5 * capacity(snrs.s1), 0.0, 0.0);
        prop_assert!(af2_feasible(&corner1, 1.0, &cfg));
        let corner2 = RateTuple::new(0.0, 0.0, 0.0, 0.5 * capacity(snrs.s2));
        prop_assert!(af2_feasible(&corner2, 0.0, &cfg));
    }

    #[test]
    fn uplink_face_of_af2_ignores_split(cfg in arb_config(), r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
        let cfg = cfg.validated().unwrap();
        let rates = RateTuple::new(r1, 0.0, r2, 0.0);
        let base = af2_feasible(&rates, 0.0, &cfg);
        for alpha in [0.2, 0.5, 0.8, 1.0] {
            prop_assert_eq!(af2_feasible(&rates, alpha, &cfg), base);
        }
    }
}
