//! Property tests for the structural invariants: grid-exact identities that
//! must hold for every seed, window and shift, not just the unit-test ones.

use proptest::prelude::*;
use zerosets::noise::{conditional_expectation, ChaosVector};
use zerosets::paths::{BrownianPath, GridSpec};
use zerosets::sets::{dyadic_pairs, local_minima};

fn path(seed: u64, level: u32) -> BrownianPath {
    BrownianPath::sample(GridSpec::from_times(-2.0, 2.0, level).unwrap(), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_group_law_and_inverse(seed in 0u64..1000, a in -64i64..64, b in -64i64..64) {
        let level = 7u32;
        let p = path(seed, level);
        let u = a as f64 / 128.0;
        let v = b as f64 / 128.0;
        if (u + v).abs() > 1.9 { return Ok(()); }
        let once = p.shift(u + v).unwrap();
        let twice = p.shift(u).unwrap().shift(v).unwrap();
        prop_assert_eq!(once.grid(), twice.grid());
        for (x, y) in once.values().iter().zip(twice.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let back = p.shift(u).unwrap().shift(-u).unwrap();
        for (x, y) in back.values().iter().zip(p.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_never_touches_existing_nodes(seed in 0u64..500, extra in 1u32..3, rseed in 0u64..100) {
        let p = BrownianPath::sample(GridSpec::from_times(0.0, 1.0, 5).unwrap(), seed).unwrap();
        let r = p.refine(extra, rseed).unwrap();
        let factor = 1i64 << extra;
        for tick in 0..=p.grid().right_ticks() {
            prop_assert_eq!(
                p.value_at_tick(tick).unwrap(),
                r.value_at_tick(tick * factor).unwrap()
            );
        }
    }

    #[test]
    fn reflect_shift_intertwine(seed in 0u64..500, a in -32i64..32) {
        let p = path(seed, 6);
        let u = a as f64 / 64.0;
        let lhs = p.shift(u).unwrap().reflect();
        let rhs = p.reflect().shift(-u).unwrap();
        prop_assert_eq!(lhs.grid(), rhs.grid());
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn set_points_stay_inside_their_provenance(seed in 0u64..300) {
        let p = BrownianPath::sample(GridSpec::from_times(0.0, 1.0, 9).unwrap(), seed).unwrap();
        let pairs = dyadic_pairs(0.0, 1.0, 4, 9).unwrap();
        let set = local_minima(&p, &pairs).unwrap();
        for e in &set.entries {
            if let Some(v) = e.value {
                prop_assert!(v > e.provenance.0 && v < e.provenance.1);
            }
        }
    }

    #[test]
    fn localize_shift_commutation(seed in 0u64..300, k in -16i64..16) {
        let p = BrownianPath::sample(GridSpec::from_times(0.0, 2.0, 8).unwrap(), seed).unwrap();
        let pairs = dyadic_pairs(0.0, 2.0, 3, 8).unwrap();
        let s = local_minima(&p, &pairs).unwrap();
        let h = k as f64 / 16.0;
        let (a, b) = (0.5, 1.5);
        if a - h < s.window.0 || b - h > s.window.1 { return Ok(()); }
        let lhs = s.shifted(h).localize(a, b).unwrap();
        let rhs = s.localize(a - h, b - h).unwrap().shifted(h);
        prop_assert_eq!(lhs.entries.len(), rhs.entries.len());
        for (x, y) in lhs.entries.iter().zip(&rhs.entries) {
            match (x.value, y.value) {
                (Some(u), Some(v)) => prop_assert!((u - v).abs() < 1e-12),
                (None, None) => {}
                _ => prop_assert!(false, "coffin mismatch"),
            }
        }
    }

    #[test]
    fn conditional_expectation_tower_property(
        seed in 0u64..200,
        masks in prop::collection::vec((0u32..64, -1.0f64..1.0), 1..12),
        w1 in (0.0f64..0.5, 0.5f64..1.0),
        w2 in (0.0f64..0.5, 0.5f64..1.0),
    ) {
        // CE(CE(f, w1), w2) == CE(f, w1 cap w2) for interval windows
        let p = BrownianPath::sample(GridSpec::from_times(0.0, 1.0, 10).unwrap(), seed).unwrap();
        let set = local_minima(&p, &dyadic_pairs(0.0, 1.0, 5, 10).unwrap()).unwrap();
        let sample = zerosets::noise::attach_signs(&set, 6, seed).unwrap();
        let f = ChaosVector::from_pairs(masks);
        let inner = conditional_expectation(&f, &sample, w1).unwrap();
        let lhs = conditional_expectation(&inner, &sample, w2).unwrap();
        let cap = (w1.0.max(w2.0), w1.1.min(w2.1));
        let rhs = conditional_expectation(&f, &sample, cap).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
