//! Property tests for the rearrangement-side invariants.

use hardylab::{BoundSide, LorentzParams, StepFunction};
use proptest::prelude::*;

fn step_strategy() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((1e-3f64..1e3, 1e-3f64..1e3), 1..50).prop_map(|pieces| {
        StepFunction::new(pieces, 3)
            .unwrap()
            .decreasing_rearrangement()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equimeasurability_under_rearrangement(pieces in prop::collection::vec((1e-3f64..1e3, 1e-3f64..1e3), 1..50)) {
        let u = StepFunction::new(pieces.clone(), 3).unwrap();
        let r = u.decreasing_rearrangement();
        for s in [1.0, 2.0, 2.5, 6.0] {
            let direct: f64 = pieces.iter().map(|&(v, m)| v.powf(s) * m).sum();
            prop_assert!((r.moment(s) - direct).abs() <= 1e-12 * direct.max(1e-300));
        }
    }

    #[test]
    fn rearranged_values_strictly_decreasing(u in step_strategy()) {
        for w in u.pieces().windows(2) {
            prop_assert!(w[0].0 > w[1].0);
        }
    }

    #[test]
    fn dilation_exponent_law(u in step_strategy(), m in 0.05f64..20.0, beta in -2.0f64..2.0) {
        let n = u.dim() as f64;
        for q in [1.0, 2.0, 5.0, f64::INFINITY] {
            let p = 5.0f64;
            let params = LorentzParams::new(p, if q == 5.0 { p } else { q }).unwrap();
            let base = u.lorentz_norm(params).unwrap();
            let scaled = u.dilate(m, beta).unwrap().lorentz_norm(params).unwrap();
            let want = m.powf(beta - n / p) * base;
            prop_assert!(
                (scaled - want).abs() <= 1e-12 * want.max(1e-300),
                "q = {}: {} vs {}", q, scaled, want
            );
        }
    }

    #[test]
    fn weak_norm_sup_attained_at_right_endpoints(u in step_strategy()) {
        let p = 2.5f64;
        let weak = u.lorentz_norm(LorentzParams::new(p, f64::INFINITY).unwrap()).unwrap();
        // evaluate t^{1/p} u*(t) slightly inside each constancy interval and
        // at its right endpoint: the sup must match the endpoint scan
        let mut t = 0.0;
        let mut sup_interior: f64 = 0.0;
        for &(v, m) in u.pieces() {
            let right = t + m;
            sup_interior = sup_interior.max(v * (right * (1.0 - 1e-9)).powf(1.0 / p));
            t = right;
        }
        prop_assert!(sup_interior <= weak * (1.0 + 1e-9));
        prop_assert!(weak <= sup_interior * (1.0 + 1e-6));
    }

    #[test]
    fn tail_bound_holds(u in step_strategy(), cut in 1e-3f64..1e3) {
        let (lhs, rhs) = u
            .tail_head_bound(LorentzParams::new(1.2, f64::INFINITY).unwrap(), cut, BoundSide::Tail)
            .unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}
