mod common;

use common::*;
use proptest::prelude::*;
use pursuit_core::engagement::*;
use pursuit_core::guidance::GuidanceCommand;
use pursuit_core::simulator::{step, Integrator};
use pursuit_core::{wrap_pi, wrap_two_pi};
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rates_are_projections_of_relative_velocity(s in arb_state()) {
        for (a, b, p) in [(&s.evader, &s.pursuer, &s.ep), (&s.defender, &s.pursuer, &s.dp), (&s.evader, &s.defender, &s.ed)] {
            let (va, vb) = (a.velocity(), b.velocity());
            let rel = (vb.0 - va.0, vb.1 - va.1);
            let u = ((b.x - a.x) / p.range, (b.y - a.y) / p.range);
            let along = rel.0 * u.0 + rel.1 * u.1;
            let across = -rel.0 * u.1 + rel.1 * u.0;
            prop_assert!((p.range_rate - along).abs() < 1e-12);
            prop_assert!((p.range * p.los_rate - across).abs() < 1e-12);
        }
    }

    #[test]
    fn swapping_a_pair_reverses_the_los(s in arb_state()) {
        let fwd = pair_kinematics(&s.evader, &s.defender).unwrap();
        let rev = pair_kinematics(&s.defender, &s.evader).unwrap();
        prop_assert_eq!(fwd.range, rev.range);
        prop_assert!(wrap_pi(rev.los - wrap_pi(fwd.los + PI)).abs() < 1e-12);
        prop_assert!((fwd.range_rate - rev.range_rate).abs() < 1e-12);
        // The reversed LOS differs by a constant pi, so it rotates at the same rate.
        prop_assert!((fwd.los_rate - rev.los_rate).abs() < 1e-15);
    }

    #[test]
    fn angle_invariants_hold(s in arb_state()) {
        prop_assert!(s.chi >= 0.0 && s.chi < 2.0 * PI);
        prop_assert_eq!(s.chi, wrap_two_pi(PI + s.dp.los - s.ed.los));
        prop_assert!(s.beta > -PI && s.beta <= PI);
        prop_assert_eq!(s.beta, wrap_pi(s.chi - s.chi_star));
        prop_assert_eq!(s.ep.lead_second, wrap_pi(s.pursuer.heading - s.ep.los));
        prop_assert_eq!(s.dp.lead_first, wrap_pi(s.defender.heading - s.dp.los));
    }

    #[test]
    fn beta_accel_is_affine_in_pursuer_command(s in arb_state(), a_p in -200.0..200.0f64, a_e in -100.0..100.0f64, a_d in -200.0..200.0f64) {
        let base = beta_accel(&s, 0.0, a_e, a_d).unwrap();
        let full = beta_accel(&s, a_p, a_e, a_d).unwrap();
        let slope = s.dp.lead_second.cos() / s.dp.range;
        prop_assert!((full - base - slope * a_p).abs() < 1e-12 * (1.0 + full.abs()));
        let diff = los_accel_dp(&s, a_p, a_d).unwrap() - los_accel_ed(&s, a_e, a_d).unwrap();
        prop_assert!((full - diff).abs() < 1e-12 * (1.0 + full.abs()));
    }

    #[test]
    fn integration_keeps_speeds_and_consistent_pairs(s in arb_state(), a in prop::array::uniform3(-200.0..200.0f64)) {
        let cmd = GuidanceCommand { a_p: a[0], a_e: a[1], a_d: a[2], raw_a_p: a[0], raw_a_e: a[1], raw_a_d: a[2], u: None };
        let mut cur = s;
        for _ in 0..50 {
            cur = step(&cur, &cmd, 1e-2, Integrator::Rk4).unwrap();
        }
        prop_assert_eq!(cur.pursuer.speed, s.pursuer.speed);
        prop_assert_eq!(cur.evader.speed, s.evader.speed);
        prop_assert_eq!(cur.defender.speed, s.defender.speed);
        let v = cur.pursuer.velocity();
        prop_assert!((v.0.hypot(v.1) - s.pursuer.speed).abs() < 1e-12 * s.pursuer.speed);
        let fresh = pair_kinematics(&cur.defender, &cur.pursuer).unwrap();
        prop_assert!((fresh.range - cur.dp.range).abs() <= 1e-9 * cur.dp.range);
        prop_assert!(wrap_pi(fresh.los - cur.dp.los).abs() <= 1e-9);
        prop_assert!(cur.pursuer.heading > -PI && cur.pursuer.heading <= PI);
    }
}
