use proptest::prelude::*;
use pursuit_core::profiles::*;

proptest! {
    #[test]
    fn g_is_the_derivative_of_the_reference(b1 in -3.0..3.0f64, t1 in 0.5..4.0f64, span in 1.0..6.0f64, k1 in 1u32..8, frac in 0.0..1.0f64) {
        let ts = t1 + span;
        let dt = 1e-3;
        let t = t1 + frac * (ts - dt - t1);
        let g = PrescribedTimeProfile::new(ts, k1, dt).unwrap();
        let beta = beta_reference(b1, t1, ts, k1, t).unwrap();
        // d/dt of b1 ((ts - t)/(ts - t1))^k1
        let exact = -(k1 as f64) * b1 * ((ts - t) / (ts - t1)).powi(k1 as i32 - 1) / (ts - t1);
        prop_assert!((g.value(beta, t) - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn profiles_vanish_after_cutoff(h0 in -1.0..1.0f64, t_end in 0.5..10.0f64, k in 1u32..6, after in 0.0..50.0f64) {
        let h = ReachingEliminationProfile::new(t_end, k, h0).unwrap();
        let e = DecoyProfile::new(t_end, k, h0).unwrap();
        let t = t_end + after;
        prop_assert_eq!(h.value(t), 0.0);
        prop_assert_eq!(h.rate(t), 0.0);
        prop_assert_eq!(e.value(t), 0.0);
        prop_assert_eq!(e.rate(t), 0.0);
        prop_assert_eq!(h.value(0.0), h0);
    }

    #[test]
    fn reaching_phase_is_eliminated(beta in -3.0..3.0f64, beta_dot in -0.5..0.5f64, ts in 2.0..10.0f64, k1 in 1u32..8) {
        let g = PrescribedTimeProfile::new(ts, k1, 1e-3).unwrap();
        let s0 = inner_manifold(beta_dot, g.value(beta, 0.0));
        let h = ReachingEliminationProfile::from_inner(ts / 2.0, 3, s0).unwrap();
        prop_assert_eq!(outer_manifold(s0, h.value(0.0)), 0.0);
    }

    #[test]
    fn reference_magnitude_never_grows(b1 in -3.0..3.0f64, k1 in 1u32..8, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (t1, ts) = (3.0, 6.0);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let early = beta_reference(b1, t1, ts, k1, t1 + lo * (ts - t1)).unwrap();
        let late = beta_reference(b1, t1, ts, k1, t1 + hi * (ts - t1)).unwrap();
        prop_assert!(late.abs() <= early.abs());
    }
}
