mod common;

use common::*;
use pursuit_core::engagement::{AgentState, EngagementState};
use pursuit_core::guidance::{GuidanceCommand, PursuerLawKind::*, Switching};
use pursuit_core::oracles::{closed_form_compare, fd_check_los_accel, FdSettings};
use pursuit_core::simulator::{run, step, Integrator, SimulationTrace, TerminalKind, TraceRow};
use pursuit_core::{wrap_pi, wrap_two_pi, CooperationMode, Pair};
use std::f64::consts::PI;

fn offset_decoy(los_deg: f64) -> pursuit_core::simulator::Scenario<f64> {
    let mut s = information(180.0, Png);
    s.pursuer = AgentState::from_polar(
        (0.0, 0.0),
        5000.0,
        deg(los_deg),
        200.0,
        deg(los_deg + 180.0),
    )
    .unwrap();
    s
}

#[test]
fn head_on_engagement_ends_with_defender_capture() {
    let t = run(&maneuver(180.0, Png)).unwrap();
    assert_eq!(t.event.kind, TerminalKind::DefenderCapturesPursuer);
    assert!(t.event.min_r_ep > 1.0);
    assert!(t.event.t_f > 10.0 && t.event.t_f < 15.0);
}

#[test]
fn slower_straight_evader_is_caught_without_defender() {
    let mut s = maneuver(180.0, Png);
    s.limits = limits(20.0, 1e-12, 20.0);
    s.defender = AgentState::new(0.0, -1e6, 200.0, deg(-90.0)).unwrap();
    s.pursuer = AgentState::from_polar((0.0, 0.0), 5000.0, deg(20.0), 200.0, deg(170.0)).unwrap();
    let t = run(&s).unwrap();
    assert_eq!(t.event.kind, TerminalKind::PursuerCapturesEvader);
    assert!(t.event.r_ep_at_tf <= 1.0 + 1e-9);
}

#[test]
fn far_apart_agents_time_out() {
    let mut s = maneuver(180.0, Png);
    s.guidance.t1 = 0.2;
    s.guidance.t_star = 0.4;
    s.sim.t_max = 0.5;
    let t = run(&s).unwrap();
    assert_eq!(t.event.kind, TerminalKind::Timeout);
    assert!((t.event.t_f - 0.5).abs() < 1e-12);
    assert_eq!(t.rows.len(), 501);
}

#[test]
fn trace_is_self_consistent() {
    let s = maneuver(228.0, Png);
    let t = run(&s).unwrap();
    assert!(t.rows.len() as f64 <= s.sim.t_max / s.sim.dt + 1.0);
    for w in t.rows.windows(2) {
        assert!(w[1].state.t > w[0].state.t);
    }
    for r in &t.rows {
        let st = &r.state;
        assert_eq!(st.chi, wrap_two_pi(PI + st.dp.los - st.ed.los));
        assert_eq!(st.beta, wrap_pi(st.chi - st.chi_star));
        assert_eq!(st.pursuer.speed, 200.0);
        assert_eq!(st.evader.speed, 100.0);
        if let Some(c) = r.command {
            assert!(c.a_p.abs() <= 196.2 && c.a_d.abs() <= 196.2 && c.a_e.abs() <= 98.1);
            assert!(c.u.is_some());
        }
    }
    assert!(t.rows.last().unwrap().command.is_none());
}

#[test]
fn decimated_trace_keeps_terminal_row() {
    let mut s = maneuver(180.0, Png);
    s.sim.record_every = 100;
    let full = run(&maneuver(180.0, Png)).unwrap();
    let t = run(&s).unwrap();
    assert_eq!(t.event, full.event);
    assert!(t.rows.len() < full.rows.len() / 50);
    assert_eq!(
        t.rows.last().unwrap().state,
        full.rows.last().unwrap().state
    );
}

fn coast_trace() -> SimulationTrace<f64> {
    let mut s = maneuver(180.0, Png);
    s.defender = AgentState::from_polar((0.0, 0.0), 2000.0, deg(-45.0), 200.0, deg(10.0)).unwrap();
    s.pursuer = AgentState::from_polar((0.0, 0.0), 5000.0, deg(5.0), 200.0, deg(180.0)).unwrap();
    let mut state: EngagementState<f64> = s.initial_state().unwrap();
    let cmd = GuidanceCommand::zero();
    let mut rows = Vec::new();
    for _ in 0..2000 {
        rows.push(TraceRow {
            state,
            command: Some(cmd),
            manifolds: None,
        });
        state = step(&state, &cmd, 1e-3, Integrator::Rk4).unwrap();
    }
    rows.push(TraceRow {
        state,
        command: None,
        manifolds: None,
    });
    let event = run(&s).unwrap().event;
    SimulationTrace {
        rows,
        event,
        guidance_events: Vec::new(),
        dt: 1e-3,
        mode: CooperationMode::ManeuverLevel,
    }
}

#[test]
fn finite_difference_oracle_on_coasting_agents() {
    let t = coast_trace();
    for pair in Pair::ALL {
        let r = fd_check_los_accel(&t, pair, &FdSettings::new(1e-3)).unwrap();
        assert!(r.max_deviation < 1e-8, "{pair}: {}", r.max_deviation);
    }
}

#[test]
fn finite_difference_oracle_on_guided_runs() {
    for law in [Png, Ppg, Dpg] {
        let full = run(&maneuver(228.0, law)).unwrap();
        let t = full.truncated(full.event.t_f - 0.5);
        for pair in Pair::ALL {
            let settings = FdSettings::new(1e-3);
            let r = fd_check_los_accel(&t, pair, &settings).unwrap();
            assert!(r.passes(&settings), "{law:?} {pair}: {}", r.max_deviation);
        }
    }
}

#[test]
fn error_angle_follows_closed_form() {
    let s = maneuver(180.0, Png);
    let t = run(&s).unwrap();
    let (beta_dev, lam_dev) = closed_form_compare(&t, &s.guidance).unwrap();
    assert!(beta_dev < 1e-2, "{beta_dev}");
    assert_eq!(lam_dev, 0.0);
}

#[test]
fn empty_comparison_window_gives_zero() {
    let mut s = maneuver(180.0, Png);
    s.guidance.t1 = s.guidance.t_star - s.sim.dt;
    let t = run(&s).unwrap();
    assert_eq!(closed_form_compare(&t, &s.guidance).unwrap(), (0.0, 0.0));
}

#[test]
fn decoy_nulls_los_rate_on_schedule() {
    let s = offset_decoy(10.0);
    let t = run(&s).unwrap();
    assert_eq!(t.event.kind, TerminalKind::DefenderCapturesPursuer);
    let (_, lam_dev) = closed_form_compare(&t, &s.guidance).unwrap();
    assert!(lam_dev < 1e-4, "{lam_dev}");
    for r in &t.rows {
        let s_e = r.manifolds.unwrap().s_e.unwrap();
        assert!(s_e.abs() <= 2.0 * 5e-3);
        if r.state.t >= 4.05 {
            assert!(r.state.ep.los_rate.abs() < 1e-4);
        }
    }
}

#[test]
fn mirrored_geometry_mirrors_the_decoy_command() {
    let up = run(&offset_decoy(10.0)).unwrap();
    let mut mirrored = offset_decoy(-10.0);
    mirrored.defender =
        AgentState::from_polar((0.0, 0.0), 500.0, deg(-45.0), 200.0, deg(-45.0)).unwrap();
    let down = run(&mirrored).unwrap();
    for (a, b) in up.rows.iter().zip(&down.rows).take(3000) {
        let (a, b) = (a.command.unwrap().a_e, b.command.unwrap().a_e);
        assert!((a + b).abs() <= 1e-6 * (1.0 + a.abs()), "{a} vs {b}");
    }
}

#[test]
fn stationary_evader_is_protected() {
    let t = run(&stationary(1500.0, -10.0, 2.0)).unwrap();
    assert_eq!(t.event.kind, TerminalKind::DefenderCapturesPursuer);
    assert!(t.guidance_events.is_empty());
    for r in t.window(6.0, f64::INFINITY) {
        assert!(r.state.beta.abs() < 1e-2);
        assert_eq!(r.state.evader.x, 0.0);
    }
}

#[test]
fn exact_sign_switching_still_captures() {
    let mut s = maneuver(180.0, Png);
    s.guidance.switching = Switching::Sign;
    assert_eq!(
        run(&s).unwrap().event.kind,
        TerminalKind::DefenderCapturesPursuer
    );
}

#[test]
fn single_precision_run_agrees() {
    let s64 = maneuver(180.0, Png);
    let s32 = pursuit_core::simulator::Scenario::<f32> {
        pursuer: AgentState::from_polar((0.0, 0.0), 5000.0, 0.0, 200.0, std::f32::consts::PI)
            .unwrap(),
        evader: AgentState::new(0.0, 0.0, 100.0, 45f32.to_radians()).unwrap(),
        defender: AgentState::from_polar((0.0, 0.0), 400.0, (-45f32).to_radians(), 200.0, 0.0)
            .unwrap(),
        limits: [196.2f32, 98.1, 196.2]
            .map(|a| pursuit_core::engagement::AgentLimits::new(a).unwrap()),
        guidance: pursuit_core::guidance::GuidanceConfig::maneuver(std::f32::consts::PI),
        pursuer_law: pursuit_core::guidance::PursuerLaw::new(Png),
        sim: pursuit_core::simulator::SimConfig::new(40.0),
    };
    let a = run(&s64).unwrap().event;
    let b = run(&s32).unwrap().event;
    assert_eq!(b.kind, a.kind);
    assert!(
        (b.t_f as f64 - a.t_f).abs() < 0.05,
        "{} vs {}",
        b.t_f,
        a.t_f
    );
}
