#![allow(dead_code)]

use pursuit_core::engagement::{AgentLimits, AgentState};
use pursuit_core::guidance::{GuidanceConfig, PursuerLaw, PursuerLawKind};
use pursuit_core::simulator::{Scenario, SimConfig};
use pursuit_core::STANDARD_GRAVITY;

pub fn deg(d: f64) -> f64 {
    d.to_radians()
}

pub fn limits(p_g: f64, e_g: f64, d_g: f64) -> [AgentLimits<f64>; 3] {
    [p_g, e_g, d_g].map(|g| AgentLimits::new(g * STANDARD_GRAVITY).unwrap())
}

fn polar(range: f64, los_deg: f64, speed: f64, heading_deg: f64) -> AgentState<f64> {
    AgentState::from_polar((0.0, 0.0), range, deg(los_deg), speed, deg(heading_deg)).unwrap()
}

/// Head-on maneuver-level geometry.
pub fn maneuver(chi_star_deg: f64, law: PursuerLawKind) -> Scenario<f64> {
    Scenario {
        pursuer: polar(5000.0, 0.0, 200.0, 180.0),
        evader: AgentState::new(0.0, 0.0, 100.0, deg(45.0)).unwrap(),
        defender: polar(400.0, -45.0, 200.0, 0.0),
        limits: limits(20.0, 10.0, 20.0),
        guidance: GuidanceConfig::maneuver(deg(chi_star_deg)),
        pursuer_law: PursuerLaw::new(law),
        sim: SimConfig::new(40.0),
    }
}

/// Information-level geometry.
pub fn information(chi_star_deg: f64, law: PursuerLawKind) -> Scenario<f64> {
    Scenario {
        pursuer: polar(5000.0, 0.0, 200.0, 180.0),
        evader: AgentState::new(0.0, 0.0, 100.0, 0.0).unwrap(),
        defender: polar(500.0, 45.0, 200.0, 45.0),
        limits: limits(20.0, 10.0, 20.0),
        guidance: GuidanceConfig::information(deg(chi_star_deg)),
        pursuer_law: PursuerLaw::new(law),
        sim: SimConfig::new(40.0),
    }
}

/// Stationary evader with the pursuer flying straight at it.
pub fn stationary(d_range: f64, d_los: f64, p_los: f64) -> Scenario<f64> {
    let mut s = maneuver(180.0, PursuerLawKind::Png);
    s.evader = AgentState::new(0.0, 0.0, 0.0, 0.0).unwrap();
    s.defender = polar(d_range, d_los, 200.0, 0.0);
    s.pursuer = polar(5000.0, p_los, 200.0, p_los + 180.0);
    s
}

use proptest::prelude::*;
use pursuit_core::engagement::EngagementState;

/// Three agents at least 20 m apart with arbitrary headings.
pub fn arb_state() -> impl Strategy<Value = EngagementState<f64>> {
    let agent = (
        -3000.0..3000.0f64,
        -3000.0..3000.0f64,
        50.0..300.0f64,
        -std::f64::consts::PI..std::f64::consts::PI,
    );
    (agent.clone(), agent.clone(), agent, 90.0..270.0f64)
        .prop_filter("agents too close", |(p, e, d, _)| {
            let far = |a: &(f64, f64, f64, f64), b: &(f64, f64, f64, f64)| {
                (a.0 - b.0).hypot(a.1 - b.1) > 20.0
            };
            far(p, e) && far(p, d) && far(e, d)
        })
        .prop_map(|(p, e, d, cs)| {
            let mk = |a: (f64, f64, f64, f64)| AgentState::new(a.0, a.1, a.2, a.3).unwrap();
            EngagementState::new(0.0, mk(p), mk(e), mk(d), deg(cs)).unwrap()
        })
}
