//! Fixed-step integration of the three-agent system with terminal-event
//! detection and a full per-step trace.

use crate::engagement::{AgentLimits, AgentState, EngagementState};
use crate::error::{invalid, Error, Result};
use crate::guidance::{
    Controller, CooperationMode, GuidanceCommand, GuidanceConfig, GuidanceEvent, Manifolds,
    PursuerLaw, MAX_HELD_STEPS,
};
use crate::scalar::{wrap_pi, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    #[default]
    Rk4,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T> {
    pub dt: T,
    pub t_max: T,
    pub capture_radius: T,
    pub evader_loss_radius: T,
    pub integrator: Integrator,
    /// Keep every n-th step in the trace. The final row is always kept.
    pub record_every: usize,
}

impl<T: Scalar> SimConfig<T> {
    /// 1 ms steps, 1 m capture and loss radii, RK4, every step recorded.
    pub fn new(t_max: T) -> Self {
        Self {
            dt: T::lit(1e-3),
            t_max,
            capture_radius: T::one(),
            evader_loss_radius: T::one(),
            integrator: Integrator::Rk4,
            record_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.dt) {
            return Err(invalid("dt", format!("{} must be positive", self.dt)));
        }
        if !positive(self.t_max) {
            return Err(invalid("t_max", format!("{} must be positive", self.t_max)));
        }
        if !positive(self.capture_radius) {
            return Err(invalid(
                "capture_radius",
                format!("{} must be positive", self.capture_radius),
            ));
        }
        if !positive(self.evader_loss_radius) {
            return Err(invalid(
                "evader_loss_radius",
                format!("{} must be positive", self.evader_loss_radius),
            ));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be at least 1"));
        }
        Ok(())
    }

    fn steps(&self) -> u64 {
        (self.t_max / self.dt).round().to_u64().unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalKind {
    DefenderCapturesPursuer,
    PursuerCapturesEvader,
    Timeout,
    DegenerateGeometryAbort,
}

impl TerminalKind {
    pub fn name(self) -> &'static str {
        match self {
            TerminalKind::DefenderCapturesPursuer => "defender_captures_pursuer",
            TerminalKind::PursuerCapturesEvader => "pursuer_captures_evader",
            TerminalKind::Timeout => "timeout",
            TerminalKind::DegenerateGeometryAbort => "degenerate_geometry_abort",
        }
    }
}

impl std::fmt::Display for TerminalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalEvent<T> {
    pub kind: TerminalKind,
    pub t_f: T,
    pub r_ep_at_tf: T,
    pub min_r_ep: T,
}

/// One recorded instant. `command` is absent on the terminal row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub state: EngagementState<T>,
    pub command: Option<GuidanceCommand<T>>,
    pub manifolds: Option<Manifolds<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace<T> {
    pub rows: Vec<TraceRow<T>>,
    pub event: TerminalEvent<T>,
    pub guidance_events: Vec<GuidanceEvent<T>>,
    pub dt: T,
    pub mode: CooperationMode,
}

impl<T: Scalar> SimulationTrace<T> {
    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        self.rows.iter().map(|r| r.state.t)
    }

    /// Rows whose time lies in `[start, end]`.
    pub fn window(&self, start: T, end: T) -> impl Iterator<Item = &TraceRow<T>> + '_ {
        self.rows
            .iter()
            .filter(move |r| r.state.t >= start && r.state.t <= end)
    }

    /// Copy of the trace keeping only rows up to `t_end`.
    pub fn truncated(&self, t_end: T) -> Self {
        let rows = self
            .rows
            .iter()
            .take_while(|r| r.state.t <= t_end)
            .copied()
            .collect();
        Self {
            rows,
            event: self.event,
            guidance_events: self.guidance_events.clone(),
            dt: self.dt,
            mode: self.mode,
        }
    }

    /// Row closest to `t`.
    pub fn at(&self, t: T) -> Option<&TraceRow<T>> {
        self.rows.iter().min_by(|a, b| {
            let da = (a.state.t - t).abs();
            let db = (b.state.t - t).abs();
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

/// Complete description of one engagement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario<T> {
    pub pursuer: AgentState<T>,
    pub evader: AgentState<T>,
    pub defender: AgentState<T>,
    /// Ordered pursuer, evader, defender.
    pub limits: [AgentLimits<T>; 3],
    pub guidance: GuidanceConfig<T>,
    pub pursuer_law: PursuerLaw<T>,
    pub sim: SimConfig<T>,
}

impl<T: Scalar> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        self.guidance.validate()?;
        self.pursuer_law.validate()?;
        self.sim.validate()?;
        if !(self.sim.t_max > self.guidance.horizon()) {
            return Err(invalid(
                "t_max",
                format!("{} must exceed every profile horizon", self.sim.t_max),
            ));
        }
        for (name, agent) in [("pursuer", &self.pursuer), ("defender", &self.defender)] {
            if agent.is_stationary() {
                return Err(invalid(name, "speed must be positive"));
            }
        }
        self.initial_state().map(|_| ())
    }

    pub fn initial_state(&self) -> Result<EngagementState<T>> {
        EngagementState::new(
            T::zero(),
            self.pursuer,
            self.evader,
            self.defender,
            self.guidance.chi_star,
        )
    }

    pub fn controller(&self) -> Result<Controller<T>> {
        Controller::new(self.guidance, self.pursuer_law, self.limits, self.sim.dt)
    }
}

fn derivative<T: Scalar>(speed: T, heading: T, a: T) -> [T; 3] {
    let turn = if speed > T::zero() {
        a / speed
    } else {
        T::zero()
    };
    [speed * heading.cos(), speed * heading.sin(), turn]
}

/// Advances one agent under a constant lateral acceleration.
pub fn advance_agent<T: Scalar>(
    agent: &AgentState<T>,
    a: T,
    dt: T,
    integrator: Integrator,
) -> AgentState<T> {
    let v = agent.speed;
    let s0 = [agent.x, agent.y, agent.heading];
    let add = |s: [T; 3], k: [T; 3], h: T| [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]];
    let next = match integrator {
        Integrator::Euler => add(s0, derivative(v, s0[2], a), dt),
        Integrator::Rk4 => {
            let half = dt / T::lit(2.0);
            let k1 = derivative(v, s0[2], a);
            let k2 = derivative(v, add(s0, k1, half)[2], a);
            let k3 = derivative(v, add(s0, k2, half)[2], a);
            let k4 = derivative(v, add(s0, k3, dt)[2], a);
            let two = T::lit(2.0);
            let w = dt / T::lit(6.0);
            let mut out = s0;
            for i in 0..3 {
                out[i] = s0[i] + w * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
            }
            out
        }
    };
    AgentState {
        x: next[0],
        y: next[1],
        speed: v,
        heading: wrap_pi(next[2]),
    }
}

/// Integrates all three agents over `dt` with the commands held constant.
pub fn step<T: Scalar>(
    state: &EngagementState<T>,
    command: &GuidanceCommand<T>,
    dt: T,
    integrator: Integrator,
) -> Result<EngagementState<T>> {
    advance(state, command, dt, integrator, state.t + dt)
}

fn advance<T: Scalar>(
    state: &EngagementState<T>,
    command: &GuidanceCommand<T>,
    dt: T,
    integrator: Integrator,
    t_next: T,
) -> Result<EngagementState<T>> {
    if !(dt > T::zero()) {
        return Err(invalid("dt", "must be positive"));
    }
    let p = advance_agent(&state.pursuer, command.a_p, dt, integrator);
    let e = advance_agent(&state.evader, command.a_e, dt, integrator);
    let d = advance_agent(&state.defender, command.a_d, dt, integrator);
    let finite = |a: &AgentState<T>| a.x.is_finite() && a.y.is_finite() && a.heading.is_finite();
    if !(finite(&p) && finite(&e) && finite(&d)) {
        return Err(Error::NumericalDivergence { t: t_next.as_f64() });
    }
    EngagementState::new(t_next, p, e, d, state.chi_star)
}

/// Capture predicate at a single instant. Defender capture takes precedence.
pub fn detect_event<T: Scalar>(
    state: &EngagementState<T>,
    cfg: &SimConfig<T>,
) -> Option<TerminalKind> {
    if state.dp.range <= cfg.capture_radius {
        Some(TerminalKind::DefenderCapturesPursuer)
    } else if state.ep.range <= cfg.evader_loss_radius {
        Some(TerminalKind::PursuerCapturesEvader)
    } else {
        None
    }
}

/// Relative position moving linearly across one step.
#[derive(Debug, Clone, Copy)]
struct Chord<T> {
    p0: (T, T),
    d: (T, T),
}

impl<T: Scalar> Chord<T> {
    fn new(a0: &AgentState<T>, b0: &AgentState<T>, a1: &AgentState<T>, b1: &AgentState<T>) -> Self {
        let p0 = (b0.x - a0.x, b0.y - a0.y);
        let p1 = (b1.x - a1.x, b1.y - a1.y);
        Self {
            p0,
            d: (p1.0 - p0.0, p1.1 - p0.1),
        }
    }

    fn range_at(&self, s: T) -> T {
        (self.p0.0 + self.d.0 * s).hypot(self.p0.1 + self.d.1 * s)
    }

    /// Smallest fraction of the step at which the range reaches `radius`.
    fn crossing(&self, radius: T) -> Option<T> {
        let a = self.d.0 * self.d.0 + self.d.1 * self.d.1;
        let b = T::lit(2.0) * (self.p0.0 * self.d.0 + self.p0.1 * self.d.1);
        let c = self.p0.0 * self.p0.0 + self.p0.1 * self.p0.1 - radius * radius;
        if c <= T::zero() {
            return Some(T::zero());
        }
        if a == T::zero() {
            return None;
        }
        let disc = b * b - T::lit(4.0) * a * c;
        if disc < T::zero() {
            return None;
        }
        let s = (-b - disc.sqrt()) / (T::lit(2.0) * a);
        (s >= T::zero() && s <= T::one()).then_some(s)
    }

    fn min_range(&self) -> T {
        let a = self.d.0 * self.d.0 + self.d.1 * self.d.1;
        if a == T::zero() {
            return self.range_at(T::zero());
        }
        let s = -(self.p0.0 * self.d.0 + self.p0.1 * self.d.1) / a;
        self.range_at(s.max(T::zero()).min(T::one()))
    }
}

/// Runs guidance, saturation, integration and event checks until a terminal event.
///
/// Captures are detected between samples by interpolating relative
/// positions linearly across each step, so a fast crossing cannot slip
/// through a coarse step.
pub fn run<T: Scalar>(scenario: &Scenario<T>) -> Result<SimulationTrace<T>> {
    scenario.validate()?;
    let cfg = scenario.sim;
    let mut controller = scenario.controller()?;
    let mut state = scenario.initial_state()?;
    let n_max = cfg.steps();
    let mut rows = Vec::with_capacity((n_max / cfg.record_every as u64 + 2).min(1 << 22) as usize);
    let mut min_r_ep = state.ep.range;

    if let Some(kind) = detect_event(&state, &cfg) {
        rows.push(TraceRow {
            state,
            command: None,
            manifolds: None,
        });
        let event = TerminalEvent {
            kind,
            t_f: state.t,
            r_ep_at_tf: state.ep.range,
            min_r_ep,
        };
        return Ok(finish(
            rows,
            event,
            controller,
            cfg.dt,
            scenario.guidance.mode,
        ));
    }

    let mut k: u64 = 0;
    loop {
        let abort = |state: &EngagementState<T>, min_r_ep: T| TerminalEvent {
            kind: TerminalKind::DegenerateGeometryAbort,
            t_f: state.t,
            r_ep_at_tf: state.ep.range,
            min_r_ep,
        };
        if k >= n_max {
            let manifolds = controller.manifolds(&state);
            rows.push(TraceRow {
                state,
                command: None,
                manifolds,
            });
            let event = TerminalEvent {
                kind: TerminalKind::Timeout,
                t_f: state.t,
                r_ep_at_tf: state.ep.range,
                min_r_ep,
            };
            return Ok(finish(
                rows,
                event,
                controller,
                cfg.dt,
                scenario.guidance.mode,
            ));
        }
        let decision = match controller.command(&state) {
            Ok(d) => d,
            Err(Error::NumericalDivergence { t }) => return Err(Error::NumericalDivergence { t }),
            Err(
                Error::SingularGeometry { .. }
                | Error::DegenerateGeometry { .. }
                | Error::DegenerateAllocation { .. },
            ) => {
                let manifolds = controller.manifolds(&state);
                rows.push(TraceRow {
                    state,
                    command: None,
                    manifolds,
                });
                let event = abort(&state, min_r_ep);
                return Ok(finish(
                    rows,
                    event,
                    controller,
                    cfg.dt,
                    scenario.guidance.mode,
                ));
            }
            Err(e) => return Err(e),
        };
        let row = TraceRow {
            state,
            command: Some(decision.command),
            manifolds: Some(decision.manifolds),
        };
        if controller.held_steps() > MAX_HELD_STEPS {
            rows.push(row);
            let event = abort(&state, min_r_ep);
            return Ok(finish(
                rows,
                event,
                controller,
                cfg.dt,
                scenario.guidance.mode,
            ));
        }
        if k.is_multiple_of(cfg.record_every as u64) {
            rows.push(row);
        }

        let t_next = T::from_u64(k + 1).expect("step index representable") * cfg.dt;
        let next = match advance(&state, &decision.command, cfg.dt, cfg.integrator, t_next) {
            Ok(s) => s,
            Err(Error::SingularGeometry { .. }) => {
                let event = abort(&state, min_r_ep);
                return Ok(finish(
                    rows,
                    event,
                    controller,
                    cfg.dt,
                    scenario.guidance.mode,
                ));
            }
            Err(e) => return Err(e),
        };

        let ep = Chord::new(&state.evader, &state.pursuer, &next.evader, &next.pursuer);
        let dp = Chord::new(
            &state.defender,
            &state.pursuer,
            &next.defender,
            &next.pursuer,
        );
        min_r_ep = min_r_ep.min(ep.min_range());
        let hit_d = dp.crossing(cfg.capture_radius);
        let hit_e = ep.crossing(cfg.evader_loss_radius);
        let t_prev = state.t;
        state = next;
        k += 1;

        let terminal = match (hit_d, hit_e) {
            (Some(s), _) => Some((TerminalKind::DefenderCapturesPursuer, s)),
            (None, Some(s)) => Some((TerminalKind::PursuerCapturesEvader, s)),
            (None, None) => None,
        };
        if let Some((kind, s)) = terminal {
            let manifolds = controller.manifolds(&state);
            rows.push(TraceRow {
                state,
                command: None,
                manifolds,
            });
            let event = TerminalEvent {
                kind,
                t_f: t_prev + s * cfg.dt,
                r_ep_at_tf: ep.range_at(s),
                min_r_ep,
            };
            return Ok(finish(
                rows,
                event,
                controller,
                cfg.dt,
                scenario.guidance.mode,
            ));
        }
    }
}

fn finish<T: Scalar>(
    rows: Vec<TraceRow<T>>,
    event: TerminalEvent<T>,
    controller: Controller<T>,
    dt: T,
    mode: CooperationMode,
) -> SimulationTrace<T> {
    SimulationTrace {
        rows,
        event,
        guidance_events: controller.into_events(),
        dt,
        mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_command_flies_straight() {
        let a = AgentState::new(10.0, -4.0, 200.0, 0.3).unwrap();
        let b = advance_agent(&a, 0.0, 0.5, Integrator::Rk4);
        assert_eq!(b.heading, a.heading);
        assert!((b.x - (10.0 + 100.0 * 0.3f64.cos())).abs() < 1e-12);
        assert!((b.y - (-4.0 + 100.0 * 0.3f64.sin())).abs() < 1e-12);
    }

    #[test]
    fn full_turn_closes_the_circle() {
        let (v, a) = (200.0, 50.0);
        let radius = v * v / a;
        let period = 2.0 * PI * radius / v;
        let n = 20_000;
        let dt = period / n as f64;
        let mut s = AgentState::new(0.0, 0.0, v, 0.0).unwrap();
        for _ in 0..n {
            s = advance_agent(&s, a, dt, Integrator::Rk4);
        }
        assert!(s.x.hypot(s.y) < 1e-6 * radius, "drift {}", s.x.hypot(s.y));
        assert_eq!(s.speed, v);
    }

    #[test]
    fn stationary_agent_does_not_move() {
        let a = AgentState::new(5.0, 5.0, 0.0, 1.0).unwrap();
        assert_eq!(advance_agent(&a, 98.1, 0.01, Integrator::Rk4), a);
    }

    fn cfg() -> SimConfig<f64> {
        SimConfig::new(20.0)
    }

    fn state_with(r_dp: f64, r_ep: f64) -> EngagementState<f64> {
        let e = AgentState::new(0.0, 0.0, 100.0, 0.0).unwrap();
        let p = AgentState::new(r_ep, 0.0, 200.0, PI).unwrap();
        let d = AgentState::new(r_ep, r_dp, 200.0, 0.0).unwrap();
        EngagementState::new(0.0, p, e, d, PI).unwrap()
    }

    #[test]
    fn event_examples() {
        assert_eq!(
            detect_event(&state_with(0.5, 300.0), &cfg()),
            Some(TerminalKind::DefenderCapturesPursuer)
        );
        assert_eq!(
            detect_event(&state_with(300.0, 0.5), &cfg()),
            Some(TerminalKind::PursuerCapturesEvader)
        );
        assert_eq!(
            detect_event(&state_with(0.5, 0.5), &cfg()),
            Some(TerminalKind::DefenderCapturesPursuer)
        );
        assert_eq!(detect_event(&state_with(300.0, 300.0), &cfg()), None);
    }

    #[test]
    fn chord_crossing_inside_a_step() {
        let a0 = AgentState::new(0.0_f64, 0.0, 0.0, 0.0).unwrap();
        let b0 = AgentState::new(-3.0, 0.5, 0.0, 0.0).unwrap();
        let b1 = AgentState::new(3.0, 0.5, 0.0, 0.0).unwrap();
        let chord = Chord::new(&a0, &b0, &a0, &b1);
        assert!((chord.min_range() - 0.5).abs() < 1e-15);
        let s = chord.crossing(1.0).unwrap();
        let x: f64 = -3.0 + 6.0 * s;
        assert!((x.hypot(0.5) - 1.0).abs() < 1e-12);
        assert!(chord.crossing(0.4).is_none());
    }
}
