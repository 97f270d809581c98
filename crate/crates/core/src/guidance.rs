//! Lateral-acceleration commands for all three agents.
//!
//! The evader/defender team steers the angle `chi` toward `chi_star` using a
//! two-layer sliding manifold. In maneuver-level cooperation both agents
//! share one net effort through a weighted minimum-norm split; in
//! information-level cooperation the evader flies a decoy law and only
//! reports its command to the defender, which enforces the geometry alone.

use crate::engagement::{saturate, AgentLimits, BetaDynamics, EngagementState};
use crate::error::{invalid, Error, Result};
use crate::profiles::{
    decoy_manifold, inner_manifold, outer_manifold, DecoyProfile, PrescribedTimeProfile,
    ReachingEliminationProfile,
};
use crate::scalar::{wrap_pi, Scalar};

/// Relative threshold below which a cosine or denominator counts as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-3;

/// Consecutive held steps after which a run is abandoned.
pub const MAX_HELD_STEPS: u32 = 10;

/// Discontinuous term used by every sliding-mode law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Switching<T> {
    /// Exact `sign(s)`, chatters at the integration step.
    Sign,
    /// `clamp(s / width, -1, 1)`.
    BoundaryLayer { width: T },
}

impl<T: Scalar> Switching<T> {
    /// Evaluates the switching term. `min_width` widens a boundary layer so
    /// that `gain * dt / width` stays below the explicit stability limit.
    pub fn eval(&self, s: T, min_width: T) -> T {
        match *self {
            Switching::Sign => {
                if s > T::zero() {
                    T::one()
                } else if s < T::zero() {
                    -T::one()
                } else {
                    T::zero()
                }
            }
            Switching::BoundaryLayer { width } => {
                (s / width.max(min_width)).max(-T::one()).min(T::one())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CooperationMode {
    ManeuverLevel,
    InformationLevel,
}

impl CooperationMode {
    pub fn name(self) -> &'static str {
        match self {
            CooperationMode::ManeuverLevel => "maneuver",
            CooperationMode::InformationLevel => "information",
        }
    }
}

/// Parameters of the team's guidance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceConfig<T> {
    pub mode: CooperationMode,
    pub chi_star: T,
    pub t_star: T,
    pub k1: u32,
    pub t1: T,
    pub k2: u32,
    /// Decoy horizon, information level only.
    pub t2: T,
    pub k3: u32,
    /// Switching gain on the outer manifold.
    pub gain: T,
    /// Switching gain on the decoy manifold.
    pub decoy_gain: T,
    /// Allocation weight ratio `sigma_E / sigma_D`.
    pub sigma: T,
    pub switching: Switching<T>,
}

impl<T: Scalar> GuidanceConfig<T> {
    /// Maneuver-level configuration with the reference gains of the head-on scenario.
    pub fn maneuver(chi_star: T) -> Self {
        Self {
            mode: CooperationMode::ManeuverLevel,
            chi_star,
            t_star: T::lit(6.0),
            k1: 6,
            t1: T::lit(3.0),
            k2: 3,
            t2: T::lit(4.0),
            k3: 3,
            gain: T::lit(5.0),
            decoy_gain: T::one(),
            sigma: T::one(),
            switching: Switching::BoundaryLayer {
                width: T::lit(5e-3),
            },
        }
    }

    /// Information-level configuration with the reference decoy gains.
    pub fn information(chi_star: T) -> Self {
        Self {
            mode: CooperationMode::InformationLevel,
            chi_star,
            t_star: T::lit(9.0),
            k1: 3,
            t1: T::lit(5.0),
            k2: 3,
            t2: T::lit(4.0),
            k3: 3,
            gain: T::one(),
            decoy_gain: T::one(),
            sigma: T::one(),
            switching: Switching::BoundaryLayer {
                width: T::lit(5e-3),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::engagement::validate_chi_star(self.chi_star)?;
        for (name, v) in [("t_star", self.t_star), ("t1", self.t1), ("t2", self.t2)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("{} must be positive", v)));
            }
        }
        if !(self.t1 < self.t_star) {
            return Err(invalid(
                "t1",
                format!("{} must be smaller than t_star = {}", self.t1, self.t_star),
            ));
        }
        for (name, k) in [("k1", self.k1), ("k2", self.k2), ("k3", self.k3)] {
            if k < 1 {
                return Err(invalid(name, "must be at least 1"));
            }
        }
        for (name, v) in [
            ("K", self.gain),
            ("K1", self.decoy_gain),
            ("sigma", self.sigma),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("{} must be positive", v)));
            }
        }
        if let Switching::BoundaryLayer { width } = self.switching {
            if !(width > T::zero()) {
                return Err(invalid(
                    "boundary_layer",
                    format!("{} must be positive", width),
                ));
            }
        }
        Ok(())
    }

    /// Latest instant at which any profile is still active.
    pub fn horizon(&self) -> T {
        let base = self.t_star.max(self.t1);
        match self.mode {
            CooperationMode::ManeuverLevel => base,
            CooperationMode::InformationLevel => base.max(self.t2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PursuerLawKind {
    Png,
    Ppg,
    Dpg,
    Bpng,
}

impl PursuerLawKind {
    pub fn name(self) -> &'static str {
        match self {
            PursuerLawKind::Png => "png",
            PursuerLawKind::Ppg => "ppg",
            PursuerLawKind::Dpg => "dpg",
            PursuerLawKind::Bpng => "bpng",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuerLaw<T> {
    pub kind: PursuerLawKind,
    pub nav_constant: T,
    pub pursuit_gain: T,
    pub deviation: T,
    pub bias_gain: T,
}

impl<T: Scalar> PursuerLaw<T> {
    pub fn new(kind: PursuerLawKind) -> Self {
        Self {
            kind,
            nav_constant: T::lit(3.0),
            pursuit_gain: T::lit(0.1),
            deviation: T::lit(20.0).to_radians(),
            bias_gain: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v > T::zero() && v.is_finite();
        match self.kind {
            PursuerLawKind::Png | PursuerLawKind::Bpng if !ok(self.nav_constant) => {
                Err(invalid("nav_constant", "must be positive"))
            }
            PursuerLawKind::Ppg | PursuerLawKind::Dpg if !ok(self.pursuit_gain) => {
                Err(invalid("pursuit_gain", "must be positive"))
            }
            PursuerLawKind::Bpng if !(self.bias_gain >= T::zero()) => {
                Err(invalid("bias_gain", "must be non-negative"))
            }
            _ if !self.deviation.is_finite() => Err(invalid("deviation", "must be finite")),
            _ => Ok(()),
        }
    }
}

/// Commands issued for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceCommand<T> {
    pub a_p: T,
    pub a_e: T,
    pub a_d: T,
    pub raw_a_p: T,
    pub raw_a_e: T,
    pub raw_a_d: T,
    /// Net team effort, maneuver level only.
    pub u: Option<T>,
}

impl<T: Scalar> GuidanceCommand<T> {
    pub fn zero() -> Self {
        let z = T::zero();
        Self {
            a_p: z,
            a_e: z,
            a_d: z,
            raw_a_p: z,
            raw_a_e: z,
            raw_a_d: z,
            u: None,
        }
    }
}

/// Pursuer lateral acceleration before saturation.
pub fn pursuer_command<T: Scalar>(
    law: &PursuerLaw<T>,
    state: &EngagementState<T>,
    a_e_observed: T,
) -> Result<T> {
    let ep = &state.ep;
    if !(ep.range > T::zero()) {
        return Err(Error::SingularGeometry {
            pair: "EP",
            range: ep.range.as_f64(),
        });
    }
    let png = || -law.nav_constant * ep.range_rate * ep.los_rate;
    let heading_error = wrap_pi(state.pursuer.heading - ep.los);
    Ok(match law.kind {
        PursuerLawKind::Png => png(),
        PursuerLawKind::Ppg => state.pursuer.speed * ep.los_rate - law.pursuit_gain * heading_error,
        PursuerLawKind::Dpg => {
            state.pursuer.speed * ep.los_rate
                - law.pursuit_gain * wrap_pi(heading_error - law.deviation)
        }
        PursuerLawKind::Bpng => {
            // Cancel the evader's contribution to the LOS acceleration.
            let c_pe = ep.lead_second.cos();
            if c_pe.abs() < T::lit(DEGENERACY_THRESHOLD) {
                png()
            } else {
                png() + law.bias_gain * ep.lead_first.cos() / c_pe * a_e_observed
            }
        }
    })
}

/// Auxiliary profile values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues<T> {
    pub g: T,
    pub g_rate: T,
    pub h: T,
    pub h_rate: T,
}

impl<T: Scalar> ProfileValues<T> {
    pub fn evaluate(
        g: &PrescribedTimeProfile<T>,
        h: &ReachingEliminationProfile<T>,
        state: &EngagementState<T>,
    ) -> Self {
        let t = state.t;
        Self {
            g: g.value(state.beta, t),
            g_rate: g.rate(state.beta, state.beta_rate(), t),
            h: h.value(t),
            h_rate: h.rate(t),
        }
    }

    pub fn s_inner(&self, state: &EngagementState<T>) -> T {
        inner_manifold(state.beta_rate(), self.g)
    }

    pub fn s_outer(&self, state: &EngagementState<T>) -> T {
        outer_manifold(self.s_inner(state), self.h)
    }
}

/// Net team effort `U` given the profile values and the switching term.
pub fn joint_cooperative_command<T: Scalar>(
    state: &EngagementState<T>,
    profiles: &ProfileValues<T>,
    gain: T,
    switch: T,
) -> Result<T> {
    let dynamics = BetaDynamics::from_state(state)?;
    Ok(-dynamics.drift + profiles.g_rate - profiles.h_rate - gain * switch)
}

/// Weighted minimum-norm split of `U` for given affine coefficients.
pub fn allocate_coefficients<T: Scalar>(u: T, b1: T, b2: T, sigma: T) -> Result<(T, T)> {
    if !(b1.abs() > T::zero()) {
        return Err(Error::DegenerateAllocation { b1: b1.as_f64() });
    }
    let s2 = sigma * sigma;
    let a_d = -b2 * u / (b1 * b1 * s2 + b2 * b2);
    let a_e = (u + b2 * a_d) / b1;
    Ok((a_e, a_d))
}

/// Splits the net effort between evader and defender. Fails when the evader
/// has no authority over the error angle.
pub fn allocate<T: Scalar>(u: T, state: &EngagementState<T>, sigma: T) -> Result<(T, T)> {
    let dynamics = BetaDynamics::from_state(state)?;
    if state.ed.lead_first.cos().abs() < T::lit(DEGENERACY_THRESHOLD)
        || state.evader.is_stationary()
    {
        return Err(Error::DegenerateAllocation {
            b1: dynamics.b1.as_f64(),
        });
    }
    allocate_coefficients(u, dynamics.b1, dynamics.b2, sigma)
}

/// Allocation cost `sqrt((a_E / sigma_E)^2 + (a_D / sigma_D)^2)`.
pub fn allocation_cost<T: Scalar>(a_e: T, a_d: T, sigma_e: T, sigma_d: T) -> T {
    (a_e / sigma_e).hypot(a_d / sigma_d)
}

/// Evader decoy command that nulls the evader/pursuer LOS rate by `t2`.
pub fn decoy_command<T: Scalar>(
    state: &EngagementState<T>,
    profile: &DecoyProfile<T>,
    gain: T,
    switch: T,
) -> Result<T> {
    let ep = &state.ep;
    let c = ep.lead_first.cos();
    if c.abs() < T::lit(DEGENERACY_THRESHOLD) {
        return Err(Error::DegenerateGeometry {
            law: "decoy",
            value: c.as_f64(),
        });
    }
    let coriolis = T::lit(2.0) * ep.range_rate * ep.los_rate / ep.range;
    Ok(ep.range / c * (-coriolis + profile.rate(state.t) + gain * switch))
}

/// Defender command that alone enforces the outer manifold given the evader's command.
pub fn defender_command_info<T: Scalar>(
    state: &EngagementState<T>,
    profiles: &ProfileValues<T>,
    gain: T,
    switch: T,
    a_e_observed: T,
) -> Result<T> {
    let (dp, ed) = (&state.dp, &state.ed);
    let den = ed.lead_second.cos() * dp.range + dp.lead_first.cos() * ed.range;
    if den.abs() < T::lit(DEGENERACY_THRESHOLD) * (dp.range + ed.range) {
        return Err(Error::DegenerateGeometry {
            law: "defender",
            value: den.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let num = -two * dp.range_rate * dp.los_rate / dp.range
        + two * ed.range_rate * ed.los_rate / ed.range
        + ed.lead_first.cos() / ed.range * a_e_observed
        - profiles.g_rate
        + profiles.h_rate
        + gain * switch;
    Ok(num * ed.range * dp.range / den)
}

/// Non-fatal irregularities recorded while commanding a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuidanceEventKind {
    /// The evader had no authority; the defender took the whole effort.
    DefenderOnlyAllocation,
    /// The allocation was singular for both agents; last command held.
    AllocationHeld,
    /// Decoy law denominator vanished; last evader command held.
    DecoyHeld,
    /// Information-level defender denominator vanished; last command held.
    DefenderHeld,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceEvent<T> {
    pub t: T,
    pub kind: GuidanceEventKind,
}

/// Manifold values reported alongside each command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manifolds<T> {
    pub s_inner: T,
    pub s_outer: T,
    pub s_e: Option<T>,
}

/// Output of one controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision<T> {
    pub command: GuidanceCommand<T>,
    pub manifolds: Manifolds<T>,
}

/// Per-run guidance state: the profiles anchored at the initial condition
/// and the last issued command for the hold fallback.
#[derive(Debug, Clone)]
pub struct Controller<T> {
    config: GuidanceConfig<T>,
    law: PursuerLaw<T>,
    limits: [AgentLimits<T>; 3],
    dt: T,
    g: PrescribedTimeProfile<T>,
    h: Option<ReachingEliminationProfile<T>>,
    decoy: Option<DecoyProfile<T>>,
    last: GuidanceCommand<T>,
    held_steps: u32,
    events: Vec<GuidanceEvent<T>>,
}

impl<T: Scalar> Controller<T> {
    /// `limits` are ordered pursuer, evader, defender.
    pub fn new(
        config: GuidanceConfig<T>,
        law: PursuerLaw<T>,
        limits: [AgentLimits<T>; 3],
        dt: T,
    ) -> Result<Self> {
        config.validate()?;
        law.validate()?;
        if !(dt > T::zero()) {
            return Err(invalid("dt", "must be positive"));
        }
        let g = PrescribedTimeProfile::new(config.t_star, config.k1, dt)?;
        Ok(Self {
            config,
            law,
            limits,
            dt,
            g,
            h: None,
            decoy: None,
            last: GuidanceCommand::zero(),
            held_steps: 0,
            events: Vec::new(),
        })
    }

    pub fn config(&self) -> &GuidanceConfig<T> {
        &self.config
    }

    pub fn prescribed(&self) -> &PrescribedTimeProfile<T> {
        &self.g
    }

    pub fn reaching(&self) -> Option<&ReachingEliminationProfile<T>> {
        self.h.as_ref()
    }

    pub fn decoy(&self) -> Option<&DecoyProfile<T>> {
        self.decoy.as_ref()
    }

    pub fn events(&self) -> &[GuidanceEvent<T>] {
        &self.events
    }

    pub fn into_events(self) -> Vec<GuidanceEvent<T>> {
        self.events
    }

    /// Number of consecutive steps ending in a held command.
    pub fn held_steps(&self) -> u32 {
        self.held_steps
    }

    fn switch(&self, s: T, gain: T) -> T {
        self.config.switching.eval(s, gain * self.dt)
    }

    /// Anchors the outer and decoy profiles at `state`. Called implicitly by
    /// the first [`command`](Self::command).
    pub fn initialize(&mut self, state: &EngagementState<T>) -> Result<()> {
        let s_inner0 = inner_manifold(state.beta_rate(), self.g.value(state.beta, state.t));
        self.h = Some(ReachingEliminationProfile::from_inner(
            self.config.t1,
            self.config.k2,
            s_inner0,
        )?);
        if self.config.mode == CooperationMode::InformationLevel {
            self.decoy = Some(DecoyProfile::from_los_rate(
                self.config.t2,
                self.config.k3,
                state.ep.los_rate,
            )?);
        }
        Ok(())
    }

    /// Manifold values at `state` without issuing a command.
    pub fn manifolds(&self, state: &EngagementState<T>) -> Option<Manifolds<T>> {
        let h = self.h.as_ref()?;
        let pv = ProfileValues::evaluate(&self.g, h, state);
        let s_e = self
            .decoy
            .as_ref()
            .map(|d| decoy_manifold(state.ep.los_rate, d.value(state.t)));
        Some(Manifolds {
            s_inner: pv.s_inner(state),
            s_outer: pv.s_outer(state),
            s_e,
        })
    }

    /// Computes saturated commands for all three agents at `state`.
    pub fn command(&mut self, state: &EngagementState<T>) -> Result<Decision<T>> {
        if self.h.is_none() {
            self.initialize(state)?;
        }
        let h = *self.h.as_ref().expect("initialized");
        let pv = ProfileValues::evaluate(&self.g, &h, state);
        let s_inner = pv.s_inner(state);
        let s_outer = pv.s_outer(state);
        let outer_switch = self.switch(s_outer, self.config.gain);
        let [lim_p, lim_e, lim_d] = self.limits;
        let mut held = false;
        let mut s_e = None;

        let (raw_a_e, raw_a_d, u) = match self.config.mode {
            CooperationMode::ManeuverLevel => {
                let u = joint_cooperative_command(state, &pv, self.config.gain, outer_switch)?;
                match allocate(u, state, self.config.sigma) {
                    Ok((a_e, a_d)) => (a_e, a_d, Some(u)),
                    Err(Error::DegenerateAllocation { .. }) => {
                        let b2 = BetaDynamics::from_state(state)?.b2;
                        let scale = T::one() / state.ed.range + T::one() / state.dp.range;
                        if b2.abs() < T::lit(DEGENERACY_THRESHOLD) * scale {
                            held = true;
                            self.record(state.t, GuidanceEventKind::AllocationHeld);
                            (self.last.raw_a_e, self.last.raw_a_d, Some(u))
                        } else {
                            if !state.evader.is_stationary() {
                                self.record(state.t, GuidanceEventKind::DefenderOnlyAllocation);
                            }
                            (T::zero(), -u / b2, Some(u))
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            CooperationMode::InformationLevel => {
                let decoy = *self.decoy.as_ref().expect("initialized");
                let se = decoy_manifold(state.ep.los_rate, decoy.value(state.t));
                s_e = Some(se);
                let decoy_switch = self.switch(se, self.config.decoy_gain);
                let raw_a_e = if state.evader.is_stationary() {
                    T::zero()
                } else {
                    match decoy_command(state, &decoy, self.config.decoy_gain, decoy_switch) {
                        Ok(a) => a,
                        Err(Error::DegenerateGeometry { .. }) => {
                            held = true;
                            self.record(state.t, GuidanceEventKind::DecoyHeld);
                            self.last.raw_a_e
                        }
                        Err(e) => return Err(e),
                    }
                };
                let a_e = saturate(raw_a_e, &lim_e);
                let raw_a_d =
                    match defender_command_info(state, &pv, self.config.gain, outer_switch, a_e) {
                        Ok(a) => a,
                        Err(Error::DegenerateGeometry { .. }) => {
                            held = true;
                            self.record(state.t, GuidanceEventKind::DefenderHeld);
                            self.last.raw_a_d
                        }
                        Err(e) => return Err(e),
                    };
                (raw_a_e, raw_a_d, None)
            }
        };

        let a_e = saturate(raw_a_e, &lim_e);
        let a_d = saturate(raw_a_d, &lim_d);
        let raw_a_p = pursuer_command(&self.law, state, a_e)?;
        let a_p = saturate(raw_a_p, &lim_p);
        let command = GuidanceCommand {
            a_p,
            a_e,
            a_d,
            raw_a_p,
            raw_a_e,
            raw_a_d,
            u,
        };
        if !(a_p.is_finite() && a_e.is_finite() && a_d.is_finite()) {
            return Err(Error::NumericalDivergence {
                t: state.t.as_f64(),
            });
        }
        self.held_steps = if held { self.held_steps + 1 } else { 0 };
        self.last = command;
        Ok(Decision {
            command,
            manifolds: Manifolds {
                s_inner,
                s_outer,
                s_e,
            },
        })
    }

    fn record(&mut self, t: T, kind: GuidanceEventKind) {
        self.events.push(GuidanceEvent { t, kind });
    }
}
