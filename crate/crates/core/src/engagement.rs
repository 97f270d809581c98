//! Planar agent kinematics and the pairwise relative-motion quantities the
//! guidance laws are written in.
//!
//! Every pair is ordered: the line of sight (LOS) angle `lambda` is measured
//! at the first agent toward the second, so for the evader/pursuer pair the
//! range grows when the pursuer moves along the LOS. The three pairs used
//! throughout are evader->pursuer, defender->pursuer and evader->defender.

use crate::error::{invalid, Error, Result};
use crate::scalar::{wrap_pi, wrap_two_pi, Scalar};

/// Ranges below this are treated as coincident agents.
pub const COINCIDENCE_GUARD: f64 = 1e-6;

/// Pose and (constant) speed of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState<T> {
    pub x: T,
    pub y: T,
    /// Constant over a run. Zero marks a stationary agent whose heading never changes.
    pub speed: T,
    /// Wrapped to `(-pi, pi]`.
    pub heading: T,
}

impl<T: Scalar> AgentState<T> {
    pub fn new(x: T, y: T, speed: T, heading: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && heading.is_finite()) {
            return Err(invalid("agent", "position and heading must be finite"));
        }
        if !speed.is_finite() || speed < T::zero() {
            return Err(invalid(
                "speed",
                format!("{} must be finite and non-negative", speed),
            ));
        }
        Ok(Self {
            x,
            y,
            speed,
            heading: wrap_pi(heading),
        })
    }

    /// Places an agent at `range` along the LOS angle `los` from `origin`.
    pub fn from_polar(origin: (T, T), range: T, los: T, speed: T, heading: T) -> Result<Self> {
        if !(range > T::zero()) {
            return Err(invalid("range", format!("{} must be positive", range)));
        }
        Self::new(
            origin.0 + range * los.cos(),
            origin.1 + range * los.sin(),
            speed,
            heading,
        )
    }

    pub fn velocity(&self) -> (T, T) {
        (
            self.speed * self.heading.cos(),
            self.speed * self.heading.sin(),
        )
    }

    pub fn is_stationary(&self) -> bool {
        self.speed == T::zero()
    }
}

/// Lateral acceleration authority of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentLimits<T> {
    pub a_max: T,
}

impl<T: Scalar> AgentLimits<T> {
    pub fn new(a_max: T) -> Result<Self> {
        if !(a_max > T::zero()) || !a_max.is_finite() {
            return Err(invalid(
                "a_max",
                format!("{} must be positive and finite", a_max),
            ));
        }
        Ok(Self { a_max })
    }

    /// Clamps a command into `[-a_max, a_max]`.
    pub fn saturate(&self, raw: T) -> T {
        saturate(raw, self)
    }
}

/// Clamps `raw` to the agent's acceleration limit.
pub fn saturate<T: Scalar>(raw: T, limits: &AgentLimits<T>) -> T {
    raw.max(-limits.a_max).min(limits.a_max)
}

/// Relative motion of an ordered agent pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState<T> {
    pub range: T,
    /// LOS angle from the first agent toward the second, in `(-pi, pi]`.
    pub los: T,
    pub range_rate: T,
    pub los_rate: T,
    /// First agent's heading minus the LOS angle.
    pub lead_first: T,
    /// Second agent's heading minus the LOS angle.
    pub lead_second: T,
}

/// Range, LOS angle, their rates and both lead angles for `first -> second`.
pub fn pair_kinematics<T: Scalar>(
    first: &AgentState<T>,
    second: &AgentState<T>,
) -> Result<PairState<T>> {
    labelled_pair(first, second, "pair")
}

fn labelled_pair<T: Scalar>(
    first: &AgentState<T>,
    second: &AgentState<T>,
    label: &'static str,
) -> Result<PairState<T>> {
    let dx = second.x - first.x;
    let dy = second.y - first.y;
    let range = dx.hypot(dy);
    if !(range >= T::lit(COINCIDENCE_GUARD)) {
        return Err(Error::SingularGeometry {
            pair: label,
            range: range.as_f64(),
        });
    }
    let los = dy.atan2(dx);
    let lead_first = wrap_pi(first.heading - los);
    let lead_second = wrap_pi(second.heading - los);
    let range_rate = second.speed * lead_second.cos() - first.speed * lead_first.cos();
    let los_rate = (second.speed * lead_second.sin() - first.speed * lead_first.sin()) / range;
    Ok(PairState {
        range,
        los,
        range_rate,
        los_rate,
        lead_first,
        lead_second,
    })
}

/// Angle subtended at the defender between the evader-defender and
/// defender-pursuer lines, wrapped to `[0, 2pi)`.
pub fn chi_angle<T: Scalar>(lambda_dp: T, lambda_ed: T) -> T {
    wrap_two_pi(T::PI() + lambda_dp - lambda_ed)
}

/// Signed tracking error `chi - chi_star` wrapped to `(-pi, pi]`.
pub fn beta_error<T: Scalar>(chi: T, chi_star: T) -> Result<T> {
    validate_chi_star(chi_star)?;
    Ok(wrap_pi(chi - chi_star))
}

pub fn validate_chi_star<T: Scalar>(chi_star: T) -> Result<()> {
    let lo = T::FRAC_PI_2();
    let hi = T::lit(1.5) * T::PI();
    if chi_star >= lo && chi_star <= hi {
        Ok(())
    } else {
        Err(Error::InvalidTargetAngle(chi_star.as_f64()))
    }
}

/// Full three-body state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngagementState<T> {
    pub t: T,
    pub pursuer: AgentState<T>,
    pub evader: AgentState<T>,
    pub defender: AgentState<T>,
    /// Evader -> pursuer.
    pub ep: PairState<T>,
    /// Defender -> pursuer.
    pub dp: PairState<T>,
    /// Evader -> defender.
    pub ed: PairState<T>,
    pub chi: T,
    pub beta: T,
    pub chi_star: T,
}

impl<T: Scalar> EngagementState<T> {
    pub fn new(
        t: T,
        pursuer: AgentState<T>,
        evader: AgentState<T>,
        defender: AgentState<T>,
        chi_star: T,
    ) -> Result<Self> {
        let ep = labelled_pair(&evader, &pursuer, "EP")?;
        let dp = labelled_pair(&defender, &pursuer, "DP")?;
        let ed = labelled_pair(&evader, &defender, "ED")?;
        let chi = chi_angle(dp.los, ed.los);
        let beta = beta_error(chi, chi_star)?;
        Ok(Self {
            t,
            pursuer,
            evader,
            defender,
            ep,
            dp,
            ed,
            chi,
            beta,
            chi_star,
        })
    }

    /// `d(beta)/dt = lambda_dot_DP - lambda_dot_ED`.
    pub fn beta_rate(&self) -> T {
        self.dp.los_rate - self.ed.los_rate
    }

    pub fn pair(&self, pair: crate::error::Pair) -> &PairState<T> {
        match pair {
            crate::error::Pair::Ep => &self.ep,
            crate::error::Pair::Dp => &self.dp,
            crate::error::Pair::Ed => &self.ed,
        }
    }

    /// Coefficients of the error dynamics written affine in the three commands.
    pub fn beta_dynamics(&self) -> Result<BetaDynamics<T>> {
        BetaDynamics::from_state(self)
    }
}

fn require_range<T: Scalar>(pair: &PairState<T>, label: &'static str) -> Result<()> {
    if pair.range > T::zero() {
        Ok(())
    } else {
        Err(Error::SingularGeometry {
            pair: label,
            range: pair.range.as_f64(),
        })
    }
}

fn coriolis<T: Scalar>(pair: &PairState<T>) -> T {
    T::lit(2.0) * pair.range_rate * pair.los_rate / pair.range
}

/// Second derivative of the defender->pursuer LOS angle.
pub fn los_accel_dp<T: Scalar>(state: &EngagementState<T>, a_p: T, a_d: T) -> Result<T> {
    let dp = &state.dp;
    require_range(dp, "DP")?;
    Ok(
        -coriolis(dp) + dp.lead_second.cos() / dp.range * a_p
            - dp.lead_first.cos() / dp.range * a_d,
    )
}

/// Second derivative of the evader->defender LOS angle.
pub fn los_accel_ed<T: Scalar>(state: &EngagementState<T>, a_e: T, a_d: T) -> Result<T> {
    let ed = &state.ed;
    require_range(ed, "ED")?;
    Ok(
        -coriolis(ed) - ed.lead_first.cos() / ed.range * a_e
            + ed.lead_second.cos() / ed.range * a_d,
    )
}

/// Second derivative of the evader->pursuer LOS angle.
pub fn los_accel_ep<T: Scalar>(state: &EngagementState<T>, a_p: T, a_e: T) -> Result<T> {
    let ep = &state.ep;
    require_range(ep, "EP")?;
    Ok(
        -coriolis(ep) + ep.lead_second.cos() / ep.range * a_p
            - ep.lead_first.cos() / ep.range * a_e,
    )
}

/// Second derivative of the error angle, affine in all three commands.
pub fn beta_accel<T: Scalar>(state: &EngagementState<T>, a_p: T, a_e: T, a_d: T) -> Result<T> {
    Ok(state.beta_dynamics()?.accel(a_p, a_e, a_d))
}

/// `beta_ddot = drift + pursuer_gain * a_P + b1 * a_E - b2 * a_D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaDynamics<T> {
    /// `2 rdot_ED lamdot_ED / r_ED - 2 rdot_DP lamdot_DP / r_DP`.
    pub drift: T,
    /// `cos(delta_PD) / r_DP`, the channel through which the pursuer disturbs the error.
    pub pursuer_gain: T,
    /// `cos(delta_ED) / r_ED`.
    pub b1: T,
    /// `cos(delta_DE) / r_ED + cos(delta_DP) / r_DP`.
    pub b2: T,
}

impl<T: Scalar> BetaDynamics<T> {
    pub fn from_state(state: &EngagementState<T>) -> Result<Self> {
        let (dp, ed) = (&state.dp, &state.ed);
        require_range(dp, "DP")?;
        require_range(ed, "ED")?;
        Ok(Self {
            drift: coriolis(ed) - coriolis(dp),
            pursuer_gain: dp.lead_second.cos() / dp.range,
            b1: ed.lead_first.cos() / ed.range,
            b2: ed.lead_second.cos() / ed.range + dp.lead_first.cos() / dp.range,
        })
    }

    pub fn accel(&self, a_p: T, a_e: T, a_d: T) -> T {
        self.drift + self.pursuer_gain * a_p + self.b1 * a_e - self.b2 * a_d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn agent(x: f64, y: f64, v: f64, heading_deg: f64) -> AgentState<f64> {
        AgentState::new(x, y, v, deg(heading_deg)).unwrap()
    }

    /// Section IV-A geometry: defender at 400 m / -45 deg, pursuer at 5000 m / 0 deg.
    fn head_on_state() -> EngagementState<f64> {
        let e = agent(0.0, 0.0, 100.0, 45.0);
        let d = AgentState::from_polar((0.0, 0.0), 400.0, deg(-45.0), 200.0, 0.0).unwrap();
        let p = AgentState::from_polar((0.0, 0.0), 5000.0, 0.0, 200.0, PI).unwrap();
        EngagementState::new(0.0, p, e, d, PI).unwrap()
    }

    #[test]
    fn head_on_pair_closes_at_combined_speed() {
        let e = agent(0.0, 0.0, 100.0, 0.0);
        let p = agent(5000.0, 0.0, 200.0, 180.0);
        let pair = pair_kinematics(&e, &p).unwrap();
        assert_eq!(pair.range, 5000.0);
        assert_eq!(pair.los, 0.0);
        assert!((pair.range_rate + 300.0).abs() < 1e-12);
        assert!(pair.los_rate.abs() < 1e-15);
    }

    #[test]
    fn crossing_pair_rates() {
        let e = agent(0.0, 0.0, 100.0, 0.0);
        let p = agent(5000.0, 0.0, 200.0, 90.0);
        let pair = pair_kinematics(&e, &p).unwrap();
        assert!((pair.range_rate + 100.0).abs() < 1e-12);
        assert!((pair.los_rate - 0.04).abs() < 1e-15);
    }

    #[test]
    fn coincident_agents_are_rejected() {
        let a = agent(10.0, -3.0, 100.0, 0.0);
        let err = pair_kinematics(&a, &a).unwrap_err();
        assert!(matches!(err, Error::SingularGeometry { .. }));
    }

    #[test]
    fn lead_angles_follow_their_definitions() {
        let s = head_on_state();
        assert!((s.ep.lead_second - wrap_pi(s.pursuer.heading - s.ep.los)).abs() < 1e-15);
        assert!((s.ed.lead_first - wrap_pi(s.evader.heading - s.ed.los)).abs() < 1e-15);
        assert!((s.dp.lead_first - wrap_pi(s.defender.heading - s.dp.los)).abs() < 1e-15);
    }

    #[test]
    fn chi_for_reference_geometry_is_228_degrees() {
        let s = head_on_state();
        assert!((s.dp.los.to_degrees() - 3.43).abs() < 0.01);
        assert!(
            (s.chi.to_degrees() - 228.0).abs() < 0.5,
            "chi = {}",
            s.chi.to_degrees()
        );
    }

    #[test]
    fn chi_examples() {
        assert!((chi_angle(0.3_f64, 0.3) - PI).abs() < 1e-15);
        assert!((chi_angle(deg(170.0), deg(-30.0)) - deg(20.0)).abs() < 1e-12);
    }

    #[test]
    fn beta_examples() {
        assert!((beta_error(deg(228.0), PI).unwrap() - deg(48.0)).abs() < 1e-12);
        assert_eq!(beta_error(deg(200.0), deg(200.0)).unwrap(), 0.0);
        // -180 deg maps to the +180 deg representative.
        assert!((beta_error(deg(10.0), deg(190.0)).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn beta_rejects_target_outside_guarantee_interval() {
        assert!(matches!(
            beta_error(0.0, deg(60.0)),
            Err(Error::InvalidTargetAngle(_))
        ));
        assert!(beta_error(0.0, deg(90.0)).is_ok());
        assert!(beta_error(0.0, deg(270.0)).is_ok());
        assert!(beta_error(0.0, deg(271.0)).is_err());
    }

    fn with_pair(
        mut s: EngagementState<f64>,
        which: crate::error::Pair,
        p: PairState<f64>,
    ) -> EngagementState<f64> {
        match which {
            crate::error::Pair::Ep => s.ep = p,
            crate::error::Pair::Dp => s.dp = p,
            crate::error::Pair::Ed => s.ed = p,
        }
        s
    }

    fn synthetic(
        range: f64,
        range_rate: f64,
        los_rate: f64,
        lead_first: f64,
        lead_second: f64,
    ) -> PairState<f64> {
        PairState {
            range,
            los: 0.0,
            range_rate,
            los_rate,
            lead_first,
            lead_second,
        }
    }

    #[test]
    fn los_accel_zero_when_everything_vanishes() {
        let quiet = synthetic(1000.0, -300.0, 0.0, 0.2, 0.1);
        let s = with_pair(head_on_state(), crate::error::Pair::Dp, quiet);
        assert_eq!(los_accel_dp(&s, 0.0, 0.0).unwrap(), 0.0);
        let s = with_pair(s, crate::error::Pair::Ed, quiet);
        assert_eq!(los_accel_ed(&s, 0.0, 0.0).unwrap(), 0.0);
        let s = with_pair(s, crate::error::Pair::Ep, quiet);
        assert_eq!(los_accel_ep(&s, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(beta_accel(&s, 0.0, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn los_accel_direct_substitution() {
        let p = synthetic(1000.0, -400.0, 0.01, 0.4, -0.3);
        let s = with_pair(head_on_state(), crate::error::Pair::Dp, p);
        assert!((los_accel_dp(&s, 0.0, 0.0).unwrap() - 0.008).abs() < 1e-15);
        let s = with_pair(s, crate::error::Pair::Ep, p);
        assert!((los_accel_ep(&s, 0.0, 0.0).unwrap() - 0.008).abs() < 1e-15);

        let ed = synthetic(400.0, -50.0, 0.0, 0.7, 0.0);
        let s = with_pair(s, crate::error::Pair::Ed, ed);
        assert!((los_accel_ed(&s, 0.0, 98.1).unwrap() - 0.24525).abs() < 1e-14);
    }

    #[test]
    fn beta_accel_is_difference_of_los_accels() {
        let s = head_on_state();
        let (a_p, a_e, a_d) = (37.0, -12.0, 80.0);
        let lhs = beta_accel(&s, a_p, a_e, a_d).unwrap();
        let rhs = los_accel_dp(&s, a_p, a_d).unwrap() - los_accel_ed(&s, a_e, a_d).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn singular_range_in_synthetic_state_is_reported() {
        let s = with_pair(
            head_on_state(),
            crate::error::Pair::Dp,
            synthetic(0.0, 0.0, 0.0, 0.0, 0.0),
        );
        assert!(los_accel_dp(&s, 0.0, 0.0).is_err());
        assert!(beta_accel(&s, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn negative_speed_rejected() {
        assert!(AgentState::new(0.0, 0.0, -1.0, 0.0).is_err());
        assert!(AgentLimits::new(0.0).is_err());
    }

    #[test]
    fn saturation() {
        let lim = AgentLimits::new(196.2).unwrap();
        assert_eq!(lim.saturate(250.0), 196.2);
        assert_eq!(saturate(-30.0, &AgentLimits::new(98.1).unwrap()), -30.0);
        assert_eq!(lim.saturate(0.0), 0.0);
        assert_eq!(lim.saturate(-1e9), -196.2);
    }

    #[test]
    fn single_precision_kinematics() {
        let e = AgentState::new(0.0_f32, 0.0, 100.0, 0.0).unwrap();
        let p = AgentState::new(5000.0_f32, 0.0, 200.0, std::f32::consts::FRAC_PI_2).unwrap();
        let pair = pair_kinematics(&e, &p).unwrap();
        assert!((pair.los_rate - 0.04).abs() < 1e-6);
        assert!((pair.range_rate + 100.0).abs() < 1e-3);
    }
}
