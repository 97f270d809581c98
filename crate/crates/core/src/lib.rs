//! Cooperative evader/defender guidance against a pursuer in the plane.
//!
//! The defender is steered so that the angle it subtends between the evader
//! and the pursuer reaches a chosen value at a prescribed time, which
//! guarantees it reaches the pursuer first. Everything is generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`.

// Negated comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engagement;
pub mod error;
pub mod guidance;
pub mod oracles;
pub mod profiles;
pub mod scalar;
pub mod simulator;

pub use engagement::{
    beta_accel, beta_error, chi_angle, los_accel_dp, los_accel_ed, los_accel_ep, pair_kinematics,
    saturate,
};
pub use error::{Error, Pair, Result};
pub use guidance::{
    allocate, allocate_coefficients, decoy_command, defender_command_info,
    joint_cooperative_command, pursuer_command, CooperationMode, PursuerLawKind, Switching,
};
pub use scalar::{wrap_pi, wrap_two_pi, Scalar};
pub use simulator::{run, step, Integrator, TerminalKind};

/// Standard gravity, used to express acceleration limits in g.
pub const STANDARD_GRAVITY: f64 = 9.81;

pub type AgentState = engagement::AgentState<f64>;
pub type AgentLimits = engagement::AgentLimits<f64>;
pub type PairState = engagement::PairState<f64>;
pub type EngagementState = engagement::EngagementState<f64>;
pub type BetaDynamics = engagement::BetaDynamics<f64>;
pub type PrescribedTimeProfile = profiles::PrescribedTimeProfile<f64>;
pub type ReachingEliminationProfile = profiles::ReachingEliminationProfile<f64>;
pub type DecoyProfile = profiles::DecoyProfile<f64>;
pub type GuidanceConfig = guidance::GuidanceConfig<f64>;
pub type PursuerLaw = guidance::PursuerLaw<f64>;
pub type GuidanceCommand = guidance::GuidanceCommand<f64>;
pub type Controller = guidance::Controller<f64>;
pub type SimConfig = simulator::SimConfig<f64>;
pub type Scenario = simulator::Scenario<f64>;
pub type SimulationTrace = simulator::SimulationTrace<f64>;
pub type TerminalEvent = simulator::TerminalEvent<f64>;
pub type FdSettings = oracles::FdSettings<f64>;
