//! Acceptance criteria, one report line each.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pursuit_core::engagement::{AgentLimits, AgentState};
use pursuit_core::guidance::{allocate_coefficients, GuidanceConfig, PursuerLaw, PursuerLawKind};
use pursuit_core::oracles::{
    allocation_grid_check, closed_form_compare, fd_check_los_accel, step_halving_ratio, FdSettings,
};
use pursuit_core::simulator::{
    run, Integrator, Scenario, SimConfig, SimulationTrace, TerminalKind,
};
use pursuit_core::{Pair, STANDARD_GRAVITY};

use crate::catalog;
use crate::scenario::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Maneuver,
    Info,
    Properties,
    All,
}

impl Suite {
    pub fn ids(self) -> &'static [u32] {
        match self {
            Suite::Maneuver => &[1, 2, 3, 4, 5, 6],
            Suite::Info => &[7],
            Suite::Properties => &[8, 9, 10],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "maneuver" => Ok(Suite::Maneuver),
            "info" => Ok(Suite::Info),
            "properties" => Ok(Suite::Properties),
            "all" => Ok(Suite::All),
            _ => Err(format!(
                "unknown suite `{s}`, expected maneuver, info, properties or all"
            )),
        }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: u32,
    pub measured: String,
    pub bound: String,
    pub pass: bool,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "id={} status={status} measured={} bound={}",
            self.id, self.measured, self.bound
        )
    }
}

fn criterion(id: u32, measured: String, bound: &str, pass: bool) -> Criterion {
    Criterion {
        id,
        measured,
        bound: bound.to_string(),
        pass,
    }
}

fn failed(id: u32, bound: &str, why: impl fmt::Display) -> Criterion {
    criterion(
        id,
        format!("error:{}", why.to_string().replace(' ', "_")),
        bound,
        false,
    )
}

pub fn run_criterion(id: u32) -> Criterion {
    match id {
        1 => initial_angle(),
        2 => maneuver_prescribed_time(),
        3 => closed_form_tracking(),
        4 => pursuer_law_robustness(),
        5 => stationary_evader(),
        6 => reduced_authority(),
        7 => information_level(),
        8 => allocation_optimality(),
        9 => derivative_validation(),
        10 => capture_property_sweep(),
        _ => failed(id, "-", "no such criterion"),
    }
}

pub fn run_suite(suite: Suite) -> Vec<Criterion> {
    suite.ids().iter().map(|&id| run_criterion(id)).collect()
}

fn catalog_scenario(name: &str) -> Result<(ScenarioConfig, Scenario<f64>), String> {
    let cfg = catalog::load(name)
        .ok_or_else(|| format!("missing catalog entry {name}"))?
        .map_err(|e| e.to_string())?;
    let s = cfg.to_scenario().map_err(|e| e.to_string())?;
    Ok((cfg, s))
}

fn catalog_run(name: &str) -> Result<(Scenario<f64>, SimulationTrace<f64>), String> {
    let (_, s) = catalog_scenario(name)?;
    let trace = run(&s).map_err(|e| e.to_string())?;
    Ok((s, trace))
}

fn max_abs<'a>(values: impl Iterator<Item = f64> + 'a) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

fn is_capture(trace: &SimulationTrace<f64>) -> bool {
    trace.event.kind == TerminalKind::DefenderCapturesPursuer
}

/// Largest `|beta|` recorded at or after `t`.
fn beta_after(trace: &SimulationTrace<f64>, t: f64) -> f64 {
    max_abs(
        trace
            .rows
            .iter()
            .filter(|r| r.state.t >= t - 1e-9)
            .map(|r| r.state.beta),
    )
}

fn initial_angle() -> Criterion {
    const BOUND: &str = "|chi0-228deg|<=0.5deg";
    match catalog_scenario("fig3_chi180")
        .and_then(|(_, s)| s.initial_state().map_err(|e| e.to_string()))
    {
        Ok(state) => {
            let dev = (state.chi.to_degrees() - 228.0).abs();
            criterion(
                1,
                format!("chi0={:.4}deg", state.chi.to_degrees()),
                BOUND,
                dev <= 0.5,
            )
        }
        Err(e) => failed(1, BOUND, e),
    }
}

fn maneuver_prescribed_time() -> Criterion {
    const BOUND: &str = "S_outer<=2e-3,S_inner(t>=3.1)<=2e-3,beta(t>=6)<=1e-2,capture,min_r_EP>1";
    let (s, trace) = match catalog_run("fig3_chi180") {
        Ok(r) => r,
        Err(e) => return failed(2, BOUND, e),
    };
    let s_outer = max_abs(
        trace
            .rows
            .iter()
            .filter_map(|r| r.manifolds.map(|m| m.s_outer)),
    );
    let s_inner = max_abs(
        trace
            .rows
            .iter()
            .filter(|r| r.state.t >= 3.1 - 1e-9)
            .filter_map(|r| r.manifolds.map(|m| m.s_inner)),
    );
    let beta = beta_after(&trace, s.guidance.t_star);
    let e = &trace.event;
    let pass = s_outer <= 2e-3
        && s_inner <= 2e-3
        && beta <= 1e-2
        && is_capture(&trace)
        && e.min_r_ep > s.sim.capture_radius;
    let measured = format!(
        "S_outer={s_outer:.3e},S_inner={s_inner:.3e},beta={beta:.3e},event={},min_r_EP={:.1}",
        e.kind.name(),
        e.min_r_ep
    );
    criterion(2, measured, BOUND, pass)
}

fn closed_form_tracking() -> Criterion {
    const BOUND: &str = "max|beta-beta_ref|<=1e-2";
    match catalog_run("fig3_chi180")
        .and_then(|(s, t)| closed_form_compare(&t, &s.guidance).map_err(|e| e.to_string()))
    {
        Ok((dev, _)) => criterion(3, format!("{dev:.3e}"), BOUND, dev <= 1e-2),
        Err(e) => failed(3, BOUND, e),
    }
}

fn captures(names: &[&str]) -> (Vec<String>, bool) {
    let results: Vec<(String, bool)> = names
        .par_iter()
        .map(|name| match catalog_run(name) {
            Ok((_, t)) => (format!("{name}:{}", t.event.kind.name()), is_capture(&t)),
            Err(e) => (format!("{name}:error({e})"), false),
        })
        .collect();
    let pass = results.iter().all(|r| r.1);
    (results.into_iter().map(|r| r.0).collect(), pass)
}

fn pursuer_law_robustness() -> Criterion {
    let (m, pass) = captures(&["fig3_chi180", "fig4_ppg", "fig4_dpg"]);
    criterion(4, m.join(","), "all_defender_captures", pass)
}

fn stationary_evader() -> Criterion {
    const BOUND: &str = "all_defender_captures,beta(t>=6)<=1e-2";
    let names = [
        "fig5_d400",
        "fig5_d1500",
        "fig5_d2000",
        "fig6_los_m5",
        "fig6_los0",
        "fig6_los2",
    ];
    let results: Vec<Result<(bool, f64), String>> = names
        .par_iter()
        .map(|n| catalog_run(n).map(|(s, t)| (is_capture(&t), beta_after(&t, s.guidance.t_star))))
        .collect();
    let mut worst = 0.0f64;
    let mut caught = 0;
    for r in &results {
        match r {
            Ok((c, b)) => {
                worst = worst.max(*b);
                caught += usize::from(*c);
            }
            Err(e) => return failed(5, BOUND, e),
        }
    }
    criterion(
        5,
        format!("captures={caught}/6,beta={worst:.3e}"),
        BOUND,
        caught == 6 && worst <= 1e-2,
    )
}

fn reduced_authority() -> Criterion {
    match catalog_run("reduced_authority") {
        Ok((_, t)) => criterion(
            6,
            t.event.kind.name().into(),
            "defender_captures_pursuer",
            is_capture(&t),
        ),
        Err(e) => failed(6, "defender_captures_pursuer", e),
    }
}

fn information_level() -> Criterion {
    const BOUND: &str =
        "lamdot_EP(t>=4)<=1e-4,|aE|(t>=4.05)<=0.1,beta(t>=9)<=1e-2,all_defender_captures";
    let (s, trace) = match catalog_run("info_chi180") {
        Ok(r) => r,
        Err(e) => return failed(7, BOUND, e),
    };
    let t2 = s.guidance.t2;
    let lam = max_abs(
        trace
            .rows
            .iter()
            .filter(|r| r.state.t >= t2 - 1e-9)
            .map(|r| r.state.ep.los_rate),
    );
    let a_e = max_abs(
        trace
            .rows
            .iter()
            .filter(|r| r.state.t >= t2 + 0.05 - 1e-9)
            .filter_map(|r| r.command.map(|c| c.a_e)),
    );
    let beta = beta_after(&trace, s.guidance.t_star);
    let (runs, all) = captures(&[
        "info_chi150",
        "info_chi180",
        "info_chi200",
        "info_t2_6",
        "info_t2_8",
    ]);
    let pass = lam <= 1e-4 && a_e <= 0.1 && beta <= 1e-2 && all;
    criterion(
        7,
        format!(
            "lamdot={lam:.3e},aE={a_e:.3e},beta={beta:.3e},{}",
            runs.join(",")
        ),
        BOUND,
        pass,
    )
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn signed_log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = log_uniform(rng, lo, hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn allocation_optimality() -> Criterion {
    const BOUND: &str = "100/100_grid_optimal,identity_rel<=1e-10";
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut optimal = 0;
    let mut worst_identity = 0.0f64;
    for _ in 0..100 {
        let b1 = signed_log_uniform(&mut rng, 1e-4, 1e-1);
        let b2 = signed_log_uniform(&mut rng, 1e-4, 1e-1);
        let sigma = log_uniform(&mut rng, 0.1, 10.0);
        let u = signed_log_uniform(&mut rng, 1e-3, 10.0);
        match (
            allocate_coefficients(u, b1, b2, sigma),
            allocation_grid_check(b1, b2, sigma, u),
        ) {
            (Ok((a_e, a_d)), Ok(ok)) => {
                worst_identity = worst_identity.max((b1 * a_e - b2 * a_d - u).abs() / u.abs());
                optimal += usize::from(ok);
            }
            (Err(e), _) | (_, Err(e)) => return failed(8, BOUND, e),
        }
    }
    let pass = optimal == 100 && worst_identity <= 1e-10;
    criterion(
        8,
        format!("optimal={optimal}/100,identity_rel={worst_identity:.3e}"),
        BOUND,
        pass,
    )
}

fn derivative_validation() -> Criterion {
    const BOUND: &str = "fd<1e-3_all_pairs,rk4_ratio_in_[12,20]";
    let (s, trace) = match catalog_run("fig3_chi228") {
        Ok(r) => r,
        Err(e) => return failed(9, BOUND, e),
    };
    // The endgame is not smooth: drop the last half second before the event.
    let smooth = trace.truncated(trace.event.t_f - 0.5);
    let settings = FdSettings::new(s.sim.dt);
    let mut worst = 0.0f64;
    let mut all = true;
    for pair in Pair::ALL {
        match fd_check_los_accel(&smooth, pair, &settings) {
            Ok(r) => {
                worst = worst.max(r.max_deviation);
                all &= r.passes(&settings);
            }
            Err(e) => return failed(9, BOUND, e),
        }
    }
    let agent = AgentState::new(0.0, 0.0, 200.0, 0.4).expect("valid agent");
    let ratio =
        match step_halving_ratio(&agent, 20.0 * STANDARD_GRAVITY, 10.0, 0.1, Integrator::Rk4) {
            Ok(r) => r,
            Err(e) => return failed(9, BOUND, e),
        };
    let pass = all && worst < 1e-3 && (12.0..=20.0).contains(&ratio);
    criterion(
        9,
        format!("fd={worst:.3e},rk4_ratio={ratio:.2}"),
        BOUND,
        pass,
    )
}

/// Number of random geometries in the capture sweep.
pub const SWEEP_RUNS: usize = 200;

/// One random maneuver-level geometry: pursuer 2 to 8 km out and aimed at the
/// evader within 30 deg, defender 0.2 to 2 km out, free headings and target
/// angle.
pub fn random_geometry(rng: &mut ChaCha8Rng) -> Scenario<f64> {
    use std::f64::consts::PI;
    let r_ep = rng.gen_range(2000.0..8000.0);
    let r_ed = rng.gen_range(200.0..2000.0);
    let los_p = rng.gen_range(-PI..PI);
    let los_d = rng.gen_range(-PI..PI);
    let aim = rng.gen_range(-30.0f64..30.0).to_radians();
    let heading_e = rng.gen_range(-PI..PI);
    let heading_d = rng.gen_range(-PI..PI);
    let chi_star = rng.gen_range(0.5 * PI..=1.5 * PI);
    let o = (0.0, 0.0);
    let limits =
        [20.0, 10.0, 20.0].map(|g| AgentLimits::new(g * STANDARD_GRAVITY).expect("positive limit"));
    let mut sim = SimConfig::new(60.0);
    sim.dt = 0.01;
    Scenario {
        pursuer: AgentState::from_polar(o, r_ep, los_p, 200.0, los_p + PI + aim)
            .expect("valid pursuer"),
        evader: AgentState::new(0.0, 0.0, 100.0, heading_e).expect("valid evader"),
        defender: AgentState::from_polar(o, r_ed, los_d, 200.0, heading_d).expect("valid defender"),
        limits,
        guidance: GuidanceConfig::maneuver(chi_star),
        pursuer_law: PursuerLaw::new(PursuerLawKind::Png),
        sim,
    }
}

/// Terminal event name of each sweep member, `error` for a failed run.
pub fn sweep_outcomes(seed: u64, runs: usize) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scenarios: Vec<Scenario<f64>> = (0..runs).map(|_| random_geometry(&mut rng)).collect();
    scenarios
        .par_iter()
        .map(|s| match run(s) {
            Ok(t) => (t.event.kind.name().to_string(), t.event.min_r_ep),
            Err(_) => ("error".to_string(), f64::NAN),
        })
        .collect()
}

fn capture_property_sweep() -> Criterion {
    const BOUND: &str = "capture_rate=100%_of_non_degenerate,abort_rate<=2%";
    let outcomes = sweep_outcomes(10, SWEEP_RUNS);
    let count = |k: TerminalKind| outcomes.iter().filter(|o| o.0 == k.name()).count();
    let aborts = count(TerminalKind::DegenerateGeometryAbort);
    let captures = outcomes
        .iter()
        .filter(|o| o.0 == TerminalKind::DefenderCapturesPursuer.name() && o.1 > 1.0)
        .count();
    let lost = count(TerminalKind::PursuerCapturesEvader);
    let timeouts = count(TerminalKind::Timeout);
    let errors = outcomes.iter().filter(|o| o.0 == "error").count();
    let non_degenerate = outcomes.len() - aborts;
    let abort_rate = aborts as f64 / outcomes.len() as f64;
    let pass = captures == non_degenerate && abort_rate <= 0.02;
    let measured = format!(
        "runs={},captures={captures},evader_lost={lost},timeouts={timeouts},errors={errors},aborts={aborts}",
        outcomes.len()
    );
    criterion(10, measured, BOUND, pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_cover_every_criterion_once() {
        let mut ids: Vec<u32> = [Suite::Maneuver, Suite::Info, Suite::Properties]
            .iter()
            .flat_map(|s| s.ids().to_vec())
            .collect();
        ids.sort();
        assert_eq!(ids, Suite::All.ids());
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn report_line_format() {
        let c = criterion(3, "1.0e-3".into(), "<=1e-2", true);
        assert_eq!(
            c.to_string(),
            "id=3 status=PASS measured=1.0e-3 bound=<=1e-2"
        );
    }
}
