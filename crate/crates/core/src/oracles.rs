//! Independent numerical checks of the analytic expressions.
//!
//! Formulas here are transcribed separately from the guidance and
//! kinematics modules so that a slip in one does not silently validate
//! itself through the other.

use crate::engagement::AgentState;
use crate::error::{invalid, Error, Pair, Result};
use crate::guidance::{allocate_coefficients, CooperationMode, GuidanceConfig};
use crate::scalar::Scalar;
use crate::simulator::{advance_agent, Integrator, SimulationTrace, TraceRow};

/// Central-difference settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSettings<T> {
    /// Expected spacing between consecutive trace rows.
    pub dt_fd: T,
    pub abs_tol: T,
    pub rel_tol: T,
    /// Samples skipped on each side of a switching or saturation change.
    pub mask: usize,
}

impl<T: Scalar> FdSettings<T> {
    pub fn new(dt_fd: T) -> Self {
        Self {
            dt_fd,
            abs_tol: T::lit(1e-3),
            rel_tol: T::zero(),
            mask: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_fd > T::zero()) {
            return Err(invalid("dt_fd", "must be positive"));
        }
        if !(self.abs_tol >= T::zero() && self.rel_tol >= T::zero()) {
            return Err(invalid("tolerance", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdReport<T> {
    pub max_deviation: T,
    pub worst_t: T,
    /// Largest analytic magnitude seen, the scale for the relative tolerance.
    pub scale: T,
    pub checked: usize,
    pub masked: usize,
}

impl<T: Scalar> FdReport<T> {
    pub fn passes(&self, settings: &FdSettings<T>) -> bool {
        self.checked > 0 && self.max_deviation <= settings.abs_tol + settings.rel_tol * self.scale
    }
}

fn pair_of<T: Scalar>(row: &TraceRow<T>, pair: Pair) -> &crate::engagement::PairState<T> {
    row.state.pair(pair)
}

/// Commands of the (first, second) agents of `pair`.
fn pair_commands<T: Scalar>(row: &TraceRow<T>, pair: Pair) -> Option<(T, T)> {
    let c = row.command?;
    Some(match pair {
        Pair::Ep => (c.a_e, c.a_p),
        Pair::Dp => (c.a_d, c.a_p),
        Pair::Ed => (c.a_e, c.a_d),
    })
}

fn saturation_pattern<T: Scalar>(row: &TraceRow<T>) -> Option<[bool; 3]> {
    let c = row.command?;
    Some([c.raw_a_p != c.a_p, c.raw_a_e != c.a_e, c.raw_a_d != c.a_d])
}

/// Compares the central difference of the logged LOS rate of `pair` with
/// the LOS acceleration evaluated from logged states and commands.
///
/// Commands are held over each step, so the difference across two steps is
/// matched against the analytic value at the mean of the two commands.
pub fn fd_check_los_accel<T: Scalar>(
    trace: &SimulationTrace<T>,
    pair: Pair,
    settings: &FdSettings<T>,
) -> Result<FdReport<T>> {
    settings.validate()?;
    let rows = &trace.rows;
    if rows.len() < 3 {
        return Err(invalid("trace", "needs at least three rows"));
    }
    let tol = settings.dt_fd * T::lit(1e-6);
    for w in rows.windows(2) {
        if ((w[1].state.t - w[0].state.t) - settings.dt_fd).abs() > tol {
            return Err(invalid("trace", "rows must be spaced by dt_fd"));
        }
    }

    let n = rows.len();
    let mut masked = vec![false; n];
    let mut mark = |i: usize| {
        let lo = i.saturating_sub(settings.mask);
        let hi = (i + settings.mask).min(n - 1);
        for m in masked.iter_mut().take(hi + 1).skip(lo) {
            *m = true;
        }
    };
    for i in 1..n {
        let s0 = rows[i - 1].manifolds.map(|m| m.s_outer);
        let s1 = rows[i].manifolds.map(|m| m.s_outer);
        if let (Some(a), Some(b)) = (s0, s1) {
            if (a > T::zero()) != (b > T::zero()) {
                mark(i);
            }
        }
        if let (Some(a), Some(b)) = (
            saturation_pattern(&rows[i - 1]),
            saturation_pattern(&rows[i]),
        ) {
            if a != b {
                mark(i);
            }
        }
    }

    let two = T::lit(2.0);
    let mut report = FdReport {
        max_deviation: T::zero(),
        worst_t: T::zero(),
        scale: T::zero(),
        checked: 0,
        masked: 0,
    };
    for i in 1..n - 1 {
        if masked[i] {
            report.masked += 1;
            continue;
        }
        let (Some((f0, s0)), Some((f1, s1))) = (
            pair_commands(&rows[i - 1], pair),
            pair_commands(&rows[i], pair),
        ) else {
            continue;
        };
        let fd = (pair_of(&rows[i + 1], pair).los_rate - pair_of(&rows[i - 1], pair).los_rate)
            / (two * settings.dt_fd);
        let p = pair_of(&rows[i], pair);
        let a_first = (f0 + f1) / two;
        let a_second = (s0 + s1) / two;
        // Differentiate r * lamdot = v2 sin(delta2) - v1 sin(delta1) in time.
        let analytic = (a_second * p.lead_second.cos()
            - a_first * p.lead_first.cos()
            - two * p.range_rate * p.los_rate)
            / p.range;
        let dev = (fd - analytic).abs();
        report.checked += 1;
        report.scale = report.scale.max(analytic.abs());
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_t = rows[i].state.t;
        }
    }
    Ok(report)
}

/// Points sampled along the constraint line by [`allocation_grid_check`].
pub const GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridReport<T> {
    pub closed_cost: T,
    pub grid_cost: T,
    pub grid_a_d: T,
    pub a_e: T,
    pub a_d: T,
}

fn cost<T: Scalar>(a_e: T, a_d: T, sigma: T) -> T {
    ((a_e / sigma).powi(2) + a_d.powi(2)).sqrt()
}

/// Brute-force minimum of the weighted cost over the constraint line.
pub fn allocation_grid_search<T: Scalar>(b1: T, b2: T, sigma: T, u: T) -> Result<GridReport<T>> {
    if !(sigma > T::zero()) {
        return Err(invalid("sigma", "must be positive"));
    }
    let (a_e, a_d) = allocate_coefficients(u, b1, b2, sigma)?;
    let closed_cost = cost(a_e, a_d, sigma);
    // The optimum lies between zero and both axis intercepts of the line.
    let mut half = (u / (T::lit(2.0) * b1.abs() * sigma)).abs();
    if b2 != T::zero() {
        half = half.min((u / b2).abs());
    }
    let half = T::lit(1.5) * half;
    let mut best = (T::infinity(), T::zero());
    let last = T::from_usize(GRID_POINTS - 1).expect("grid size representable");
    for i in 0..GRID_POINTS {
        let x = -half + T::lit(2.0) * half * T::from_usize(i).expect("index representable") / last;
        let e = (u + b2 * x) / b1;
        let c = cost(e, x, sigma);
        if c < best.0 {
            best = (c, x);
        }
    }
    Ok(GridReport {
        closed_cost,
        grid_cost: best.0,
        grid_a_d: best.1,
        a_e,
        a_d,
    })
}

/// True when the closed-form allocation costs no more than the best grid point.
pub fn allocation_grid_check<T: Scalar>(b1: T, b2: T, sigma: T, u: T) -> Result<bool> {
    let r = allocation_grid_search(b1, b2, sigma, u)?;
    let slack = T::lit(1e-9) * r.grid_cost.max(T::min_positive_value());
    Ok(r.closed_cost <= r.grid_cost + slack)
}

/// Largest deviations from the closed-form trajectories:
/// the error angle on `[t1, t_star]` and, at information level, the
/// evader/pursuer LOS rate on `[0, t2]`.
pub fn closed_form_compare<T: Scalar>(
    trace: &SimulationTrace<T>,
    cfg: &GuidanceConfig<T>,
) -> Result<(T, T)> {
    let rows = &trace.rows;
    let first = rows.first().ok_or_else(|| invalid("trace", "is empty"))?;
    let half = trace.dt / T::lit(2.0);

    let mut beta_dev = T::zero();
    if cfg.t1 < cfg.t_star - trace.dt - half {
        let anchor = rows.iter().find(|r| r.state.t >= cfg.t1 - half);
        if let Some(anchor) = anchor {
            let (t_a, b_a) = (anchor.state.t, anchor.state.beta);
            for r in rows
                .iter()
                .filter(|r| r.state.t >= t_a && r.state.t <= cfg.t_star + half)
            {
                let tau = ((cfg.t_star - r.state.t) / (cfg.t_star - t_a)).max(T::zero());
                let reference = b_a * tau.powi(cfg.k1 as i32);
                beta_dev = beta_dev.max((r.state.beta - reference).abs());
            }
        }
    }

    let mut lam_dev = T::zero();
    if trace.mode == CooperationMode::InformationLevel {
        let lam0 = first.state.ep.los_rate;
        for r in rows.iter().filter(|r| r.state.t <= cfg.t2 + half) {
            let tau = ((cfg.t2 - r.state.t) / cfg.t2).max(T::zero());
            let reference = lam0 * tau.powi(cfg.k3 as i32);
            lam_dev = lam_dev.max((r.state.ep.los_rate - reference).abs());
        }
    }
    if !(beta_dev.is_finite() && lam_dev.is_finite()) {
        return Err(Error::NumericalDivergence {
            t: first.state.t.as_f64(),
        });
    }
    Ok((beta_dev, lam_dev))
}

/// End-point error of one agent flying a constant-acceleration arc for
/// `horizon` seconds, against the analytic circle.
pub fn arc_error<T: Scalar>(
    agent: &AgentState<T>,
    a: T,
    horizon: T,
    dt: T,
    integrator: Integrator,
) -> Result<T> {
    if !(agent.speed > T::zero() && a != T::zero()) {
        return Err(invalid(
            "arc",
            "needs a moving agent and a non-zero command",
        ));
    }
    let n = (horizon / dt)
        .round()
        .to_u64()
        .ok_or_else(|| invalid("dt", "too small"))?;
    let mut s = *agent;
    for _ in 0..n {
        s = advance_agent(&s, a, dt, integrator);
    }
    let t = T::from_u64(n).expect("step count representable") * dt;
    let w = a / agent.speed;
    let radius = agent.speed / w;
    let g0 = agent.heading;
    let x = agent.x + radius * ((g0 + w * t).sin() - g0.sin());
    let y = agent.y - radius * ((g0 + w * t).cos() - g0.cos());
    Ok((s.x - x).hypot(s.y - y))
}

/// Ratio of arc errors at `dt` and `dt / 2`; about 16 for a fourth-order scheme.
pub fn step_halving_ratio<T: Scalar>(
    agent: &AgentState<T>,
    a: T,
    horizon: T,
    dt: T,
    integrator: Integrator,
) -> Result<T> {
    let coarse = arc_error(agent, a, horizon, dt, integrator)?;
    let fine = arc_error(agent, a, horizon, dt / T::lit(2.0), integrator)?;
    Ok(coarse / fine)
}
