//! Time-varying auxiliary profiles, the sliding manifolds built on them and
//! the closed-form trajectories they induce once sliding is enforced.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

fn check_time<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("{} must be positive and finite", value),
        ))
    }
}

fn check_order(name: &'static str, k: u32) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(invalid(name, "exponent must be at least 1"))
    }
}

fn powi<T: Scalar>(x: T, k: u32) -> T {
    x.powi(k as i32)
}

/// Singular-gain profile `g(t) = -k1 beta / (t_star - t)` that drives the
/// error to zero exactly at `t_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrescribedTimeProfile<T> {
    t_star: T,
    k1: u32,
    guard: T,
}

impl<T: Scalar> PrescribedTimeProfile<T> {
    /// `guard` is the width of the window before `t_star` where the profile is
    /// already switched off; the simulator passes its step size.
    pub fn new(t_star: T, k1: u32, guard: T) -> Result<Self> {
        check_time("t_star", t_star)?;
        check_order("k1", k1)?;
        if !(guard >= T::zero()) || guard >= t_star {
            return Err(invalid(
                "guard",
                format!("{} must lie in [0, t_star)", guard),
            ));
        }
        Ok(Self { t_star, k1, guard })
    }

    pub fn t_star(&self) -> T {
        self.t_star
    }

    pub fn k1(&self) -> u32 {
        self.k1
    }

    fn active(&self, t: T) -> bool {
        t < self.t_star - self.guard
    }

    pub fn value(&self, beta: T, t: T) -> T {
        if self.active(t) {
            -T::of_u32(self.k1) * beta / (self.t_star - t)
        } else {
            T::zero()
        }
    }

    /// Total time derivative of [`value`](Self::value) given the measured error rate.
    pub fn rate(&self, beta: T, beta_dot: T, t: T) -> T {
        if self.active(t) {
            let tau = self.t_star - t;
            -T::of_u32(self.k1) * (beta_dot * tau + beta) / (tau * tau)
        } else {
            T::zero()
        }
    }
}

/// `h0 (t_end - t)^k / t_end^k`, vanishing identically after `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PolynomialDecay<T> {
    t_end: T,
    k: u32,
    h0: T,
}

impl<T: Scalar> PolynomialDecay<T> {
    fn value(&self, t: T) -> T {
        if t < self.t_end {
            self.h0 * powi((self.t_end - t) / self.t_end, self.k)
        } else {
            T::zero()
        }
    }

    fn rate(&self, t: T) -> T {
        if t < self.t_end {
            let k = T::of_u32(self.k);
            -k * self.h0 * powi(self.t_end - t, self.k - 1) / powi(self.t_end, self.k)
        } else {
            T::zero()
        }
    }
}

/// Outer-layer profile whose initial value cancels the inner manifold, so
/// the outer manifold starts on zero and no reaching phase exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachingEliminationProfile<T> {
    decay: PolynomialDecay<T>,
}

impl<T: Scalar> ReachingEliminationProfile<T> {
    pub fn new(t1: T, k2: u32, h0: T) -> Result<Self> {
        check_time("t1", t1)?;
        check_order("k2", k2)?;
        if !h0.is_finite() {
            return Err(invalid("h0", "must be finite"));
        }
        Ok(Self {
            decay: PolynomialDecay {
                t_end: t1,
                k: k2,
                h0,
            },
        })
    }

    /// Builds the profile with `h0 = -s_inner0`.
    pub fn from_inner(t1: T, k2: u32, s_inner0: T) -> Result<Self> {
        Self::new(t1, k2, -s_inner0)
    }

    pub fn t1(&self) -> T {
        self.decay.t_end
    }

    pub fn h0(&self) -> T {
        self.decay.h0
    }

    pub fn value(&self, t: T) -> T {
        self.decay.value(t)
    }

    pub fn rate(&self, t: T) -> T {
        self.decay.rate(t)
    }
}

/// Profile on the evader/pursuer LOS rate used by the decoy evader.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoyProfile<T> {
    decay: PolynomialDecay<T>,
}

impl<T: Scalar> DecoyProfile<T> {
    pub fn new(t2: T, k3: u32, h_e0: T) -> Result<Self> {
        check_time("t2", t2)?;
        check_order("k3", k3)?;
        if !h_e0.is_finite() {
            return Err(invalid("hE0", "must be finite"));
        }
        Ok(Self {
            decay: PolynomialDecay {
                t_end: t2,
                k: k3,
                h0: h_e0,
            },
        })
    }

    /// Builds the profile with `hE0 = -lambda_dot_ep0`.
    pub fn from_los_rate(t2: T, k3: u32, lambda_dot_ep0: T) -> Result<Self> {
        Self::new(t2, k3, -lambda_dot_ep0)
    }

    pub fn t2(&self) -> T {
        self.decay.t_end
    }

    pub fn h_e0(&self) -> T {
        self.decay.h0
    }

    pub fn value(&self, t: T) -> T {
        self.decay.value(t)
    }

    pub fn rate(&self, t: T) -> T {
        self.decay.rate(t)
    }
}

/// `S_inner = beta_dot - g`.
pub fn inner_manifold<T: Scalar>(beta_dot: T, g: T) -> T {
    beta_dot - g
}

/// `S_outer = S_inner + h`.
pub fn outer_manifold<T: Scalar>(s_inner: T, h: T) -> T {
    s_inner + h
}

/// `S_E = lambda_dot_EP + h_E`.
pub fn decoy_manifold<T: Scalar>(lambda_dot_ep: T, h_e: T) -> T {
    lambda_dot_ep + h_e
}

/// Error trajectory on the inner manifold, anchored at the value it had when
/// sliding started: `beta(t1) ((t_star - t) / (t_star - t1))^k1`.
pub fn beta_reference<T: Scalar>(beta_at_t1: T, t1: T, t_star: T, k1: u32, t: T) -> Result<T> {
    if !(t >= t1 && t <= t_star) {
        return Err(Error::OutsideDomain {
            t: t.as_f64(),
            start: t1.as_f64(),
            end: t_star.as_f64(),
        });
    }
    if t == t_star {
        return Ok(T::zero());
    }
    Ok(beta_at_t1 * powi((t_star - t) / (t_star - t1), k1))
}

/// Evader/pursuer LOS rate on the decoy manifold.
pub fn lambda_dot_ep_reference<T: Scalar>(lam0: T, t2: T, k3: u32, t: T) -> T {
    if t < t2 {
        lam0 * powi((t2 - t) / t2, k3)
    } else {
        T::zero()
    }
}
