use thiserror::Error;

/// Which agent pair a geometric quantity belongs to.
///
/// The first-named agent sits at the origin of the line of sight: `Ep` is
/// measured at the evader toward the pursuer, `Dp` at the defender toward the
/// pursuer and `Ed` at the evader toward the defender.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    Ep,
    Dp,
    Ed,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Ep, Pair::Dp, Pair::Ed];

    pub fn label(self) -> &'static str {
        match self {
            Pair::Ep => "EP",
            Pair::Dp => "DP",
            Pair::Ed => "ED",
        }
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular geometry: range {range} m for pair {pair} is below the coincidence guard")]
    SingularGeometry { pair: &'static str, range: f64 },

    #[error("target angle {0} rad lies outside [pi/2, 3pi/2]")]
    InvalidTargetAngle(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time {t} s outside the reference window [{start}, {end}]")]
    OutsideDomain { t: f64, start: f64, end: f64 },

    #[error("degenerate allocation: evader coefficient {b1} is too small to invert")]
    DegenerateAllocation { b1: f64 },

    #[error("degenerate geometry in {law}: denominator {value} below threshold")]
    DegenerateGeometry { law: &'static str, value: f64 },

    #[error("numerical divergence at t = {t} s")]
    NumericalDivergence { t: f64 },

    #[error("guidance mode mismatch: {0}")]
    ModeMismatch(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
