//! Flat `key = value` scenario files.
//!
//! Angles are in degrees, distances in meters, times in seconds and
//! acceleration limits in g. Placements are polar from the evader, which
//! always starts at the origin. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use pursuit_core::engagement::{AgentLimits, AgentState};
use pursuit_core::guidance::{
    CooperationMode, GuidanceConfig, PursuerLaw, PursuerLawKind, Switching,
};
use pursuit_core::simulator::{Integrator, Scenario, SimConfig};
use pursuit_core::STANDARD_GRAVITY;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey {
        line: usize,
        key: String,
        first: usize,
    },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid {
        line: Option<usize>,
        source: pursuit_core::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchingKind {
    BoundaryLayer,
    Sign,
}

/// One agent as written in a file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentSpec {
    pub speed: f64,
    pub heading_deg: f64,
    pub a_max_g: f64,
    /// Ignored for the evader.
    pub range: f64,
    pub los_deg: f64,
}

/// A scenario in file units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub mode: CooperationMode,
    pub chi_star_deg: f64,
    pub evader: AgentSpec,
    pub pursuer: AgentSpec,
    pub defender: AgentSpec,
    pub law: PursuerLawKind,
    pub nav_constant: f64,
    pub pursuit_gain: f64,
    pub deviation_deg: f64,
    pub bias_gain: f64,
    pub t_star: f64,
    pub k1: u32,
    pub t1: f64,
    pub k2: u32,
    pub t2: f64,
    pub k3: u32,
    pub gain: f64,
    pub decoy_gain: f64,
    pub sigma: f64,
    pub switching: SwitchingKind,
    pub boundary_layer: f64,
    pub dt: f64,
    pub t_max: f64,
    pub capture_radius: f64,
    /// Defaults to the capture radius.
    pub evader_loss_radius: Option<f64>,
    pub integrator: Integrator,
    pub record_every: usize,
    pub write_csv: bool,
    pub write_svg: bool,
}

/// Keys every file must set.
pub const REQUIRED_KEYS: &[&str] = &[
    "mode",
    "chi_star",
    "evader.speed",
    "evader.heading",
    "evader.a_max",
    "pursuer.speed",
    "pursuer.range",
    "pursuer.los",
    "pursuer.heading",
    "pursuer.a_max",
    "pursuer.law",
    "defender.speed",
    "defender.range",
    "defender.los",
    "defender.heading",
    "defender.a_max",
    "t_star",
    "k1",
    "t1",
    "k2",
    "K",
];

/// Additionally required at information level.
pub const INFORMATION_KEYS: &[&str] = &["t2", "k3", "K1"];

/// Every key a file may contain, in serialization order.
pub const ALL_KEYS: &[&str] = &[
    "name",
    "mode",
    "chi_star",
    "evader.speed",
    "evader.heading",
    "evader.a_max",
    "pursuer.speed",
    "pursuer.range",
    "pursuer.los",
    "pursuer.heading",
    "pursuer.a_max",
    "pursuer.law",
    "pursuer.nav_constant",
    "pursuer.pursuit_gain",
    "pursuer.deviation",
    "pursuer.bias_gain",
    "defender.speed",
    "defender.range",
    "defender.los",
    "defender.heading",
    "defender.a_max",
    "t_star",
    "k1",
    "t1",
    "k2",
    "t2",
    "k3",
    "K",
    "K1",
    "sigma",
    "switching",
    "boundary_layer",
    "dt",
    "t_max",
    "capture_radius",
    "evader_loss_radius",
    "integrator",
    "record_every",
    "output.csv",
    "output.svg",
];

impl Default for ScenarioConfig {
    fn default() -> Self {
        let agent = AgentSpec {
            speed: 0.0,
            heading_deg: 0.0,
            a_max_g: 0.0,
            range: 0.0,
            los_deg: 0.0,
        };
        Self {
            name: "scenario".into(),
            mode: CooperationMode::ManeuverLevel,
            chi_star_deg: 180.0,
            evader: agent,
            pursuer: agent,
            defender: agent,
            law: PursuerLawKind::Png,
            nav_constant: 3.0,
            pursuit_gain: 0.1,
            deviation_deg: 20.0,
            bias_gain: 1.0,
            t_star: 0.0,
            k1: 0,
            t1: 0.0,
            k2: 0,
            t2: 4.0,
            k3: 3,
            gain: 0.0,
            decoy_gain: 1.0,
            sigma: 1.0,
            switching: SwitchingKind::BoundaryLayer,
            boundary_layer: 5e-3,
            dt: 1e-3,
            t_max: 40.0,
            capture_radius: 1.0,
            evader_loss_radius: None,
            integrator: Integrator::Rk4,
            record_every: 1,
            write_csv: true,
            write_svg: true,
        }
    }
}

fn number(value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{value}` is not finite"))
    }
}

fn integer<N: std::str::FromStr>(value: &str) -> Result<N, String> {
    value
        .parse()
        .map_err(|_| format!("`{value}` is not a non-negative integer"))
}

fn boolean(value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}

pub fn parse_mode(value: &str) -> Result<CooperationMode, String> {
    match value {
        "maneuver" => Ok(CooperationMode::ManeuverLevel),
        "information" => Ok(CooperationMode::InformationLevel),
        _ => Err(format!("`{value}` is not one of maneuver, information")),
    }
}

pub fn parse_law(value: &str) -> Result<PursuerLawKind, String> {
    match value {
        "png" => Ok(PursuerLawKind::Png),
        "ppg" => Ok(PursuerLawKind::Ppg),
        "dpg" => Ok(PursuerLawKind::Dpg),
        "bpng" => Ok(PursuerLawKind::Bpng),
        _ => Err(format!("`{value}` is not one of png, ppg, dpg, bpng")),
    }
}

impl ScenarioConfig {
    /// Sets one key from its textual value. Returns `Ok(false)` for an unknown key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
        if let Some((who, field)) = key.split_once('.') {
            let spec = match who {
                "evader" => Some(&mut self.evader),
                "pursuer" => Some(&mut self.pursuer),
                "defender" => Some(&mut self.defender),
                _ => None,
            };
            if let Some(spec) = spec {
                let slot = match (who, field) {
                    (_, "speed") => &mut spec.speed,
                    (_, "heading") => &mut spec.heading_deg,
                    (_, "a_max") => &mut spec.a_max_g,
                    ("pursuer" | "defender", "range") => &mut spec.range,
                    ("pursuer" | "defender", "los") => &mut spec.los_deg,
                    _ => return self.set_pursuer_or_output(key, value),
                };
                *slot = number(value)?;
                return Ok(true);
            }
            return self.set_pursuer_or_output(key, value);
        }
        match key {
            "name" => {
                if value.is_empty()
                    || value
                        .chars()
                        .any(|c| c.is_whitespace() || c == '/' || c == '\\')
                {
                    return Err(
                        "names must be non-empty without whitespace or path separators".into(),
                    );
                }
                self.name = value.to_string();
            }
            "mode" => self.mode = parse_mode(value)?,
            "chi_star" => self.chi_star_deg = number(value)?,
            "t_star" => self.t_star = number(value)?,
            "k1" => self.k1 = integer(value)?,
            "t1" => self.t1 = number(value)?,
            "k2" => self.k2 = integer(value)?,
            "t2" => self.t2 = number(value)?,
            "k3" => self.k3 = integer(value)?,
            "K" => self.gain = number(value)?,
            "K1" => self.decoy_gain = number(value)?,
            "sigma" => self.sigma = number(value)?,
            "switching" => {
                self.switching = match value {
                    "boundary" => SwitchingKind::BoundaryLayer,
                    "sign" => SwitchingKind::Sign,
                    _ => return Err(format!("`{value}` is not one of boundary, sign")),
                }
            }
            "boundary_layer" => self.boundary_layer = number(value)?,
            "dt" => self.dt = number(value)?,
            "t_max" => self.t_max = number(value)?,
            "capture_radius" => self.capture_radius = number(value)?,
            "evader_loss_radius" => self.evader_loss_radius = Some(number(value)?),
            "integrator" => {
                self.integrator = match value {
                    "rk4" => Integrator::Rk4,
                    "euler" => Integrator::Euler,
                    _ => return Err(format!("`{value}` is not one of rk4, euler")),
                }
            }
            "record_every" => self.record_every = integer(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn set_pursuer_or_output(&mut self, key: &str, value: &str) -> Result<bool, String> {
        match key {
            "pursuer.law" => self.law = parse_law(value)?,
            "pursuer.nav_constant" => self.nav_constant = number(value)?,
            "pursuer.pursuit_gain" => self.pursuit_gain = number(value)?,
            "pursuer.deviation" => self.deviation_deg = number(value)?,
            "pursuer.bias_gain" => self.bias_gain = number(value)?,
            "output.csv" => self.write_csv = boolean(value)?,
            "output.svg" => self.write_svg = boolean(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Textual value of `key`, `None` for an unset optional key.
    pub fn get(&self, key: &str) -> Option<String> {
        let f = |v: f64| Some(format!("{v}"));
        match key {
            "name" => Some(self.name.clone()),
            "mode" => Some(self.mode.name().to_string()),
            "chi_star" => f(self.chi_star_deg),
            "evader.speed" => f(self.evader.speed),
            "evader.heading" => f(self.evader.heading_deg),
            "evader.a_max" => f(self.evader.a_max_g),
            "pursuer.speed" => f(self.pursuer.speed),
            "pursuer.range" => f(self.pursuer.range),
            "pursuer.los" => f(self.pursuer.los_deg),
            "pursuer.heading" => f(self.pursuer.heading_deg),
            "pursuer.a_max" => f(self.pursuer.a_max_g),
            "pursuer.law" => Some(self.law.name().to_string()),
            "pursuer.nav_constant" => f(self.nav_constant),
            "pursuer.pursuit_gain" => f(self.pursuit_gain),
            "pursuer.deviation" => f(self.deviation_deg),
            "pursuer.bias_gain" => f(self.bias_gain),
            "defender.speed" => f(self.defender.speed),
            "defender.range" => f(self.defender.range),
            "defender.los" => f(self.defender.los_deg),
            "defender.heading" => f(self.defender.heading_deg),
            "defender.a_max" => f(self.defender.a_max_g),
            "t_star" => f(self.t_star),
            "k1" => Some(self.k1.to_string()),
            "t1" => f(self.t1),
            "k2" => Some(self.k2.to_string()),
            "t2" => f(self.t2),
            "k3" => Some(self.k3.to_string()),
            "K" => f(self.gain),
            "K1" => f(self.decoy_gain),
            "sigma" => f(self.sigma),
            "switching" => Some(match self.switching {
                SwitchingKind::BoundaryLayer => "boundary".into(),
                SwitchingKind::Sign => "sign".into(),
            }),
            "boundary_layer" => f(self.boundary_layer),
            "dt" => f(self.dt),
            "t_max" => f(self.t_max),
            "capture_radius" => f(self.capture_radius),
            "evader_loss_radius" => self.evader_loss_radius.and_then(f),
            "integrator" => Some(match self.integrator {
                Integrator::Rk4 => "rk4".into(),
                Integrator::Euler => "euler".into(),
            }),
            "record_every" => Some(self.record_every.to_string()),
            "output.csv" => Some(self.write_csv.to_string()),
            "output.svg" => Some(self.write_svg.to_string()),
            _ => None,
        }
    }

    /// Writes every set key in canonical order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for key in ALL_KEYS {
            if let Some(v) = self.get(key) {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
        out
    }

    /// Builds the simulator scenario in internal units.
    pub fn to_scenario(&self) -> Result<Scenario<f64>, pursuit_core::Error> {
        let rad = f64::to_radians;
        let limit = |spec: &AgentSpec| AgentLimits::new(spec.a_max_g * STANDARD_GRAVITY);
        let origin = (0.0, 0.0);
        let evader = AgentState::new(0.0, 0.0, self.evader.speed, rad(self.evader.heading_deg))?;
        let pursuer = AgentState::from_polar(
            origin,
            self.pursuer.range,
            rad(self.pursuer.los_deg),
            self.pursuer.speed,
            rad(self.pursuer.heading_deg),
        )?;
        let defender = AgentState::from_polar(
            origin,
            self.defender.range,
            rad(self.defender.los_deg),
            self.defender.speed,
            rad(self.defender.heading_deg),
        )?;
        let switching = match self.switching {
            SwitchingKind::BoundaryLayer => Switching::BoundaryLayer {
                width: self.boundary_layer,
            },
            SwitchingKind::Sign => Switching::Sign,
        };
        let guidance = GuidanceConfig {
            mode: self.mode,
            chi_star: rad(self.chi_star_deg),
            t_star: self.t_star,
            k1: self.k1,
            t1: self.t1,
            k2: self.k2,
            t2: self.t2,
            k3: self.k3,
            gain: self.gain,
            decoy_gain: self.decoy_gain,
            sigma: self.sigma,
            switching,
        };
        let pursuer_law = PursuerLaw {
            kind: self.law,
            nav_constant: self.nav_constant,
            pursuit_gain: self.pursuit_gain,
            deviation: rad(self.deviation_deg),
            bias_gain: self.bias_gain,
        };
        let sim = SimConfig {
            dt: self.dt,
            t_max: self.t_max,
            capture_radius: self.capture_radius,
            evader_loss_radius: self.evader_loss_radius.unwrap_or(self.capture_radius),
            integrator: self.integrator,
            record_every: self.record_every,
        };
        let scenario = Scenario {
            pursuer,
            evader,
            defender,
            limits: [
                limit(&self.pursuer)?,
                limit(&self.evader)?,
                limit(&self.defender)?,
            ],
            guidance,
            pursuer_law,
            sim,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Raw `key -> (value, line)` entries of a file.
pub type RawEntries = BTreeMap<String, (String, usize)>;

pub fn read_entries(text: &str) -> Result<RawEntries, ConfigError> {
    let mut entries = RawEntries::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        }
        if let Some((_, first)) = entries.get(key) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
                first: *first,
            });
        }
        entries.insert(key.to_string(), (value.to_string(), line));
    }
    Ok(entries)
}

/// Which key a core validation error most likely points at.
fn blame(err: &pursuit_core::Error) -> Option<&'static str> {
    use pursuit_core::Error as E;
    match err {
        E::InvalidTargetAngle(_) => Some("chi_star"),
        E::InvalidParameter { name, .. } => Some(match *name {
            "t_star" => "t_star",
            "t1" => "t1",
            "t2" => "t2",
            "k1" => "k1",
            "k2" => "k2",
            "k3" => "k3",
            "K" => "K",
            "K1" => "K1",
            "sigma" => "sigma",
            "boundary_layer" => "boundary_layer",
            "dt" => "dt",
            "t_max" => "t_max",
            "capture_radius" => "capture_radius",
            "evader_loss_radius" => "evader_loss_radius",
            "record_every" => "record_every",
            "nav_constant" => "pursuer.nav_constant",
            "pursuit_gain" => "pursuer.pursuit_gain",
            "bias_gain" => "pursuer.bias_gain",
            _ => return None,
        }),
        _ => None,
    }
}

/// Builds a configuration from raw entries, reporting the offending line.
pub fn from_entries(entries: &RawEntries) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    for (key, (value, line)) in entries {
        match cfg.set(key, value) {
            Ok(true) => {}
            Ok(false) => {
                return Err(ConfigError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                })
            }
            Err(reason) => {
                return Err(ConfigError::InvalidValue {
                    line: *line,
                    key: key.clone(),
                    reason,
                })
            }
        }
    }
    let mut missing: Vec<String> = REQUIRED_KEYS
        .iter()
        .filter(|k| !entries.contains_key(**k))
        .map(|k| k.to_string())
        .collect();
    if cfg.mode == CooperationMode::InformationLevel {
        missing.extend(
            INFORMATION_KEYS
                .iter()
                .filter(|k| !entries.contains_key(**k))
                .map(|k| k.to_string()),
        );
    }
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys(missing));
    }
    if let Err(source) = cfg.to_scenario() {
        let line = blame(&source).and_then(|k| entries.get(k)).map(|(_, l)| *l);
        return Err(ConfigError::Invalid { line, source });
    }
    Ok(cfg)
}

pub fn parse_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
    from_entries(&read_entries(text)?)
}

pub fn parse_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}
