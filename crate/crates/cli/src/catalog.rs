//! Scenario files shipped with the binary.

use crate::scenario::{parse_str, ConfigError, ScenarioConfig};

pub const CATALOG: &[(&str, &str)] = &[
    ("fig3_chi120", include_str!("../scenarios/fig3_chi120.scn")),
    ("fig3_chi180", include_str!("../scenarios/fig3_chi180.scn")),
    ("fig3_chi228", include_str!("../scenarios/fig3_chi228.scn")),
    ("fig4_ppg", include_str!("../scenarios/fig4_ppg.scn")),
    ("fig4_dpg", include_str!("../scenarios/fig4_dpg.scn")),
    ("fig5_d400", include_str!("../scenarios/fig5_d400.scn")),
    ("fig5_d1500", include_str!("../scenarios/fig5_d1500.scn")),
    ("fig5_d2000", include_str!("../scenarios/fig5_d2000.scn")),
    ("fig6_los_m5", include_str!("../scenarios/fig6_los_m5.scn")),
    ("fig6_los0", include_str!("../scenarios/fig6_los0.scn")),
    ("fig6_los2", include_str!("../scenarios/fig6_los2.scn")),
    (
        "reduced_authority",
        include_str!("../scenarios/reduced_authority.scn"),
    ),
    ("info_chi150", include_str!("../scenarios/info_chi150.scn")),
    ("info_chi180", include_str!("../scenarios/info_chi180.scn")),
    ("info_chi200", include_str!("../scenarios/info_chi200.scn")),
    ("info_t2_6", include_str!("../scenarios/info_t2_6.scn")),
    ("info_t2_8", include_str!("../scenarios/info_t2_8.scn")),
    ("info_bpng", include_str!("../scenarios/info_bpng.scn")),
    ("info_ppg", include_str!("../scenarios/info_ppg.scn")),
];

/// Raw text of a shipped scenario.
pub fn source(name: &str) -> Option<&'static str> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn load(name: &str) -> Option<Result<ScenarioConfig, ConfigError>> {
    source(name).map(parse_str)
}

/// First comment line of a shipped scenario.
pub fn describe(name: &str) -> Option<&'static str> {
    source(name)?.lines().find_map(|l| l.strip_prefix("# "))
}
