//! The built-in scenario catalog, shipped as TOML files in `scenarios/`.

use std::path::PathBuf;

use crate::config::ScenarioConfig;
use crate::error::ConfigError;
use crate::scenario::Scenario;

pub const ENTRIES: [(&str, &str); 10] = [
    ("identity_wavy_torus", include_str!("../scenarios/identity_wavy_torus.toml")),
    ("rotation_square", include_str!("../scenarios/rotation_square.toml")),
    ("shear_cylinder", include_str!("../scenarios/shear_cylinder.toml")),
    ("stretch_linear", include_str!("../scenarios/stretch_linear.toml")),
    ("sinusoidal_torus_2d", include_str!("../scenarios/sinusoidal_torus_2d.toml")),
    ("sinusoidal_torus_3d", include_str!("../scenarios/sinusoidal_torus_3d.toml")),
    ("log_polar", include_str!("../scenarios/log_polar.toml")),
    ("radial_power_annulus", include_str!("../scenarios/radial_power_annulus.toml")),
    ("bump_torus", include_str!("../scenarios/bump_torus.toml")),
    ("near_degenerate", include_str!("../scenarios/near_degenerate.toml")),
];

/// Directory holding the catalog files in the source tree.
pub fn directory() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

pub fn configs() -> Result<Vec<ScenarioConfig>, ConfigError> {
    ENTRIES.iter().map(|(_, text)| ScenarioConfig::from_toml(text)).collect()
}

pub fn scenarios() -> Result<Vec<Scenario>, ConfigError> {
    configs()?.into_iter().map(Scenario::new).collect()
}

pub fn get(name: &str) -> Result<Scenario, ConfigError> {
    let (_, text) = ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ConfigError::invalid("scenario", format!("no catalog entry {name:?}")))?;
    Scenario::new(ScenarioConfig::from_toml(text)?)
}
