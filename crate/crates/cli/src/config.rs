//! JSON configuration with flat dotted keys, e.g.
//!
//! ```json
//! { "power.p_total_dbm": 20, "surfaces.n1": 30, "surfaces.n2": 30 }
//! ```
//!
//! Keys that are absent keep their default value; an empty file yields the
//! default scenario.

use std::path::Path;

use ris_v2v::{LosHops, SystemConfig};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("configuration must be a JSON object of dotted keys")]
    NotAnObject,
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("configuration key `{key}` expects {expected}")]
    WrongType { key: String, expected: &'static str },
    #[error(transparent)]
    Invalid(#[from] ris_v2v::Error),
}

/// Every key the loader accepts.
pub const KEYS: &[&str] = &[
    "geometry.d_sR",
    "geometry.d_St",
    "geometry.d_Sr",
    "geometry.d_RS",
    "geometry.kappa",
    "geometry.los_hops",
    "geometry.d_loss_db",
    "surfaces.n1",
    "surfaces.n2",
    "surfaces.beta_r",
    "surfaces.beta_t",
    "power.p_total_dbm",
    "power.p_r",
    "power.p_t",
    "power.noise_dbm",
    "power.alpha",
    "power.p_ris_element_dbm",
    "power.p_star_element_dbm",
    "power.p_circuit_t_dbm",
    "power.p_circuit_r_dbm",
    "power.mean_snr_db",
    "fading.m1",
    "fading.m2",
    "oma_resource_fraction",
];

pub fn load_config(path: impl AsRef<Path>) -> Result<SystemConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let mut cfg = SystemConfig::default();
    if text.trim().is_empty() {
        return Ok(cfg);
    }
    let Value::Object(map) = serde_json::from_str::<Value>(text)? else {
        return Err(ConfigError::NotAnObject);
    };
    for (key, value) in &map {
        apply(&mut cfg, key, value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn number(key: &str, v: &Value) -> Result<f64, ConfigError> {
    v.as_f64().ok_or_else(|| ConfigError::WrongType {
        key: key.to_string(),
        expected: "a number",
    })
}

fn optional_number(key: &str, v: &Value) -> Result<Option<f64>, ConfigError> {
    if v.is_null() {
        return Ok(None);
    }
    number(key, v).map(Some)
}

fn count(key: &str, v: &Value) -> Result<usize, ConfigError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| ConfigError::WrongType {
            key: key.to_string(),
            expected: "a non-negative integer",
        })
}

fn apply(cfg: &mut SystemConfig, key: &str, v: &Value) -> Result<(), ConfigError> {
    let g = &mut cfg.geometry;
    let s = &mut cfg.surfaces;
    let p = &mut cfg.power;
    match key {
        "geometry.d_sR" => g.tx_to_ris_m = number(key, v)?,
        "geometry.d_St" => g.star_to_t_m = number(key, v)?,
        "geometry.d_Sr" => g.star_to_r_m = number(key, v)?,
        "geometry.d_RS" => g.ris_to_star_m = number(key, v)?,
        "geometry.kappa" => g.kappa = number(key, v)?,
        "geometry.los_hops" => {
            let wrong = || ConfigError::WrongType {
                key: key.to_string(),
                expected: "\"receiver\" or \"both\"",
            };
            let text = v.as_str().ok_or_else(wrong)?;
            g.los_hops = text.parse::<LosHops>().map_err(|_| wrong())?;
        }
        "geometry.d_loss_db" => g.d_loss_db = optional_number(key, v)?,
        "surfaces.n1" => s.n1 = count(key, v)?,
        "surfaces.n2" => s.n2 = count(key, v)?,
        "surfaces.beta_r" => s.beta_r = number(key, v)?,
        "surfaces.beta_t" => s.beta_t = number(key, v)?,
        "power.p_total_dbm" => p.p_total_dbm = number(key, v)?,
        "power.p_r" => p.p_r = number(key, v)?,
        "power.p_t" => p.p_t = number(key, v)?,
        "power.noise_dbm" => p.noise_dbm = number(key, v)?,
        "power.alpha" => p.alpha = number(key, v)?,
        "power.p_ris_element_dbm" => p.p_ris_element_dbm = number(key, v)?,
        "power.p_star_element_dbm" => p.p_star_element_dbm = number(key, v)?,
        "power.p_circuit_t_dbm" => p.p_circuit_t_dbm = number(key, v)?,
        "power.p_circuit_r_dbm" => p.p_circuit_r_dbm = number(key, v)?,
        "power.mean_snr_db" => p.mean_snr_db = optional_number(key, v)?,
        "fading.m1" => cfg.fading.m1 = number(key, v)?,
        "fading.m2" => cfg.fading.m2 = number(key, v)?,
        "oma_resource_fraction" => cfg.oma_resource_fraction = number(key, v)?,
        other => return Err(ConfigError::UnknownKey(other.to_string())),
    }
    Ok(())
}
