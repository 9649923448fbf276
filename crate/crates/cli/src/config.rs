//! Flag/file configuration merging and unit parsing.
//!
//! Every physics flag can also come from a JSON config file passed with
//! `--config`; explicit flags win over file values, file values win over
//! built-in defaults. Lengths default to kilometers and times to
//! milliseconds, with explicit `m`/`km` and `us`/`ms`/`s` suffixes accepted.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use repeater_core::{ChannelModel, MeasureKind, RateVariant};
use serde::Deserialize;

/// A JSON scalar that is either a number (in the flag's default unit) or a
/// suffixed string like `"1000km"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrStr {
    Num(f64),
    Str(String),
}

/// Optional defaults loaded from `--config`. Field names match the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "L")]
    pub length: Option<NumOrStr>,
    pub pm: Option<f64>,
    pub tauc: Option<NumOrStr>,
    pub c: Option<f64>,
    pub inv_alpha_km: Option<f64>,
    pub ps_prefactor: Option<f64>,
    pub ps_exponent_per_km: Option<f64>,
    pub ps: Option<f64>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    #[serde(rename = "N")]
    pub memories: Option<u32>,
    pub variant: Option<String>,
    pub measure: Option<String>,
    pub seed: Option<u64>,
    pub cycles: Option<u64>,
    pub warmup: Option<u64>,
    pub n_max: Option<u32>,
    pub track_ages: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("cannot read config file {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("cannot parse config file {}", p.display()))
            }
        }
    }
}

fn parse_scalar(s: &str) -> Result<(f64, String)> {
    let trimmed = s.trim();
    let split = trimmed
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .last()
        .unwrap_or(trimmed.len());
    let (num, suffix) = trimmed.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .with_context(|| format!("cannot parse number in {trimmed:?}"))?;
    Ok((value, suffix.to_ascii_lowercase()))
}

/// Parses a length into meters. Bare numbers are kilometers.
pub fn parse_length(s: &str) -> Result<f64> {
    let (value, suffix) = parse_scalar(s)?;
    let meters = match suffix.as_str() {
        "" | "km" => value * 1.0e3,
        "m" => value,
        other => bail!("unknown length unit {other:?} (use m or km)"),
    };
    if !(meters.is_finite() && meters > 0.0) {
        bail!("length must be positive, got {s:?}");
    }
    Ok(meters)
}

/// Parses a duration into seconds. Bare numbers are milliseconds.
pub fn parse_time(s: &str) -> Result<f64> {
    let (value, suffix) = parse_scalar(s)?;
    let seconds = match suffix.as_str() {
        "" | "ms" => value * 1.0e-3,
        "us" => value * 1.0e-6,
        "s" => value,
        other => bail!("unknown time unit {other:?} (use us, ms or s)"),
    };
    if !(seconds.is_finite() && seconds > 0.0) {
        bail!("duration must be positive, got {s:?}");
    }
    Ok(seconds)
}

pub fn parse_num_or_str(v: &NumOrStr, parse: fn(&str) -> Result<f64>, unit: f64) -> Result<f64> {
    match v {
        NumOrStr::Num(x) => Ok(x * unit),
        NumOrStr::Str(s) => parse(s),
    }
}

pub fn parse_variant(s: &str) -> Result<RateVariant> {
    Ok(match s {
        "ideal" => RateVariant::Ideal,
        "nopur" => RateVariant::NoPurification,
        "pur" => RateVariant::WithPurification,
        "hashing" => RateVariant::OneWayHashing,
        other => bail!("unknown variant {other:?} (ideal, nopur, pur, hashing)"),
    })
}

pub fn parse_measure(s: &str) -> Result<MeasureKind> {
    Ok(match s {
        "ec" => MeasureKind::EntanglementCost,
        "ed" => MeasureKind::DistillableEntanglement,
        other => bail!("unknown measure {other:?} (ec, ed)"),
    })
}

/// Channel model assembled from flags, file values and defaults.
#[allow(clippy::too_many_arguments)]
pub fn build_channel(
    file: &FileConfig,
    c: Option<f64>,
    inv_alpha_km: Option<f64>,
    ps_prefactor: Option<f64>,
    ps_exponent_per_km: Option<f64>,
    ps: Option<f64>,
) -> ChannelModel {
    let defaults = ChannelModel::default();
    ChannelModel {
        speed: c.or(file.c).unwrap_or(defaults.speed),
        alpha: match inv_alpha_km.or(file.inv_alpha_km) {
            Some(km) => 1.0 / (km * 1.0e3),
            None => defaults.alpha,
        },
        ps_prefactor: ps_prefactor
            .or(file.ps_prefactor)
            .unwrap_or(defaults.ps_prefactor),
        ps_exponent: match ps_exponent_per_km.or(file.ps_exponent_per_km) {
            Some(per_km) => per_km / 1.0e3,
            None => defaults.ps_exponent,
        },
        ps_override: ps.or(file.ps),
    }
}
