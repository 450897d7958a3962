//! JSON run configuration.
//!
//! Parsing happens in two steps: serde checks shapes and types (reporting
//! the failing field path), then each command pulls out and validates the
//! fields it needs before computing anything.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::catalog::{Convexity, Inequality, LogVariant};
use crate::draws::{GFamily, WeightFamily};
use crate::equilibrium::{System, SystemError};
use crate::exprlang::FunctionSpec;
use crate::thermo::Body;
use crate::tolerances::Tolerances;

/// A validation failure tied to a config field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }

    fn missing(path: &str, command: &str) -> Self {
        ConfigError::new(path, format!("required by `{command}` but missing"))
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at `{}`: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    pub label: String,
    pub temperature: f64,
    pub capacity: String,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogConfig {
    pub weights: Option<Vec<f64>>,
    pub points: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub k: Option<f64>,
    pub c: Option<f64>,
    pub convexity: Option<Convexity>,
    pub function: Option<String>,
    pub derivative: Option<String>,
    pub variant: Option<LogVariant>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub points: Option<Vec<f64>>,
    pub weights: Option<Vec<String>>,
    pub bodies: Option<Vec<BodyConfig>>,
    pub g: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub catalog: CatalogConfig,
    pub schedule: Option<Vec<Vec<String>>>,
    pub seed: Option<u64>,
    pub count: Option<u64>,
    pub family: Option<GFamily>,
    pub weight_family: Option<WeightFamily>,
    pub format: Option<Format>,
}

fn parse_expr(path: &str, src: &str) -> Result<FunctionSpec, ConfigError> {
    FunctionSpec::parse(src).map_err(|e| ConfigError::new(path, e.to_string()))
}

fn system_error(e: SystemError, weights_field: &str, points_field: &str) -> ConfigError {
    match &e {
        SystemError::InvalidPoint { index, .. } => {
            ConfigError::new(format!("{points_field}[{index}]"), e.to_string())
        }
        SystemError::NonPositiveWeight { index, .. } | SystemError::Eval { index, .. } => {
            ConfigError::new(format!("{weights_field}[{index}]"), e.to_string())
        }
        SystemError::Empty => ConfigError::new(points_field, e.to_string()),
        SystemError::LengthMismatch { .. } => ConfigError::new(weights_field, e.to_string()),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { String::new() } else { path };
            ConfigError::new(path, e.into_inner().to_string())
        })?;
        config
            .tolerances
            .validate()
            .map_err(|(field, msg)| ConfigError::new(format!("tolerances.{field}"), msg))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    /// The system given either by `points` + `weights` or by `bodies`.
    pub fn system(&self, command: &str) -> Result<System, ConfigError> {
        let grid = self.tolerances.grid_size;
        if let Some(bodies) = &self.bodies {
            let specs = bodies
                .iter()
                .enumerate()
                .map(|(i, b)| parse_expr(&format!("bodies[{i}].capacity"), &b.capacity))
                .collect::<Result<Vec<_>, _>>()?;
            let points: Vec<f64> = bodies.iter().map(|b| b.temperature).collect();
            return System::from_parts(&points, &specs, grid).map_err(|e| match e.index() {
                Some(i) => ConfigError::new(format!("bodies[{i}]"), e.to_string()),
                None => ConfigError::new("bodies", e.to_string()),
            });
        }
        let points = self
            .points
            .as_ref()
            .ok_or_else(|| ConfigError::missing("points", command))?;
        let weights = self
            .weights
            .as_ref()
            .ok_or_else(|| ConfigError::missing("weights", command))?;
        let specs = weights
            .iter()
            .enumerate()
            .map(|(i, w)| parse_expr(&format!("weights[{i}]"), w))
            .collect::<Result<Vec<_>, _>>()?;
        System::from_parts(points, &specs, grid).map_err(|e| system_error(e, "weights", "points"))
    }

    /// `g`, with the command-line value taking precedence.
    pub fn g(&self, flag: Option<&str>, command: &str) -> Result<FunctionSpec, ConfigError> {
        match (flag, &self.g) {
            (Some(src), _) => parse_expr("--g", src),
            (None, Some(src)) => parse_expr("g", src),
            (None, None) => Err(ConfigError::missing("g", command)),
        }
    }

    /// Bodies for the thermal model. Without `bodies`, `points` and
    /// `weights` are used as temperatures and capacities with labels
    /// `b1`, `b2`, ….
    pub fn bodies(&self, command: &str) -> Result<Vec<Body>, ConfigError> {
        if let Some(bodies) = &self.bodies {
            return bodies
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let cap = parse_expr(&format!("bodies[{i}].capacity"), &b.capacity)?;
                    Ok(Body::new(b.label.clone(), b.temperature, cap))
                })
                .collect();
        }
        let points = self
            .points
            .as_ref()
            .ok_or_else(|| ConfigError::missing("bodies", command))?;
        let weights = self
            .weights
            .as_ref()
            .ok_or_else(|| ConfigError::missing("weights", command))?;
        if points.len() != weights.len() {
            return Err(ConfigError::new(
                "weights",
                format!(
                    "{} points but {} weight functions",
                    points.len(),
                    weights.len()
                ),
            ));
        }
        points
            .iter()
            .zip(weights)
            .enumerate()
            .map(|(i, (&t, w))| {
                Ok(Body::new(
                    format!("b{}", i + 1),
                    t,
                    parse_expr(&format!("weights[{i}]"), w)?,
                ))
            })
            .collect()
    }

    /// The catalog entry `name` built from the `catalog` section. Points
    /// fall back to the top-level `points`; weights default to all ones.
    pub fn inequality(&self, name: &str) -> Result<Inequality, ConfigError> {
        let cat = &self.catalog;
        let command = format!("catalog {name}");
        let points = cat
            .points
            .clone()
            .or_else(|| self.points.clone())
            .ok_or_else(|| ConfigError::missing("catalog.points", &command))?;
        let weights = cat
            .weights
            .clone()
            .unwrap_or_else(|| vec![1.0; points.len()]);
        Ok(match name {
            "amgm" => Inequality::AmGmHm { weights, points },
            "power" => Inequality::PowerMean {
                weights,
                points,
                p: cat.p.unwrap_or(1.0),
                q: cat.q.unwrap_or(2.0),
            },
            "jensen" => {
                let function = cat
                    .function
                    .as_deref()
                    .ok_or_else(|| ConfigError::missing("catalog.function", &command))?;
                let derivative = cat
                    .derivative
                    .as_deref()
                    .ok_or_else(|| ConfigError::missing("catalog.derivative", &command))?;
                Inequality::Jensen {
                    function: parse_expr("catalog.function", function)?,
                    derivative: parse_expr("catalog.derivative", derivative)?,
                    weights,
                    points,
                    convexity: cat
                        .convexity
                        .ok_or_else(|| ConfigError::missing("catalog.convexity", &command))?,
                }
            }
            "shifted" => Inequality::ShiftedPowerGm {
                weights,
                points,
                k: cat.k.unwrap_or(1.0),
                c: cat.c.unwrap_or(1.0),
            },
            "logx" => Inequality::LogOverX {
                weights,
                points,
                variant: cat.variant.unwrap_or(LogVariant::GmSide),
            },
            other => {
                return Err(ConfigError::new(
                    "",
                    format!("unknown catalog entry {other:?}; expected one of amgm, power, jensen, shifted, logx"),
                ))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_path_on_type_error() {
        let e = RunConfig::from_json(r#"{"points": [1, "a"]}"#).unwrap_err();
        assert_eq!(e.path, "points[1]");
    }

    #[test]
    fn unknown_field_rejected() {
        let e = RunConfig::from_json(r#"{"pionts": [1]}"#).unwrap_err();
        assert!(e.message.contains("pionts"), "{e}");
    }

    #[test]
    fn tolerance_validation() {
        let e = RunConfig::from_json(r#"{"tolerances": {"root_tol": -1}}"#).unwrap_err();
        assert_eq!(e.path, "tolerances.root_tol");
    }

    #[test]
    fn missing_points_named() {
        let c = RunConfig::from_json(r#"{"weights": ["1"]}"#).unwrap();
        assert_eq!(c.system("solve").unwrap_err().path, "points");
    }

    #[test]
    fn bad_weight_expression_named() {
        let c = RunConfig::from_json(r#"{"points": [1, 2], "weights": ["1", "sin"]}"#).unwrap();
        assert_eq!(c.system("solve").unwrap_err().path, "weights[1]");
    }

    #[test]
    fn nonpositive_weight_named() {
        let c = RunConfig::from_json(r#"{"points": [1, 3], "weights": ["x-2", "1"]}"#).unwrap();
        assert_eq!(c.system("solve").unwrap_err().path, "weights[0]");
    }

    #[test]
    fn flag_g_overrides_config() {
        let c = RunConfig::from_json(r#"{"g": "x"}"#).unwrap();
        assert_eq!(c.g(Some("1/x"), "verify").unwrap().source(), "1/x");
        assert_eq!(c.g(None, "verify").unwrap().source(), "x");
    }
}
