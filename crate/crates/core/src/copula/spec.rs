//! Text form of copula models: `clayton:theta=1.0:d=3`, `fgm:lambda=0.6:d=3`,
//! `product:d=4`, `comonotone:d=4`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::CopulaModel;
use crate::error::{Error, Result};

/// A copula family without its parameter value or dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CopulaFamily {
    Product,
    Comonotone,
    Fgm,
    Clayton,
}

impl CopulaFamily {
    pub fn has_parameter(self) -> bool {
        matches!(self, Self::Fgm | Self::Clayton)
    }

    pub fn parameter_name(self) -> Option<&'static str> {
        match self {
            Self::Fgm => Some("lambda"),
            Self::Clayton => Some("theta"),
            _ => None,
        }
    }

    pub fn build(self, d: usize, parameter: Option<f64>) -> Result<CopulaModel> {
        let need = |p: Option<f64>| {
            p.ok_or_else(|| Error::Parameter(format!("family {self} needs a parameter")))
        };
        match self {
            Self::Product => CopulaModel::product(d),
            Self::Comonotone => CopulaModel::comonotone(d),
            Self::Fgm => CopulaModel::fgm(d, need(parameter)?),
            Self::Clayton => CopulaModel::clayton(d, need(parameter)?),
        }
    }
}

impl fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Product => "product",
            Self::Comonotone => "comonotone",
            Self::Fgm => "fgm",
            Self::Clayton => "clayton",
        })
    }
}

impl FromStr for CopulaFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "product" | "independence" | "pi" => Ok(Self::Product),
            "comonotone" | "m" | "min" => Ok(Self::Comonotone),
            "fgm" => Ok(Self::Fgm),
            "clayton" => Ok(Self::Clayton),
            other => Err(Error::FamilySpec {
                spec: s.to_string(),
                reason: format!("unknown family `{other}`"),
            }),
        }
    }
}

impl FromStr for CopulaModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::FamilySpec {
            spec: s.to_string(),
            reason,
        };
        let mut parts = s.split(':');
        let family: CopulaFamily = parts.next().unwrap_or_default().parse()?;
        let mut d = None;
        let mut parameter = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            let key = key.trim();
            let value = value.trim();
            if key == "d" || key == "dim" {
                d = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| bad(format!("dimension `{value}` is not an integer")))?,
                );
            } else if Some(key) == family.parameter_name() {
                parameter = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| bad(format!("parameter `{value}` is not a number")))?,
                );
            } else {
                return Err(bad(format!("unknown key `{key}` for family {family}")));
            }
        }
        let d = d.ok_or_else(|| bad("missing d=<dimension>".into()))?;
        if family.has_parameter() && parameter.is_none() {
            return Err(bad(format!(
                "missing {}=<value>",
                family.parameter_name().unwrap_or("parameter")
            )));
        }
        family.build(d, parameter)
    }
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Uniform => f.write_str("uniform:d=1"),
            Self::Product { d } => write!(f, "product:d={d}"),
            Self::Comonotone { d } => write!(f, "comonotone:d={d}"),
            Self::Fgm { d, lambda } => write!(f, "fgm:lambda={lambda}:d={d}"),
            Self::Clayton { d, theta } => write!(f, "clayton:theta={theta}:d={d}"),
        }
    }
}
