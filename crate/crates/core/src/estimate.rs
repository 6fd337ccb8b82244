use std::fmt;

use serde::Serialize;

/// How a coefficient value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Decomposition,
    Quadrature,
    MonteCarlo,
    RankEstimator,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Decomposition => "decomposition",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
            Method::RankEstimator => "rank_estimator",
        })
    }
}

/// A coefficient value with its provenance. Monte Carlo values carry a
/// standard error and the number of draws; deterministic methods carry neither.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientEstimate {
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
}

impl CoefficientEstimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            std_error: None,
            sample_count: None,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64, sample_count: usize) -> Self {
        Self {
            value,
            method: Method::MonteCarlo,
            std_error: Some(std_error),
            sample_count: Some(sample_count),
        }
    }

    /// Same estimate pushed through an affine map `a·x + b`.
    pub(crate) fn affine(self, a: f64, b: f64) -> Self {
        Self {
            value: a * self.value + b,
            std_error: self.std_error.map(|se| a.abs() * se),
            ..self
        }
    }
}
