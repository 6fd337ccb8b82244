//! Parametric copula models.
//!
//! A [`CopulaModel`] is a closed set of families rather than a trait object:
//! margin extraction has to map a family onto another family (a proper FGM
//! margin is a product copula, a Clayton margin is Clayton again), which is
//! awkward to express through dynamic dispatch.

mod sample;
mod spec;

pub use sample::survival_reflect;
pub use spec::CopulaFamily;

use serde::Serialize;

use crate::error::{Error, Result};

/// Clayton parameters at or below this are treated as the product copula.
pub const CLAYTON_PRODUCT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CopulaModel {
    /// The one-dimensional uniform law; only produced as a margin.
    Uniform,
    Product { d: usize },
    Comonotone { d: usize },
    Fgm { d: usize, lambda: f64 },
    Clayton { d: usize, theta: f64 },
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(d));
    }
    Ok(())
}

impl CopulaModel {
    pub fn product(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self::Product { d })
    }

    pub fn comonotone(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self::Comonotone { d })
    }

    pub fn fgm(d: usize, lambda: f64) -> Result<Self> {
        check_dim(d)?;
        if !(lambda.is_finite() && lambda.abs() <= 1.0) {
            return Err(Error::Parameter(format!(
                "FGM parameter must lie in [-1, 1], got {lambda}"
            )));
        }
        Ok(Self::Fgm { d, lambda })
    }

    pub fn clayton(d: usize, theta: f64) -> Result<Self> {
        check_dim(d)?;
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::Parameter(format!(
                "Clayton parameter must be finite and nonnegative, got {theta}"
            )));
        }
        Ok(Self::Clayton { d, theta })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Uniform => 1,
            Self::Product { d }
            | Self::Comonotone { d }
            | Self::Fgm { d, .. }
            | Self::Clayton { d, .. } => d,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Product { .. } => "product",
            Self::Comonotone { .. } => "comonotone",
            Self::Fgm { .. } => "fgm",
            Self::Clayton { .. } => "clayton",
        }
    }

    /// The family parameter, if the family has one.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Self::Fgm { lambda, .. } => Some(lambda),
            Self::Clayton { theta, .. } => Some(theta),
            _ => None,
        }
    }

    /// True for Clayton parameters small enough to be handled as independence.
    pub(crate) fn is_effectively_product(&self) -> bool {
        match *self {
            Self::Product { .. } | Self::Uniform => true,
            Self::Clayton { theta, .. } => theta <= CLAYTON_PRODUCT_THRESHOLD,
            Self::Fgm { lambda, .. } => lambda == 0.0,
            Self::Comonotone { .. } => false,
        }
    }

    /// Distribution function at `u ∈ [0,1]^d`.
    pub fn cdf(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.len(),
            });
        }
        if let Some(bad) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::OutsideUnitCube(format!("coordinate {bad} in {u:?}")));
        }
        Ok(self.cdf_unchecked(u))
    }

    /// Distribution function without argument validation; `u` must lie in the unit cube.
    pub(crate) fn cdf_unchecked(&self, u: &[f64]) -> f64 {
        match *self {
            Self::Uniform => u[0],
            Self::Product { .. } => u.iter().product(),
            Self::Comonotone { .. } => u.iter().copied().fold(1.0, f64::min),
            Self::Fgm { lambda, .. } => {
                let prod: f64 = u.iter().product();
                let pert: f64 = u.iter().map(|x| 1.0 - x).product();
                prod * (1.0 + lambda * pert)
            }
            Self::Clayton { theta, .. } => clayton_cdf(theta, u),
        }
    }

    /// CDF of the full model at `x` placed on the coordinates `subset`, with
    /// every other coordinate set to 1.
    pub fn cdf_on_subset(&self, subset: &[usize], x: &[f64]) -> Result<f64> {
        if subset.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: subset.len(),
                actual: x.len(),
            });
        }
        let mut u = vec![1.0; self.dim()];
        for (&i, &xi) in subset.iter().zip(x) {
            if i >= self.dim() {
                return Err(Error::Parameter(format!("index {i} out of range")));
            }
            u[i] = xi;
        }
        self.cdf(&u)
    }

    /// The margin on the coordinates in `subset` (other coordinates set to 1).
    pub fn margin(&self, subset: &[usize]) -> Result<Self> {
        let k = subset.len();
        if k == 0 {
            return Err(Error::Parameter("margin of an empty index set".into()));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::Parameter(format!("repeated index in {subset:?}")));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::Parameter(format!(
                "index {bad} out of range for dimension {}",
                self.dim()
            )));
        }
        if k == 1 {
            return Ok(Self::Uniform);
        }
        Ok(match *self {
            Self::Uniform => unreachable!("one-dimensional model has no margin of size >= 2"),
            Self::Product { .. } => Self::Product { d: k },
            Self::Comonotone { .. } => Self::Comonotone { d: k },
            Self::Fgm { d, lambda } if k == d => Self::Fgm { d, lambda },
            Self::Fgm { .. } => Self::Product { d: k },
            Self::Clayton { theta, .. } => Self::Clayton { d: k, theta },
        })
    }
}

fn clayton_cdf(theta: f64, u: &[f64]) -> f64 {
    if u.contains(&0.0) {
        return 0.0;
    }
    if theta <= CLAYTON_PRODUCT_THRESHOLD {
        return u.iter().product();
    }
    // sum of (u^-θ - 1) keeps precision near the upper corner
    let excess: f64 = u.iter().map(|&x| (-theta * x.ln()).exp_m1()).sum();
    let radial = (1.0 + excess).max(0.0);
    if radial == 0.0 {
        return 0.0;
    }
    (-radial.ln() / theta).exp()
}
