//! The empirical copula process built from rank indicators, and the
//! estimator obtained by integrating it.

use crate::data::RankMatrix;
use crate::direction::{Direction, Sign};
use crate::error::{Error, Result};
use crate::estimator::decomposition_prefactor;

/// Largest dimension accepted by [`estimator_via_process_integral`].
pub const MAX_PROCESS_DIM: usize = 4;

/// Grid cells beyond this count are refused.
pub const MAX_GRID_CELLS: usize = 1 << 27;

/// A coordinate subset β and the signs applied on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalProcessSpec {
    beta: Vec<usize>,
    signs: Vec<Sign>,
}

impl EmpiricalProcessSpec {
    pub fn new(beta: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Parameter("process index set must be nonempty".into()));
        }
        if beta.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                expected: beta.len(),
                actual: signs.len(),
            });
        }
        let mut sorted = beta.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("process index set has duplicates".into()));
        }
        Ok(Self { beta, signs })
    }

    /// β = {0, …, d−1} with the signs of `alpha`.
    pub fn full(alpha: &Direction) -> Self {
        Self {
            beta: (0..alpha.dim()).collect(),
            signs: alpha.signs().to_vec(),
        }
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
}

fn check_spec(ranks: &RankMatrix, spec: &EmpiricalProcessSpec) -> Result<()> {
    if let Some(&bad) = spec.beta.iter().find(|&&i| i >= ranks.dim()) {
        return Err(Error::Parameter(format!(
            "process index {bad} out of range for dimension {}",
            ranks.dim()
        )));
    }
    Ok(())
}

/// C_{β,α,n}(u) = (1/(n+1)) ∑_j ∏_{i∈β} 1{α_i R_ij/(n+1) ≤ α_i u_i}.
pub fn empirical_process(ranks: &RankMatrix, spec: &EmpiricalProcessSpec, u: &[f64]) -> Result<f64> {
    check_spec(ranks, spec)?;
    if u.len() != spec.beta.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.beta.len(),
            actual: u.len(),
        });
    }
    if let Some(x) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::OutsideUnitCube(format!("coordinate {x}")));
    }
    let n1 = (ranks.n() + 1) as f64;
    let hits = (0..ranks.n())
        .filter(|&j| {
            spec.beta.iter().zip(&spec.signs).zip(u).all(|((&i, &s), &ui)| {
                let a = s.as_f64();
                a * (ranks.rank(j, i) as f64 / n1) <= a * ui
            })
        })
        .count();
    Ok(hits as f64 / n1)
}

/// ∫_{[0,1]^|β|} C_{β,α,n}(u) du.
///
/// The process is constant on each cell of the grid with spacing 1/(n+1), so
/// the midpoint rule on that grid is exact. Cell values come from directional
/// prefix sums of a count tensor: along a `+` axis cell m counts points with
/// R ≤ m, along a `−` axis those with R ≥ m + 1.
pub fn integrate_process(ranks: &RankMatrix, spec: &EmpiricalProcessSpec) -> Result<f64> {
    check_spec(ranks, spec)?;
    let k = spec.beta.len();
    let side = ranks.n() + 1;
    let cells = (0..k)
        .try_fold(1usize, |acc, _| acc.checked_mul(side))
        .filter(|&c| c <= MAX_GRID_CELLS)
        .ok_or_else(|| {
            Error::Parameter(format!(
                "integration grid of {side}^{k} cells is too large"
            ))
        })?;
    let mut tensor = vec![0u64; cells];
    for j in 0..ranks.n() {
        let idx = spec
            .beta
            .iter()
            .fold(0usize, |acc, &i| acc * side + ranks.rank(j, i));
        tensor[idx] += 1;
    }
    // axis a has stride side^(k−1−a)
    for (a, sign) in spec.signs.iter().enumerate() {
        let stride = side.pow((k - 1 - a) as u32);
        let block = stride * side;
        for start in (0..cells).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                match sign {
                    Sign::Plus => {
                        for m in 1..side {
                            tensor[base + m * stride] += tensor[base + (m - 1) * stride];
                        }
                    }
                    Sign::Minus => {
                        // value at m becomes the count over R ≥ m + 1
                        let mut acc = 0u64;
                        for m in (0..side).rev() {
                            let here = tensor[base + m * stride];
                            tensor[base + m * stride] = acc;
                            acc += here;
                        }
                    }
                }
            }
        }
    }
    let total: u128 = tensor.iter().map(|&c| c as u128).sum();
    Ok(total as f64 / (side as f64).powi(k as i32 + 1))
}

/// ρ̂^α recovered from the integral of the empirical process over β = all
/// coordinates.
///
/// The process is integrated with signs −α: under the rank convention used
/// here that integral equals (1/(n+1)^{d+1}) ∑_j ∏_i R^α_ij. The affine map is
/// ρ̂ = [((n+1)^{d+1}/n) ∫ − ((n+1)/2)^d] / D with D = (1/n)∑_j j^d − ((n+1)/2)^d.
pub fn estimator_via_process_integral(ranks: &RankMatrix, alpha: &Direction) -> Result<f64> {
    let d = ranks.dim();
    if alpha.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: alpha.dim(),
        });
    }
    if d > MAX_PROCESS_DIM {
        return Err(Error::TooManyDimensions {
            what: "process integration",
            d,
            limit: MAX_PROCESS_DIM,
        });
    }
    if ranks.n() < 2 {
        return Err(Error::Data("estimator needs at least 2 observations".into()));
    }
    let integral = integrate_process(ranks, &EmpiricalProcessSpec::full(&-alpha))?;
    let n = ranks.n() as f64;
    let n1 = n + 1.0;
    // everything divided by (n+1)^d to keep magnitudes near 1
    let mean_product = n1 * integral / n;
    Ok((mean_product - 0.5f64.powi(d as i32)) * decomposition_prefactor(ranks.n(), d))
}
