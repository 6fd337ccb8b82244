//! Rank-based estimators of directional coefficients.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{PseudoObservations, RankMatrix};
use crate::direction::{normalization_constant_f64, subset_weight_f64, Direction, Sign};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// ρ̂^α computed from one rank matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorResult {
    pub alpha: Direction,
    pub value: f64,
    pub n: usize,
    pub d: usize,
    pub tie_count: usize,
}

fn check(ranks: &RankMatrix, alpha: &Direction) -> Result<()> {
    if alpha.dim() != ranks.dim() {
        return Err(Error::DimensionMismatch {
            expected: ranks.dim(),
            actual: alpha.dim(),
        });
    }
    if ranks.n() < 2 {
        return Err(Error::Data(format!(
            "estimator needs at least 2 observations, got {}",
            ranks.n()
        )));
    }
    Ok(())
}

fn result(ranks: &RankMatrix, alpha: &Direction, value: f64) -> EstimatorResult {
    EstimatorResult {
        alpha: alpha.clone(),
        value,
        n: ranks.n(),
        d: ranks.dim(),
        tie_count: ranks.tie_count(),
    }
}

fn directional_rank(ranks: &RankMatrix, alpha: &Direction, row: usize, col: usize) -> usize {
    let r = ranks.rank(row, col);
    match alpha.sign(col) {
        Sign::Plus => r,
        Sign::Minus => ranks.n() + 1 - r,
    }
}

fn checked_pow(base: i128, exp: usize) -> Option<i128> {
    (0..exp).try_fold(1i128, |acc, _| acc.checked_mul(base))
}

/// Numerator and denominator of ρ̂ scaled by n·2^d, as exact integers:
/// (2^d ∑_j ∏_i R^α_ij − n(n+1)^d) / (2^d ∑_j j^d − n(n+1)^d).
fn integer_parts(ranks: &RankMatrix, alpha: &Direction) -> Option<(i128, i128)> {
    let n = ranks.n();
    let d = ranks.dim();
    let two_d = checked_pow(2, d)?;
    let base = (n as i128).checked_mul(checked_pow(n as i128 + 1, d)?)?;
    let mut s = 0i128;
    for j in 0..n {
        let mut prod = 1i128;
        for i in 0..d {
            prod = prod.checked_mul(directional_rank(ranks, alpha, j, i) as i128)?;
        }
        s = s.checked_add(prod)?;
    }
    let mut p = 0i128;
    for j in 1..=n {
        p = p.checked_add(checked_pow(j as i128, d)?)?;
    }
    let num = two_d.checked_mul(s)?.checked_sub(base)?;
    let den = two_d.checked_mul(p)?.checked_sub(base)?;
    Some((num, den))
}

/// The same ratio with every rank divided by n + 1, in floating point.
fn float_value(ranks: &RankMatrix, alpha: &Direction) -> f64 {
    let n = ranks.n();
    let d = ranks.dim() as i32;
    let scale = (n + 1) as f64;
    let two_d = 2f64.powi(d);
    let s: NeumaierSum = (0..n)
        .map(|j| {
            (0..ranks.dim())
                .map(|i| directional_rank(ranks, alpha, j, i) as f64 / scale)
                .product::<f64>()
        })
        .collect();
    let p: NeumaierSum = (1..=n).map(|j| (j as f64 / scale).powi(d)).collect();
    let nf = n as f64;
    (two_d * s.value() / nf - 1.0) / (two_d * p.value() / nf - 1.0)
}

/// ρ̂^α as an exact rational. Fails when the integer sums overflow i128.
pub fn rho_hat_ratio(ranks: &RankMatrix, alpha: &Direction) -> Result<Ratio<i128>> {
    check(ranks, alpha)?;
    let (num, den) =
        integer_parts(ranks, alpha).ok_or(Error::Overflow("exact rank arithmetic"))?;
    Ok(Ratio::new(num, den))
}

/// ρ̂^α = [(1/n)∑_j ∏_i R^α_ij − ((n+1)/2)^d] / [(1/n)∑_j j^d − ((n+1)/2)^d].
///
/// Uses exact integer arithmetic whenever it fits, so perfectly aligned
/// directional ranks give exactly 1.
pub fn rho_hat_directional(ranks: &RankMatrix, alpha: &Direction) -> Result<EstimatorResult> {
    check(ranks, alpha)?;
    let value = match integer_parts(ranks, alpha) {
        Some((num, den)) => num as f64 / den as f64,
        None => float_value(ranks, alpha),
    };
    Ok(result(ranks, alpha, value))
}

/// ρ̂^α for every one of the 2^d directions, in mask order.
pub fn rho_hat_all_directions(ranks: &RankMatrix, alphas: &[Direction]) -> Result<Vec<EstimatorResult>> {
    alphas
        .par_iter()
        .map(|alpha| rho_hat_directional(ranks, alpha))
        .collect()
}

/// ρ̂⁻_K = c_k ((1/n) ∑_j ∏_{i∈K} (1 − U_ij) − 2^{−k}), k = |K| ≥ 2.
pub fn rho_hat_minus_subset(pseudo: &PseudoObservations, subset: &[usize]) -> Result<f64> {
    let k = subset.len();
    if k < 2 {
        return Err(Error::Parameter(format!(
            "subset coefficient needs at least 2 indices, got {k}"
        )));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= pseudo.dim()) {
        return Err(Error::Parameter(format!(
            "index {bad} out of range for dimension {}",
            pseudo.dim()
        )));
    }
    let n = pseudo.n();
    let m: NeumaierSum = (0..n)
        .map(|j| subset.iter().map(|&i| 1.0 - pseudo.get(j, i)).product::<f64>())
        .collect();
    let c = normalization_constant_f64(k)?;
    Ok(c * (m.value() / n as f64 - 2f64.powi(-(k as i32))))
}

/// (n+1)^d / [(1/n)∑_j j^d − ((n+1)/2)^d], the factor in front of the decomposition.
pub fn decomposition_prefactor(n: usize, d: usize) -> f64 {
    let scale = (n + 1) as f64;
    let p: NeumaierSum = (1..=n).map(|j| (j as f64 / scale).powi(d as i32)).collect();
    1.0 / (p.value() / n as f64 - 2f64.powi(-(d as i32)))
}

/// Exact form of [`decomposition_prefactor`].
pub fn decomposition_prefactor_exact(n: usize, d: usize) -> Result<Ratio<i128>> {
    let overflow = || Error::Overflow("exact prefactor");
    let n1 = n as i128 + 1;
    let mut p = 0i128;
    for j in 1..=n {
        p = p
            .checked_add(checked_pow(j as i128, d).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    let top = checked_pow(n1, d).ok_or_else(overflow)?;
    // D = P/n − (n+1)^d / 2^d
    let two_d = checked_pow(2, d).ok_or_else(overflow)?;
    let den = Ratio::new(p, n as i128) - Ratio::new(top, two_d);
    Ok(Ratio::from_integer(top) / den)
}

/// ρ̂^α assembled from subset coefficients:
/// prefactor · ∑_{S⊆J} (−1)^{|S|} w(|I|+|S|) ρ̂⁻_{I∪S}, w(k) = 1/c_k.
/// Sets with fewer than two indices contribute nothing and are skipped.
pub fn rho_hat_decomposed(ranks: &RankMatrix, alpha: &Direction) -> Result<EstimatorResult> {
    check(ranks, alpha)?;
    let pseudo = ranks.pseudo_observations();
    let mut acc = NeumaierSum::default();
    for (set, s) in alpha.partition().expansion_sets() {
        if set.len() < 2 {
            continue;
        }
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * subset_weight_f64(set.len()) * rho_hat_minus_subset(&pseudo, &set)?);
    }
    let value = decomposition_prefactor(ranks.n(), ranks.dim()) * acc.value();
    Ok(result(ranks, alpha, value))
}

/// Mean of the pairwise Spearman estimates over all column pairs.
fn mean_pairwise(ranks: &RankMatrix) -> Result<f64> {
    let d = ranks.dim();
    let plus = Direction::all_plus(2)?;
    let mut acc = NeumaierSum::default();
    let mut pairs = 0usize;
    for a in 0..d {
        for b in a + 1..d {
            let pair = ranks.select_columns(&[a, b])?;
            acc.add(rho_hat_directional(&pair, &plus)?.value);
            pairs += 1;
        }
    }
    Ok(acc.value() / pairs as f64)
}

/// ρ̂₃* = (ρ̂₁₂ + ρ̂₁₃ + ρ̂₂₃) / 3 for trivariate data.
pub fn rho_hat_star3(ranks: &RankMatrix) -> Result<f64> {
    if ranks.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: ranks.dim(),
        });
    }
    if ranks.n() < 2 {
        return Err(Error::Data("estimator needs at least 2 observations".into()));
    }
    mean_pairwise(ranks)
}
