//! Population directional ρ-coefficients of parametric copulas.
//!
//! For a direction α with I = {i : α_i = −1} and J = {i : α_i = +1},
//!
//! ```text
//! ρ^α(C) = c_d · ( E[ ∏_{i∈I} (1 − U_i) · ∏_{i∈J} U_i ] − 2^{−d} ),   U ~ C
//! c_d    = 2^d (d+1) / (2^d − (d+1))
//! ```
//!
//! The expectation is computed either by Monte Carlo over copula draws or by
//! expanding `∏_{J} U_i = ∏_{J} (1 − (1 − U_i))`, which turns it into a signed
//! sum of integrals of the copula margins `∫ C(x_{I∪S}, 1)`, S ⊆ J. The same
//! expansion, regrouped by margin, expresses every ρ^α through the lower-orthant
//! coefficients ρ⁻ of the margins ([`rho_directional_decomposition`]).

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::copula::CopulaModel;
use crate::direction::{
    all_directions, normalization_constant, normalization_constant_f64, subset_weight_f64,
    Direction, Sign, MAX_EXACT_DIM,
};
use crate::error::{Error, Result};
use crate::estimate::{CoefficientEstimate, Method};
use crate::quadrature::{TensorGaussLegendre, MIN_NODES};
use crate::seed;
use crate::sum::NeumaierSum;

/// Smallest accepted Monte Carlo sample count.
pub const MIN_MC_SAMPLES: usize = 10_000;
const MC_CHUNK: usize = 1 << 14;
/// Largest integrand dimension handled by quadrature under [`IntegratorMethod::Auto`].
pub const AUTO_QUADRATURE_MAX_DIM: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorMethod {
    /// Quadrature up to dimension 5, Monte Carlo above.
    Auto,
    GaussLegendre,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub method: IntegratorMethod,
    /// Fixed node count; `None` uses 32 nodes up to dimension 4 and 16 above.
    pub nodes_per_dim: Option<usize>,
    pub sample_count: usize,
    pub seed: u64,
    /// When set, an integral whose estimated error exceeds this fails with
    /// [`Error::Integration`].
    pub target_error: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: IntegratorMethod::Auto,
            nodes_per_dim: None,
            sample_count: 1_000_000,
            seed: 0,
            target_error: None,
        }
    }
}

impl IntegratorConfig {
    pub fn quadrature(nodes_per_dim: usize) -> Result<Self> {
        if nodes_per_dim < MIN_NODES {
            return Err(Error::Parameter(format!(
                "quadrature needs at least {MIN_NODES} nodes per dimension"
            )));
        }
        Ok(Self {
            method: IntegratorMethod::GaussLegendre,
            nodes_per_dim: Some(nodes_per_dim),
            ..Self::default()
        })
    }

    pub fn monte_carlo(sample_count: usize, seed: u64) -> Result<Self> {
        if sample_count < MIN_MC_SAMPLES {
            return Err(Error::Parameter(format!(
                "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {sample_count}"
            )));
        }
        Ok(Self {
            method: IntegratorMethod::MonteCarlo,
            sample_count,
            seed,
            ..Self::default()
        })
    }

    pub fn with_target_error(mut self, target: f64) -> Self {
        self.target_error = Some(target);
        self
    }

    fn uses_quadrature(&self, d: usize) -> bool {
        match self.method {
            IntegratorMethod::Auto => d <= AUTO_QUADRATURE_MAX_DIM,
            IntegratorMethod::GaussLegendre => true,
            IntegratorMethod::MonteCarlo => false,
        }
    }

    fn nodes_for(&self, dim: usize) -> usize {
        self.nodes_per_dim.unwrap_or(if dim <= 4 { 32 } else { 16 })
    }

    fn validate(&self) -> Result<()> {
        if let Some(n) = self.nodes_per_dim {
            if n < MIN_NODES {
                return Err(Error::Parameter(format!(
                    "quadrature needs at least {MIN_NODES} nodes per dimension"
                )));
            }
        }
        if self.method != IntegratorMethod::GaussLegendre && self.sample_count < MIN_MC_SAMPLES {
            return Err(Error::Parameter(format!(
                "Monte Carlo needs at least {MIN_MC_SAMPLES} samples"
            )));
        }
        Ok(())
    }
}

/// A population coefficient for one direction of one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalRho {
    pub alpha: Direction,
    #[serde(flatten)]
    pub estimate: CoefficientEstimate,
    pub model: String,
}

fn check_model_dim(model: &CopulaModel, alpha: &Direction) -> Result<()> {
    if model.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: alpha.dim(),
        });
    }
    Ok(())
}

/// ∏_{i∈I} (1 − u_i) · ∏_{i∈J} u_i for the direction's sign pattern.
fn orthant_product(signs: &[Sign], u: &[f64]) -> f64 {
    signs
        .iter()
        .zip(u)
        .map(|(s, &x)| match s {
            Sign::Minus => 1.0 - x,
            Sign::Plus => x,
        })
        .product()
}

/// Monte Carlo means and standard errors of the orthant products of several
/// directions, all evaluated on one shared stream of copula draws.
fn orthant_means_mc(
    model: &CopulaModel,
    directions: &[Direction],
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, f64)>> {
    let total = cfg.sample_count;
    let chunks = total.div_ceil(MC_CHUNK);
    let partials: Vec<Vec<(NeumaierSum, NeumaierSum)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = MC_CHUNK.min(total - c * MC_CHUNK);
            let mut rng = seed::stream(cfg.seed, &[c as u64]);
            let data = model.sample(count, &mut rng)?;
            let mut acc = vec![(NeumaierSum::default(), NeumaierSum::default()); directions.len()];
            for row in data.rows() {
                for (alpha, (s, s2)) in directions.iter().zip(acc.iter_mut()) {
                    let p = orthant_product(alpha.signs(), row);
                    s.add(p);
                    s2.add(p * p);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let n = total as f64;
    Ok((0..directions.len())
        .map(|k| {
            let sum: NeumaierSum = partials.iter().map(|p| p[k].0.value()).collect();
            let sum2: NeumaierSum = partials.iter().map(|p| p[k].1.value()).collect();
            let mean = sum.value() / n;
            let var = ((sum2.value() - n * mean * mean) / (n - 1.0)).max(0.0);
            (mean, (var / n).sqrt())
        })
        .collect())
}

/// ∫ over [0,1]^|subset| of the model CDF restricted to `subset`.
fn margin_integral(model: &CopulaModel, subset: &[usize], cfg: &IntegratorConfig) -> Result<f64> {
    let k = subset.len();
    match k {
        0 => return Ok(1.0),
        1 => return Ok(0.5),
        _ => {}
    }
    let integrate = |nodes: usize| -> Result<f64> {
        let rule = TensorGaussLegendre::new(nodes)?;
        let base = vec![1.0; model.dim()];
        Ok(rule.integrate_axes(&base, subset, |u| model.cdf_unchecked(u)))
    };
    let nodes = cfg.nodes_for(k);
    let value = integrate(nodes)?;
    if let Some(target) = cfg.target_error {
        let fine = integrate(2 * nodes)?;
        let estimated = (value - fine).abs();
        if estimated > target {
            return Err(Error::Integration { estimated, target });
        }
    }
    Ok(value)
}

fn check_mc_target(se: f64, cfg: &IntegratorConfig) -> Result<()> {
    match cfg.target_error {
        Some(target) if se > target => Err(Error::Integration {
            estimated: se,
            target,
        }),
        _ => Ok(()),
    }
}

/// ρ^α from its definition: the normalized orthant-product expectation.
///
/// Quadrature evaluates the expectation as Σ_{S⊆J} (−1)^{|S|} ∫ C(x_{I∪S}, 1)
/// using the full-model CDF with ones substituted; Monte Carlo averages the
/// orthant product over copula draws.
pub fn rho_directional_definition(
    model: &CopulaModel,
    alpha: &Direction,
    cfg: &IntegratorConfig,
) -> Result<CoefficientEstimate> {
    check_model_dim(model, alpha)?;
    cfg.validate()?;
    let d = alpha.dim();
    let c = normalization_constant_f64(d)?;
    let offset = 0.5f64.powi(d as i32);
    if cfg.uses_quadrature(d) {
        let mut expectation = NeumaierSum::default();
        for (set, k) in alpha.partition().expansion_sets() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            expectation.add(sign * margin_integral(model, &set, cfg)?);
        }
        Ok(CoefficientEstimate::exact(
            c * (expectation.value() - offset),
            Method::Quadrature,
        ))
    } else {
        let (mean, se) = orthant_means_mc(model, std::slice::from_ref(alpha), cfg)?[0];
        check_mc_target(se, cfg)?;
        Ok(CoefficientEstimate::monte_carlo(mean, se, cfg.sample_count).affine(c, -c * offset))
    }
}

/// Lower-orthant coefficient ρ⁻ = c_d (∫ C − 2^{−d}).
pub fn rho_minus(model: &CopulaModel, cfg: &IntegratorConfig) -> Result<CoefficientEstimate> {
    rho_directional_definition(model, &Direction::all_minus(model.dim())?, cfg)
}

/// Upper-orthant coefficient ρ⁺ = c_d (E[∏ U_i] − 2^{−d}).
pub fn rho_plus(model: &CopulaModel, cfg: &IntegratorConfig) -> Result<CoefficientEstimate> {
    rho_directional_definition(model, &Direction::all_plus(model.dim())?, cfg)
}

/// ρ^α as a linear combination of the lower-orthant coefficients of the
/// margins on I ∪ S, S ⊆ J:
///
/// ```text
/// ρ^α = c_d · Σ_{S⊆J} (−1)^{|S|} · w(|I|+|S|) · ρ⁻(C_{I∪S}),   w(k) = 1 / c_k
/// ```
///
/// Margins of size ≤ 1 have zero weight and are skipped.
pub fn rho_directional_decomposition(
    model: &CopulaModel,
    alpha: &Direction,
    cfg: &IntegratorConfig,
) -> Result<CoefficientEstimate> {
    decompose(model, alpha, cfg, &mut Vec::new())
}

/// [`rho_directional_decomposition`] for several directions, integrating each
/// distinct margin once.
pub fn rho_decomposition_many(
    model: &CopulaModel,
    alphas: &[Direction],
    cfg: &IntegratorConfig,
) -> Result<Vec<CoefficientEstimate>> {
    let mut cache = Vec::new();
    alphas
        .iter()
        .map(|a| decompose(model, a, cfg, &mut cache))
        .collect()
}

type MarginCache = Vec<(CopulaModel, CoefficientEstimate)>;

fn decompose(
    model: &CopulaModel,
    alpha: &Direction,
    cfg: &IntegratorConfig,
    cache: &mut MarginCache,
) -> Result<CoefficientEstimate> {
    check_model_dim(model, alpha)?;
    cfg.validate()?;
    let d = alpha.dim();
    let c = normalization_constant_f64(d)?;
    let mut total = NeumaierSum::default();
    let mut se_bound = 0.0;
    let mut any_mc = false;
    for (set, k) in alpha.partition().expansion_sets() {
        let size = set.len();
        if size < 2 {
            continue;
        }
        let margin = model.margin(&set)?;
        let rho = match cache.iter().find(|(m, _)| *m == margin) {
            Some((_, r)) => *r,
            None => {
                let r = rho_minus(&margin, cfg)?;
                cache.push((margin, r));
                r
            }
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coef = c * sign * subset_weight_f64(size);
        total.add(coef * rho.value);
        if let Some(se) = rho.std_error {
            any_mc = true;
            // margins share one random stream, so errors are combined conservatively
            se_bound += coef.abs() * se;
        }
    }
    Ok(if any_mc {
        CoefficientEstimate::monte_carlo(total.value(), se_bound, cfg.sample_count)
    } else {
        CoefficientEstimate::exact(total.value(), Method::Decomposition)
    })
}

/// ρ^α of the comonotone copula M_d:
/// 1 if k ∈ {0, d}, else c_d (k!(d−k)!/(d+1)! − 2^{−d}), with k the number of −1 entries.
pub fn closed_form_mn(alpha: &Direction) -> Result<Ratio<i128>> {
    let d = alpha.dim();
    let k = alpha.minus_count();
    if k == 0 || k == d {
        return Ok(Ratio::from_integer(1));
    }
    let overflow = || Error::TooManyDimensions {
        what: "exact comonotone coefficient",
        d,
        limit: 64,
    };
    if d > MAX_EXACT_DIM {
        return Err(overflow());
    }
    // k!(d−k)!/(d+1)! = 1/((d+1)·B) with B = binom(d, k); multiplying by c_d and
    // cancelling (d+1)·2^d leaves (2^d − (d+1)·B) / ((2^d − (d+1))·B)
    let binom = binomial(d, k).ok_or_else(overflow)?;
    let p = 1i128 << d;
    let q = d as i128 + 1;
    let num = q
        .checked_mul(binom)
        .and_then(|qb| p.checked_sub(qb))
        .ok_or_else(overflow)?;
    let den = (p - q).checked_mul(binom).ok_or_else(overflow)?;
    Ok(Ratio::new(num, den))
}

fn binomial(n: usize, k: usize) -> Option<i128> {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)? / (i as i128 + 1);
    }
    Some(acc)
}

/// |ρ^α| of the FGM family per unit λ: 2^d (d+1) / ((2^d − (d+1)) 6^d).
pub fn fgm_unit_coefficient(d: usize) -> Result<Ratio<i128>> {
    let c = normalization_constant(d)?;
    let six = 6i128.checked_pow(d as u32).ok_or(Error::TooManyDimensions {
        what: "exact FGM coefficient",
        d,
        limit: 48,
    })?;
    Ok(c / six)
}

/// ρ^α of FGM_λ: (−1)^{|J|} 2^d (d+1) λ / ((2^d − (d+1)) 6^d).
pub fn closed_form_fgm(alpha: &Direction, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda.abs() <= 1.0) {
        return Err(Error::Parameter(format!(
            "FGM parameter must lie in [-1, 1], got {lambda}"
        )));
    }
    let d = alpha.dim();
    let positives = d - alpha.minus_count();
    let sign = if positives.is_multiple_of(2) { 1.0 } else { -1.0 };
    let unit = normalization_constant_f64(d)? / 6f64.powi(d as i32);
    Ok(sign * unit * lambda)
}

/// Σ over all 2^d directions of ρ^α (zero for every copula). Monte Carlo
/// evaluates every direction on the same draws, so the sum cancels to
/// rounding error.
pub fn sum_over_directions(model: &CopulaModel, cfg: &IntegratorConfig) -> Result<f64> {
    let d = model.dim();
    let dirs = all_directions(d)?;
    cfg.validate()?;
    if cfg.uses_quadrature(d) {
        let mut acc = NeumaierSum::default();
        for alpha in &dirs {
            acc.add(rho_directional_definition(model, alpha, cfg)?.value);
        }
        Ok(acc.value())
    } else {
        let c = normalization_constant_f64(d)?;
        let offset = 0.5f64.powi(d as i32);
        let means = orthant_means_mc(model, &dirs, cfg)?;
        Ok(means
            .iter()
            .map(|(m, _)| c * (m - offset))
            .collect::<NeumaierSum>()
            .value())
    }
}

/// The most accurate available value. With [`IntegratorMethod::Auto`]:
/// closed forms for product, comonotone and FGM models, the margin
/// decomposition for Clayton. An explicit method always integrates.
pub fn exact_rho(model: &CopulaModel, alpha: &Direction, cfg: &IntegratorConfig) -> Result<DirectionalRho> {
    Ok(exact_rho_many(model, std::slice::from_ref(alpha), cfg)?.remove(0))
}

/// [`exact_rho`] for several directions; Clayton margins are integrated once.
pub fn exact_rho_many(
    model: &CopulaModel,
    alphas: &[Direction],
    cfg: &IntegratorConfig,
) -> Result<Vec<DirectionalRho>> {
    let mut cache = Vec::new();
    alphas
        .iter()
        .map(|alpha| {
            check_model_dim(model, alpha)?;
            let closed = cfg.method == IntegratorMethod::Auto;
            let estimate = match *model {
                CopulaModel::Uniform => return Err(Error::Dimension(1)),
                _ if !closed => decompose(model, alpha, cfg, &mut cache)?,
                CopulaModel::Product { .. } => CoefficientEstimate::exact(0.0, Method::ClosedForm),
                CopulaModel::Comonotone { .. } => {
                    let r = closed_form_mn(alpha)?;
                    CoefficientEstimate::exact(*r.numer() as f64 / *r.denom() as f64, Method::ClosedForm)
                }
                CopulaModel::Fgm { lambda, .. } => {
                    CoefficientEstimate::exact(closed_form_fgm(alpha, lambda)?, Method::ClosedForm)
                }
                CopulaModel::Clayton { .. } if model.is_effectively_product() => {
                    CoefficientEstimate::exact(0.0, Method::ClosedForm)
                }
                CopulaModel::Clayton { .. } => decompose(model, alpha, cfg, &mut cache)?,
            };
            Ok(DirectionalRho {
                alpha: alpha.clone(),
                estimate,
                model: model.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(v: &[i32]) -> Direction {
        Direction::from_i32s(v).unwrap()
    }

    #[test]
    fn mn_examples() {
        assert_eq!(closed_form_mn(&dir(&[1, 1, 1])).unwrap(), Ratio::from_integer(1));
        assert_eq!(closed_form_mn(&dir(&[-1, -1, -1, -1])).unwrap(), Ratio::from_integer(1));
        assert_eq!(closed_form_mn(&dir(&[-1, 1, 1])).unwrap(), Ratio::new(-1, 3));
        assert_eq!(closed_form_mn(&dir(&[-1, -1, 1, 1])).unwrap(), Ratio::new(-7, 33));
    }

    #[test]
    fn mn_formula_matches_factorials() {
        // independent route: factorial arithmetic in rationals for small d
        fn fact(n: i128) -> i128 {
            (1..=n).product()
        }
        for d in 2..=12usize {
            for alpha in all_directions(d).unwrap() {
                let k = alpha.minus_count();
                if k == 0 || k == d {
                    continue;
                }
                let beta = Ratio::new(fact(k as i128) * fact((d - k) as i128), fact(d as i128 + 1));
                let expect = normalization_constant(d).unwrap() * (beta - Ratio::new(1, 1i128 << d));
                assert_eq!(closed_form_mn(&alpha).unwrap(), expect);
            }
        }
        // large dimensions still resolve exactly
        assert!(closed_form_mn(&Direction::from_mask(60, 0b1011).unwrap()).is_ok());
    }

    #[test]
    fn fgm_examples() {
        assert_eq!(fgm_unit_coefficient(4).unwrap(), Ratio::new(5, 891));
        assert_eq!(fgm_unit_coefficient(3).unwrap(), Ratio::new(1, 27));
        let v = closed_form_fgm(&dir(&[-1, -1, -1]), 0.6).unwrap();
        assert!((v - 0.6 / 27.0).abs() < 1e-16);
        let v = closed_form_fgm(&dir(&[1, 1, 1]), 0.6).unwrap();
        assert!((v + 0.6 / 27.0).abs() < 1e-16);
        assert_eq!(closed_form_fgm(&dir(&[1, -1, 1, 1]), 0.0).unwrap(), 0.0);
        assert!(closed_form_fgm(&dir(&[1, 1]), 1.2).is_err());
    }

    #[test]
    fn product_and_comonotone_by_quadrature() {
        let cfg = IntegratorConfig::default();
        for d in 2..=4 {
            let p = CopulaModel::product(d).unwrap();
            assert!(rho_minus(&p, &cfg).unwrap().value.abs() < 1e-13);
            assert!(rho_plus(&p, &cfg).unwrap().value.abs() < 1e-13);
        }
    }

    #[test]
    fn comonotone_normalization_by_quadrature() {
        // ∫ min(u) = 1/(d+1) ⇒ ρ⁻(M_d) = 1; the kink along the diagonal limits
        // tensor Gauss–Legendre to roughly three digits
        let cfg = IntegratorConfig::default();
        for d in 2..=5 {
            let m = CopulaModel::comonotone(d).unwrap();
            let integral = margin_integral(&m, &(0..d).collect::<Vec<_>>(), &cfg).unwrap();
            assert!((integral - 1.0 / (d as f64 + 1.0)).abs() < 2e-3, "d={d}: {integral}");
            let r = rho_minus(&m, &cfg).unwrap();
            assert_eq!(r.method, Method::Quadrature);
            assert!((r.value - 1.0).abs() < 1e-2, "d={d}: {}", r.value);
        }
    }

    #[test]
    fn fgm_rho_minus_by_quadrature() {
        let cfg = IntegratorConfig::quadrature(8).unwrap();
        let m = CopulaModel::fgm(3, 0.6).unwrap();
        assert!((rho_minus(&m, &cfg).unwrap().value - 0.6 / 27.0).abs() < 1e-13);
        assert!((rho_plus(&m, &cfg).unwrap().value + 0.6 / 27.0).abs() < 1e-13);
    }

    #[test]
    fn decomposition_of_fgm_matches_closed_form() {
        let cfg = IntegratorConfig::quadrature(8).unwrap();
        for d in 2..=4 {
            let m = CopulaModel::fgm(d, -0.7).unwrap();
            for alpha in all_directions(d).unwrap() {
                let dec = rho_directional_decomposition(&m, &alpha, &cfg).unwrap();
                assert_eq!(dec.method, Method::Decomposition);
                assert!(dec.std_error.is_none());
                let exact = closed_form_fgm(&alpha, -0.7).unwrap();
                assert!((dec.value - exact).abs() < 1e-12, "{alpha}: {} vs {exact}", dec.value);
            }
        }
    }

    #[test]
    fn mc_definition_carries_error() {
        let m = CopulaModel::comonotone(3).unwrap();
        let cfg = IntegratorConfig::monte_carlo(200_000, 3).unwrap();
        let r = rho_directional_definition(&m, &dir(&[-1, 1, 1]), &cfg).unwrap();
        assert_eq!(r.method, Method::MonteCarlo);
        let se = r.std_error.unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 4.0 * se, "{r:?}");
        assert_eq!(r.sample_count, Some(200_000));
    }

    #[test]
    fn explicit_method_integrates_closed_form_families() {
        let model = CopulaModel::fgm(3, 0.6).unwrap();
        let alpha = dir(&[-1, 1, 1]);
        let auto = exact_rho(&model, &alpha, &IntegratorConfig::default()).unwrap();
        let quad = exact_rho(&model, &alpha, &IntegratorConfig::quadrature(16).unwrap()).unwrap();
        assert_eq!(auto.estimate.method, Method::ClosedForm);
        assert_eq!(quad.estimate.method, Method::Decomposition);
        assert!((auto.estimate.value - quad.estimate.value).abs() < 1e-12);
    }

    #[test]
    fn target_error_is_enforced() {
        let m = CopulaModel::clayton(3, 1.0).unwrap();
        let cfg = IntegratorConfig::monte_carlo(10_000, 1).unwrap().with_target_error(1e-9);
        let err = rho_minus(&m, &cfg).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
        let cfg = IntegratorConfig::quadrature(8).unwrap().with_target_error(1e-16);
        let m = CopulaModel::comonotone(2).unwrap();
        assert!(matches!(rho_minus(&m, &cfg), Err(Error::Integration { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::quadrature(4).is_err());
        assert!(IntegratorConfig::monte_carlo(999, 0).is_err());
        let m = CopulaModel::product(3).unwrap();
        assert!(rho_directional_definition(&m, &dir(&[1, 1]), &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn sums_over_directions() {
        let cfg = IntegratorConfig::default();
        let p = CopulaModel::product(3).unwrap();
        assert!(sum_over_directions(&p, &cfg).unwrap().abs() < 1e-12);
        let total: Ratio<i128> = all_directions(3)
            .unwrap()
            .iter()
            .map(|a| closed_form_mn(a).unwrap())
            .sum();
        assert_eq!(total, Ratio::from_integer(0));
        let c = CopulaModel::clayton(3, 2.0).unwrap();
        let mc = IntegratorConfig::monte_carlo(100_000, 8).unwrap();
        assert!(sum_over_directions(&c, &mc).unwrap().abs() <= 1e-10);
        assert!(sum_over_directions(&c, &cfg).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn best_method_dispatch() {
        let cfg = IntegratorConfig::default();
        let r = exact_rho(&CopulaModel::comonotone(3).unwrap(), &dir(&[1, -1, 1]), &cfg).unwrap();
        assert_eq!(r.estimate.method, Method::ClosedForm);
        assert!((r.estimate.value + 1.0 / 3.0).abs() < 1e-15);
        let r = exact_rho(&CopulaModel::clayton(3, 1.0).unwrap(), &dir(&[1, -1, -1]), &cfg).unwrap();
        assert_eq!(r.estimate.method, Method::Decomposition);
        let r = exact_rho(&CopulaModel::clayton(3, 1e-10).unwrap(), &dir(&[1, -1, -1]), &cfg).unwrap();
        assert_eq!(r.estimate.value, 0.0);
    }
}
