//! Seeded replication harness for simulation studies.
//!
//! Every replicate draws its sample from a stream keyed by (family, d,
//! parameter, n, replicate index), so results do not depend on thread count,
//! on cell order, or on which other cells are in the plan. All directions of
//! a cell share the same samples.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::{CopulaFamily, CopulaModel};
use crate::data::{compute_ranks, TiePolicy};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::estimate::CoefficientEstimate;
use crate::estimator::{rho_hat_decomposed, rho_hat_directional, rho_hat_minus_subset};
use crate::exact::{exact_rho, exact_rho_many, IntegratorConfig};
use crate::seed::stream;
use crate::sum::mean_sd;

pub const DEFAULT_REPLICATES: usize = 1000;

/// Parameters used by the built-in Clayton presets.
pub const PRESET_THETAS: [f64; 5] = [0.4, 0.6, 1.0, 2.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationPlan {
    pub family: CopulaFamily,
    pub dim: usize,
    /// Parameter grid; must be empty for families without a parameter.
    pub parameters: Vec<f64>,
    pub sizes: Vec<usize>,
    pub directions: Vec<Direction>,
    pub replicates: usize,
    pub seed: u64,
    /// Also compute the decomposed estimator and track its gap to the direct one.
    pub decomposed: bool,
    #[serde(skip)]
    pub integrator: IntegratorConfig,
}

impl ReplicationPlan {
    pub fn new(
        family: CopulaFamily,
        dim: usize,
        parameters: Vec<f64>,
        sizes: Vec<usize>,
        directions: Vec<Direction>,
        seed: u64,
    ) -> Self {
        Self {
            family,
            dim,
            parameters,
            sizes,
            directions,
            replicates: DEFAULT_REPLICATES,
            seed,
            decomposed: false,
            integrator: IntegratorConfig::default(),
        }
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_decomposed(mut self, decomposed: bool) -> Self {
        self.decomposed = decomposed;
        self
    }

    /// One model per grid parameter, or a single model when the family has none.
    fn models(&self) -> Result<Vec<(Option<f64>, CopulaModel)>> {
        if self.family.has_parameter() {
            if self.parameters.is_empty() {
                return Err(Error::Plan(format!("family {} needs a parameter grid", self.family)));
            }
            self.parameters
                .iter()
                .map(|&p| Ok((Some(p), self.family.build(self.dim, Some(p))?)))
                .collect()
        } else {
            if !self.parameters.is_empty() {
                return Err(Error::Plan(format!("family {} takes no parameter", self.family)));
            }
            Ok(vec![(None, self.family.build(self.dim, None)?)])
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Plan("replicate count must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Plan("no sample sizes".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Plan(format!("sample size {n} is below 2")));
        }
        if self.directions.is_empty() {
            return Err(Error::Plan("no directions".into()));
        }
        if let Some(a) = self.directions.iter().find(|a| a.dim() != self.dim) {
            return Err(Error::Plan(format!("direction {a} does not have dimension {}", self.dim)));
        }
        Ok(())
    }
}

/// The four built-in grids: Clayton copulas at θ ∈ {0.4, 0.6, 1, 2, 5}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// d = 3, α = (−1, 1, 1), n ∈ {20, 50, 100, 500}.
    Table1,
    /// d = 3, α = (−1, −1, 1), n ∈ {20, 50, 100, 500}.
    Table2,
    /// d = 4, α = (−1, 1, 1, −1), n ∈ {20, 50, 100, 500}.
    Table3,
    /// d = 4, α = (−1, 1, 1, −1), n ∈ {20, 50, 100, 200}, with subset coefficients.
    Table4,
}

impl Preset {
    pub fn plan(self, seed: u64) -> ReplicationPlan {
        let (alpha, sizes): (&[i32], Vec<usize>) = match self {
            Preset::Table1 => (&[-1, 1, 1], vec![20, 50, 100, 500]),
            Preset::Table2 => (&[-1, -1, 1], vec![20, 50, 100, 500]),
            Preset::Table3 => (&[-1, 1, 1, -1], vec![20, 50, 100, 500]),
            Preset::Table4 => (&[-1, 1, 1, -1], vec![20, 50, 100, 200]),
        };
        let alpha = Direction::from_i32s(alpha).expect("preset direction");
        ReplicationPlan::new(
            CopulaFamily::Clayton,
            alpha.dim(),
            PRESET_THETAS.to_vec(),
            sizes,
            vec![alpha],
            seed,
        )
        .with_decomposed(self == Preset::Table4)
    }

    /// Whether the preset is reported as a subset-coefficient table.
    pub fn is_decomposition_table(self) -> bool {
        self == Preset::Table4
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table1" => Ok(Self::Table1),
            "table2" => Ok(Self::Table2),
            "table3" => Ok(Self::Table3),
            "table4" => Ok(Self::Table4),
            other => Err(Error::Plan(format!(
                "unknown preset `{other}` (expected table1, table2, table3 or table4)"
            ))),
        }
    }
}

fn family_code(family: CopulaFamily) -> u64 {
    match family {
        CopulaFamily::Product => 0,
        CopulaFamily::Comonotone => 1,
        CopulaFamily::Fgm => 2,
        CopulaFamily::Clayton => 3,
    }
}

/// Stream key for one replicate of one (model, n) cell.
fn replicate_path(model: &CopulaModel, family: CopulaFamily, n: usize, rep: usize) -> [u64; 5] {
    [
        family_code(family),
        model.dim() as u64,
        model.parameter().unwrap_or(0.0).to_bits(),
        n as u64,
        rep as u64,
    ]
}

/// Per-replicate estimates for every direction: `out[rep][k]` for direction k.
struct ReplicateValues {
    direct: Vec<Vec<f64>>,
    decomposed: Option<Vec<Vec<f64>>>,
}

fn replicate_values(
    plan: &ReplicationPlan,
    model: &CopulaModel,
    n: usize,
) -> Result<ReplicateValues> {
    let rows: Vec<(Vec<f64>, Option<Vec<f64>>)> = (0..plan.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream(plan.seed, &replicate_path(model, plan.family, n, rep));
            let ranks = compute_ranks(&model.sample(n, &mut rng)?, TiePolicy::Stable);
            let direct = plan
                .directions
                .iter()
                .map(|a| Ok(rho_hat_directional(&ranks, a)?.value))
                .collect::<Result<Vec<f64>>>()?;
            let decomposed = if plan.decomposed {
                Some(
                    plan.directions
                        .iter()
                        .map(|a| Ok(rho_hat_decomposed(&ranks, a)?.value))
                        .collect::<Result<Vec<f64>>>()?,
                )
            } else {
                None
            };
            Ok((direct, decomposed))
        })
        .collect::<Result<_>>()?;
    let (direct, decomposed): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let decomposed = plan
        .decomposed
        .then(|| decomposed.into_iter().map(Option::unwrap).collect());
    Ok(ReplicateValues { direct, decomposed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationCell {
    pub parameter: Option<f64>,
    pub n: usize,
    pub alpha: Direction,
    pub mean: f64,
    pub sd: f64,
    pub replicates: usize,
    pub exact: CoefficientEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposed_mean: Option<f64>,
    /// Largest |direct − decomposed| over the replicates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_decomposition_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub family: CopulaFamily,
    pub dim: usize,
    pub seed: u64,
    pub replicates: usize,
    pub parameters: Vec<f64>,
    pub sizes: Vec<usize>,
    pub directions: Vec<Direction>,
    pub cells: Vec<SimulationCell>,
}

/// Runs every (parameter, n) cell of the plan and summarizes each direction.
pub fn run_plan(plan: &ReplicationPlan) -> Result<SimulationReport> {
    plan.validate()?;
    let models = plan.models()?;
    let mut cells = Vec::new();
    for (parameter, model) in &models {
        let exact: Vec<CoefficientEstimate> = exact_rho_many(model, &plan.directions, &plan.integrator)?
            .into_iter()
            .map(|r| r.estimate)
            .collect();
        for &n in &plan.sizes {
            let values = replicate_values(plan, model, n)?;
            for (k, alpha) in plan.directions.iter().enumerate() {
                let direct: Vec<f64> = values.direct.iter().map(|r| r[k]).collect();
                let (mean, sd) = mean_sd(&direct);
                let (decomposed_mean, gap) = match &values.decomposed {
                    Some(dec) => {
                        let dec: Vec<f64> = dec.iter().map(|r| r[k]).collect();
                        let gap = direct
                            .iter()
                            .zip(&dec)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        (Some(mean_sd(&dec).0), Some(gap))
                    }
                    None => (None, None),
                };
                cells.push(SimulationCell {
                    parameter: *parameter,
                    n,
                    alpha: alpha.clone(),
                    mean,
                    sd,
                    replicates: direct.len(),
                    exact: exact[k],
                    decomposed_mean,
                    max_decomposition_gap: gap,
                });
            }
        }
    }
    Ok(SimulationReport {
        family: plan.family,
        dim: plan.dim,
        seed: plan.seed,
        replicates: plan.replicates,
        parameters: plan.parameters.clone(),
        sizes: plan.sizes.clone(),
        directions: plan.directions.clone(),
        cells,
    })
}

fn fmt_param(p: Option<f64>) -> String {
    p.map_or_else(|| "-".to_string(), |p| p.to_string())
}

fn fmt_value(x: f64, precision: usize) -> String {
    format!("{x:.precision$}")
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header);
    out.push('\n');
    let rule = "-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1));
    let _ = writeln!(out, "{rule}");
    for row in rows {
        let _ = writeln!(out, "{}", line(row));
    }
    out
}

impl SimulationReport {
    pub fn cell(&self, parameter: Option<f64>, n: usize, alpha: &Direction) -> Option<&SimulationCell> {
        self.cells
            .iter()
            .find(|c| c.parameter == parameter && c.n == n && &c.alpha == alpha)
    }

    fn parameter_label(&self) -> String {
        self.family.parameter_name().unwrap_or("parameter").to_string()
    }

    /// One row per (direction, parameter): exact value and the mean of ρ̂ for each n.
    fn grid(&self, precision: usize) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec!["alpha".to_string(), self.parameter_label(), "exact".into()];
        header.extend(self.sizes.iter().map(|n| format!("n={n}")));
        let params: Vec<Option<f64>> = if self.parameters.is_empty() {
            vec![None]
        } else {
            self.parameters.iter().copied().map(Some).collect()
        };
        let mut rows = Vec::new();
        for alpha in &self.directions {
            for &p in &params {
                let first = self.cell(p, self.sizes[0], alpha).expect("cell exists");
                let mut row = vec![
                    alpha.to_string(),
                    fmt_param(p),
                    fmt_value(first.exact.value, precision),
                ];
                row.extend(self.sizes.iter().map(|&n| {
                    fmt_value(self.cell(p, n, alpha).expect("cell exists").mean, precision)
                }));
                rows.push(row);
            }
        }
        (header, rows)
    }

    pub fn to_csv(&self, precision: usize) -> Result<String> {
        let (header, rows) = self.grid(precision);
        csv_string(&header, &rows)
    }

    pub fn to_text(&self, precision: usize) -> String {
        let (header, rows) = self.grid(precision);
        format!(
            "{} copula, d = {}, {} replicates per cell, seed {}; columns n=… hold the mean of the estimates\n{}",
            self.family,
            self.dim,
            self.replicates,
            self.seed,
            aligned(&header, &rows)
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRow {
    pub parameter: Option<f64>,
    pub n: usize,
    pub exact: CoefficientEstimate,
    /// Mean of ρ̂⁻_K for each set K in [`DecompositionTable::subsets`].
    pub subset_means: Vec<f64>,
    /// Mean of the estimate assembled from the subset coefficients.
    pub assembled_mean: f64,
    pub assembled_sd: f64,
    pub direct_mean: f64,
    pub max_decomposition_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionTable {
    pub family: CopulaFamily,
    pub alpha: Direction,
    pub replicates: usize,
    pub seed: u64,
    /// Sets I ∪ S (0-based, at least two indices) entering the decomposition.
    pub subsets: Vec<Vec<usize>>,
    pub rows: Vec<DecompositionRow>,
}

/// Means of the subset coefficients ρ̂⁻_{I∪S} alongside the assembled
/// estimate, for a plan with exactly one direction.
pub fn run_decomposition_table(plan: &ReplicationPlan) -> Result<DecompositionTable> {
    plan.validate()?;
    let [alpha] = plan.directions.as_slice() else {
        return Err(Error::Plan("a decomposition table needs exactly one direction".into()));
    };
    let subsets: Vec<Vec<usize>> = alpha
        .partition()
        .expansion_sets()
        .into_iter()
        .map(|(set, _)| set)
        .filter(|set| set.len() >= 2)
        .collect();
    let mut rows = Vec::new();
    for (parameter, model) in plan.models()? {
        let exact = exact_rho(&model, alpha, &plan.integrator)?.estimate;
        for &n in &plan.sizes {
            let per_rep: Vec<(Vec<f64>, f64, f64)> = (0..plan.replicates)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = stream(plan.seed, &replicate_path(&model, plan.family, n, rep));
                    let ranks = compute_ranks(&model.sample(n, &mut rng)?, TiePolicy::Stable);
                    let pseudo = ranks.pseudo_observations();
                    let subs = subsets
                        .iter()
                        .map(|k| rho_hat_minus_subset(&pseudo, k))
                        .collect::<Result<Vec<f64>>>()?;
                    let assembled = rho_hat_decomposed(&ranks, alpha)?.value;
                    let direct = rho_hat_directional(&ranks, alpha)?.value;
                    Ok((subs, assembled, direct))
                })
                .collect::<Result<_>>()?;
            let subset_means = (0..subsets.len())
                .map(|k| mean_sd(&per_rep.iter().map(|r| r.0[k]).collect::<Vec<_>>()).0)
                .collect();
            let assembled: Vec<f64> = per_rep.iter().map(|r| r.1).collect();
            let direct: Vec<f64> = per_rep.iter().map(|r| r.2).collect();
            let (assembled_mean, assembled_sd) = mean_sd(&assembled);
            rows.push(DecompositionRow {
                parameter,
                n,
                exact,
                subset_means,
                assembled_mean,
                assembled_sd,
                direct_mean: mean_sd(&direct).0,
                max_decomposition_gap: assembled
                    .iter()
                    .zip(&direct)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
            });
        }
    }
    Ok(DecompositionTable {
        family: plan.family,
        alpha: alpha.clone(),
        replicates: plan.replicates,
        seed: plan.seed,
        subsets,
        rows,
    })
}

impl DecompositionTable {
    /// Column label for a subset, with 1-based indices: `rho_minus_124`.
    pub fn subset_label(set: &[usize]) -> String {
        let digits: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
        let sep = if set.iter().any(|&i| i >= 9) { "_" } else { "" };
        format!("rho_minus_{}", digits.join(sep))
    }

    fn grid(&self, precision: usize) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec![
            "n".to_string(),
            self.family.parameter_name().unwrap_or("parameter").to_string(),
            "exact".into(),
        ];
        header.extend(self.subsets.iter().map(|s| Self::subset_label(s)));
        header.push("rho_hat".into());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.n.to_string(),
                    fmt_param(r.parameter),
                    fmt_value(r.exact.value, precision),
                ];
                row.extend(r.subset_means.iter().map(|&m| fmt_value(m, precision)));
                row.push(fmt_value(r.assembled_mean, precision));
                row
            })
            .collect();
        (header, rows)
    }

    pub fn to_csv(&self, precision: usize) -> Result<String> {
        let (header, rows) = self.grid(precision);
        csv_string(&header, &rows)
    }

    pub fn to_text(&self, precision: usize) -> String {
        let (header, rows) = self.grid(precision);
        format!(
            "{} copula, alpha = {}, {} replicates per row, seed {}; estimates are means\n{}",
            self.family,
            self.alpha,
            self.replicates,
            self.seed,
            aligned(&header, &rows)
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    /// √n · sd, roughly constant when the estimator spread shrinks like n^{−1/2}.
    pub scaled_sd: f64,
}

/// Replicate mean and spread of ρ̂^α along a ladder of sample sizes.
pub fn convergence_diagnostic(
    model: &CopulaModel,
    alpha: &Direction,
    sizes: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    if sizes.len() < 3 {
        return Err(Error::Plan("a convergence ladder needs at least 3 sample sizes".into()));
    }
    let family: CopulaFamily = model.family().parse()?;
    let mut plan = ReplicationPlan::new(
        family,
        model.dim(),
        model.parameter().into_iter().collect(),
        sizes.to_vec(),
        vec![alpha.clone()],
        seed,
    )
    .with_replicates(replicates);
    if !family.has_parameter() {
        plan.parameters.clear();
    }
    plan.validate()?;
    sizes
        .iter()
        .map(|&n| {
            let values = replicate_values(&plan, model, n)?;
            let direct: Vec<f64> = values.direct.iter().map(|r| r[0]).collect();
            let (mean, sd) = mean_sd(&direct);
            Ok(ConvergenceRow {
                n,
                mean,
                sd,
                scaled_sd: (n as f64).sqrt() * sd,
            })
        })
        .collect()
}
