//! CSV ingestion and report rendering for the command-line tool.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::copula::CopulaModel;
use crate::data::{compute_ranks, DataMatrix, TiePolicy};
use crate::direction::{all_directions, Direction};
use crate::error::{Error, Result};
use crate::estimator::{rho_hat_all_directions, rho_hat_star3, EstimatorResult};
use crate::exact::DirectionalRho;

/// Largest dimension for which all 2^d directions are estimated without an override.
pub const ALL_DIRECTIONS_GUARD: usize = 16;

pub const DEFAULT_PRECISION: usize = 4;

/// A named data matrix read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub data: DataMatrix,
    pub source: PathBuf,
}

/// A column picked by header name or by 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Position(usize),
}

impl FromStr for ColumnSelector {
    type Err = Error;

    /// Digits are read as a 1-based position, anything else as a name.
    /// A header name that is itself a number wins over the position; see
    /// [`ingest_csv`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parameter("empty column selector".into()));
        }
        Ok(match s.parse::<usize>() {
            Ok(p) => Self::Position(p),
            Err(_) => Self::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub header: bool,
    pub delimiter: u8,
    /// `None` keeps every column.
    pub columns: Option<Vec<ColumnSelector>>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            header: true,
            delimiter: b',',
            columns: None,
        }
    }
}

fn resolve_columns(
    path: &Path,
    names: &[String],
    selectors: &[ColumnSelector],
) -> Result<Vec<usize>> {
    let missing = |what: String| Error::Cell {
        path: path.to_path_buf(),
        row: 1,
        column: what,
        reason: "no such column".into(),
    };
    selectors
        .iter()
        .map(|sel| match sel {
            ColumnSelector::Name(name) => names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| missing(name.clone())),
            ColumnSelector::Position(p) => {
                let as_name = p.to_string();
                if let Some(i) = names.iter().position(|n| *n == as_name) {
                    Ok(i)
                } else if (1..=names.len()).contains(p) {
                    Ok(p - 1)
                } else {
                    Err(missing(format!("#{p}")))
                }
            }
        })
        .collect()
}

/// Reads a numeric CSV file. Rows must all have the same number of fields;
/// every selected cell must parse as a finite number. Errors name the file
/// line and the column.
pub fn ingest_csv(path: &Path, options: &CsvOptions) -> Result<Dataset> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.header)
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut records = Vec::new();
    for record in reader.records() {
        records.push(record.map_err(csv_err)?);
    }
    let width = if options.header {
        reader.headers().map_err(csv_err)?.len()
    } else {
        records.first().map_or(0, |r| r.len())
    };
    let names: Vec<String> = if options.header {
        reader.headers().map_err(csv_err)?.iter().map(str::to_string).collect()
    } else {
        (1..=width).map(|i| format!("x{i}")).collect()
    };

    let selected: Vec<usize> = match &options.columns {
        Some(sel) => resolve_columns(path, &names, sel)?,
        None => (0..width).collect(),
    };
    let chosen: Vec<String> = selected.iter().map(|&i| names[i].clone()).collect();
    let mut seen = HashSet::new();
    if let Some(dup) = chosen.iter().find(|n| !seen.insert(n.as_str())) {
        return Err(Error::Data(format!("column `{dup}` selected more than once")));
    }
    if selected.len() < 2 {
        return Err(Error::Data(format!(
            "{}: need at least 2 columns, got {}",
            path.display(),
            selected.len()
        )));
    }
    if records.len() < 2 {
        return Err(Error::Data(format!(
            "{}: need at least 2 data rows, got {}",
            path.display(),
            records.len()
        )));
    }

    let mut values = Vec::with_capacity(records.len() * selected.len());
    for record in &records {
        let line = record.position().map_or(0, |p| p.line() as usize);
        for &c in &selected {
            let cell = |reason: String| Error::Cell {
                path: path.to_path_buf(),
                row: line,
                column: names[c].clone(),
                reason,
            };
            let raw = record.get(c).unwrap_or("");
            if raw.is_empty() {
                return Err(cell("empty cell".into()));
            }
            let x: f64 = raw
                .parse()
                .map_err(|_| cell(format!("`{raw}` is not a number")))?;
            if !x.is_finite() {
                return Err(cell(format!("`{raw}` is not finite")));
            }
            values.push(x);
        }
    }
    Ok(Dataset {
        names: chosen,
        data: DataMatrix::from_row_major(records.len(), selected.len(), values)?,
        source: path.to_path_buf(),
    })
}

/// Writes a data matrix as CSV with header `x1,…,xd`. Values use the shortest
/// representation that parses back to the same double.
pub fn write_data_csv<W: Write>(data: &DataMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record((1..=data.ncols()).map(|i| format!("x{i}")))
        .map_err(io)?;
    for row in data.rows() {
        w.write_record(row.iter().map(|x| x.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "table" | "text" => Ok(Self::Table),
            other => Err(Error::Parameter(format!(
                "unknown output format `{other}` (expected csv, json or table)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    /// `None` writes to standard output.
    pub destination: Option<PathBuf>,
    precision: usize,
}

impl OutputSpec {
    pub fn new(format: OutputFormat, destination: Option<PathBuf>, precision: usize) -> Result<Self> {
        if !(1..=15).contains(&precision) {
            return Err(Error::Parameter(format!(
                "precision must be between 1 and 15, got {precision}"
            )));
        }
        Ok(Self {
            format,
            destination,
            precision,
        })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn emit(&self, content: &str) -> Result<()> {
        match &self.destination {
            Some(path) => std::fs::write(path, content)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(content.as_bytes())?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            format: OutputFormat::default(),
            destination: None,
            precision: DEFAULT_PRECISION,
        }
    }
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

/// Estimates for a set of directions on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub columns: Vec<String>,
    pub n: usize,
    pub d: usize,
    /// Ties broken while ranking, per column.
    pub ties: Vec<usize>,
    pub tie_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_hat_star3: Option<f64>,
    /// Sorted by descending estimate.
    pub estimates: Vec<EstimatorResult>,
}

/// Ranks the dataset and estimates ρ̂^α for the given directions, or for all
/// 2^d of them. All directions are refused above [`ALL_DIRECTIONS_GUARD`]
/// dimensions unless `allow_large` is set.
pub fn estimate_dataset(
    dataset: &Dataset,
    directions: Option<&[Direction]>,
    policy: TiePolicy,
    allow_large: bool,
) -> Result<EstimateReport> {
    let d = dataset.data.ncols();
    let ranks = compute_ranks(&dataset.data, policy);
    let all;
    let directions = match directions {
        Some(list) => list,
        None => {
            if d > ALL_DIRECTIONS_GUARD && !allow_large {
                return Err(Error::TooManyDimensions {
                    what: "estimating all directions without an override",
                    d,
                    limit: ALL_DIRECTIONS_GUARD,
                });
            }
            all = all_directions(d)?;
            &all
        }
    };
    let mut estimates = rho_hat_all_directions(&ranks, directions)?;
    estimates.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(EstimateReport {
        columns: dataset.names.clone(),
        n: ranks.n(),
        d,
        ties: ranks.tie_report().to_vec(),
        tie_count: ranks.tie_count(),
        rho_hat_star3: if d == 3 { Some(rho_hat_star3(&ranks)?) } else { None },
        estimates,
    })
}

impl EstimateReport {
    fn rows(&self, precision: usize) -> Vec<Vec<String>> {
        self.estimates
            .iter()
            .map(|e| vec![e.alpha.to_string(), format!("{:.precision$}", e.value)])
            .collect()
    }

    /// Lines that do not fit the `alpha,rho_hat` grid.
    pub fn notes(&self, precision: usize) -> Vec<String> {
        let mut notes = Vec::new();
        if let Some(s) = self.rho_hat_star3 {
            notes.push(format!("rho_hat_3* = {s:.precision$}"));
        }
        if self.tie_count > 0 {
            let per: Vec<String> = self
                .columns
                .iter()
                .zip(&self.ties)
                .filter(|(_, &t)| t > 0)
                .map(|(c, t)| format!("{c}: {t}"))
                .collect();
            notes.push(format!(
                "warning: {} ties broken while ranking ({})",
                self.tie_count,
                per.join(", ")
            ));
        }
        notes
    }

    pub fn to_csv(&self, precision: usize) -> Result<String> {
        to_csv(&["alpha", "rho_hat"], &self.rows(precision))
    }

    pub fn to_text(&self, precision: usize) -> String {
        let mut out = format!("n = {}, d = {}, columns: {}\n", self.n, self.d, self.columns.join(", "));
        out.push_str(&aligned(&["alpha", "rho_hat"], &self.rows(precision)));
        for note in self.notes(precision) {
            let _ = writeln!(out, "{note}");
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Population coefficients of one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub model: CopulaModel,
    pub spec: String,
    pub coefficients: Vec<DirectionalRho>,
}

impl ExactReport {
    pub fn new(model: CopulaModel, coefficients: Vec<DirectionalRho>) -> Self {
        Self {
            spec: model.to_string(),
            model,
            coefficients,
        }
    }

    fn rows(&self, precision: usize) -> Vec<Vec<String>> {
        self.coefficients
            .iter()
            .map(|c| {
                vec![
                    c.alpha.to_string(),
                    format!("{:.precision$}", c.estimate.value),
                    c.estimate.method.to_string(),
                    c.estimate
                        .std_error
                        .map_or_else(String::new, |se| format!("{se:.3e}")),
                ]
            })
            .collect()
    }

    pub fn to_csv(&self, precision: usize) -> Result<String> {
        to_csv(&["alpha", "rho", "method", "std_error"], &self.rows(precision))
    }

    pub fn to_text(&self, precision: usize) -> String {
        format!(
            "{}\n{}",
            self.spec,
            aligned(&["alpha", "rho", "method", "std_error"], &self.rows(precision))
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
