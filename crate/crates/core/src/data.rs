//! Data matrices, column ranks and pseudo-observations.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::direction::{Direction, Sign};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Real-valued observations, one row per observation and one column per variable.
///
/// Every entry is finite. Estimators additionally need at least two rows and
/// two columns and check that themselves; single-column matrices appear as
/// samples from one-dimensional margins.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn from_row_major(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Data(format!("empty matrix ({rows}x{cols})")));
        }
        if values.len() != rows * cols {
            return Err(Error::Data(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                column: pos % cols,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Data(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Data("columns have different lengths".into()));
        }
        let mut values = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            values.extend(columns.iter().map(|c| c[j]));
        }
        Self::from_row_major(rows, cols, values)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows().map(|r| r[col]).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_row_major(self.rows, self.cols, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Data(format!("column {bad} out of range")));
        }
        let values = self
            .rows()
            .flat_map(|r| cols.iter().map(move |&c| r[c]))
            .collect();
        Self::from_row_major(self.rows, cols.len(), values)
    }
}

/// How equal values within a column are ordered when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Earlier rows get the smaller rank.
    #[default]
    Stable,
    /// Tied groups are shuffled with a generator derived from the seed and column.
    Random { seed: u64 },
}

/// Column-wise ranks 1..=n. Every column is a permutation of 1..=n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankMatrix {
    n: usize,
    d: usize,
    // column-major
    ranks: Vec<usize>,
    ties: Vec<usize>,
}

impl RankMatrix {
    /// Builds a rank matrix from explicit columns; each must be a permutation of 1..=n.
    pub fn from_columns(columns: Vec<Vec<usize>>) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if d == 0 || n == 0 {
            return Err(Error::Data("empty rank matrix".into()));
        }
        let mut ranks = Vec::with_capacity(n * d);
        for (i, col) in columns.into_iter().enumerate() {
            if col.len() != n {
                return Err(Error::Data(format!("rank column {i} has wrong length")));
            }
            let mut seen = vec![false; n];
            for &r in &col {
                if r == 0 || r > n || std::mem::replace(&mut seen[r - 1], true) {
                    return Err(Error::Data(format!(
                        "rank column {i} is not a permutation of 1..={n}"
                    )));
                }
            }
            ranks.extend(col);
        }
        Ok(Self {
            n,
            d,
            ranks,
            ties: vec![0; d],
        })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Data("ragged rank rows".into()));
        }
        Self::from_columns((0..d).map(|i| rows.iter().map(|r| r[i]).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self, row: usize, col: usize) -> usize {
        self.ranks[col * self.n + row]
    }

    pub fn column(&self, col: usize) -> &[usize] {
        &self.ranks[col * self.n..(col + 1) * self.n]
    }

    /// Per-column number of ties that were broken while ranking.
    pub fn tie_report(&self) -> &[usize] {
        &self.ties
    }

    pub fn tie_count(&self) -> usize {
        self.ties.iter().sum()
    }

    /// R ↦ n + 1 − R in every column.
    pub fn reflected(&self) -> Self {
        let n1 = self.n + 1;
        Self {
            ranks: self.ranks.iter().map(|&r| n1 - r).collect(),
            ..self.clone()
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let mut ranks = Vec::with_capacity(cols.len() * self.n);
        let mut ties = Vec::with_capacity(cols.len());
        for &c in cols {
            if c >= self.d {
                return Err(Error::Data(format!("column {c} out of range")));
            }
            ranks.extend_from_slice(self.column(c));
            ties.push(self.ties[c]);
        }
        Ok(Self {
            n: self.n,
            d: cols.len(),
            ranks,
            ties,
        })
    }

    /// Applies a row permutation: row `j` of the result is row `perm[j]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut ranks = Vec::with_capacity(self.ranks.len());
        for c in 0..self.d {
            let col = self.column(c);
            ranks.extend(perm.iter().map(|&j| col[j]));
        }
        Self {
            ranks,
            ..self.clone()
        }
    }

    pub fn pseudo_observations(&self) -> PseudoObservations {
        let scale = (self.n + 1) as f64;
        PseudoObservations {
            n: self.n,
            d: self.d,
            u: self.ranks.iter().map(|&r| r as f64 / scale).collect(),
        }
    }
}

/// Ranks each column of `data`. Entries are finite by construction of [`DataMatrix`].
pub fn compute_ranks(data: &DataMatrix, policy: TiePolicy) -> RankMatrix {
    let n = data.nrows();
    let d = data.ncols();
    let mut ranks = vec![0usize; n * d];
    let mut ties = vec![0usize; d];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for c in 0..d {
        let col = data.column(c);
        order.clear();
        order.extend(0..n);
        order.sort_by(|&a, &b| col[a].total_cmp(&col[b]).then(a.cmp(&b)));

        let mut rng = match policy {
            TiePolicy::Stable => None,
            TiePolicy::Random { seed } => {
                Some(ChaCha8Rng::seed_from_u64(derive_seed(seed, &[c as u64])))
            }
        };
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && col[order[end]] == col[order[start]] {
                end += 1;
            }
            if end - start > 1 {
                ties[c] += end - start - 1;
                if let Some(rng) = rng.as_mut() {
                    order[start..end].shuffle(rng);
                }
            }
            start = end;
        }
        for (pos, &row) in order.iter().enumerate() {
            ranks[c * n + row] = pos + 1;
        }
    }
    RankMatrix { n, d, ranks, ties }
}

/// Entry R_ij when α_i = +1 and n + 1 − R_ij when α_i = −1.
pub fn directional_ranks(ranks: &RankMatrix, alpha: &Direction) -> Result<RankMatrix> {
    if alpha.dim() != ranks.dim() {
        return Err(Error::DimensionMismatch {
            expected: ranks.dim(),
            actual: alpha.dim(),
        });
    }
    let n1 = ranks.n() + 1;
    let mut out = ranks.clone();
    for (c, sign) in alpha.signs().iter().enumerate() {
        if *sign == Sign::Minus {
            for r in &mut out.ranks[c * ranks.n..(c + 1) * ranks.n] {
                *r = n1 - *r;
            }
        }
    }
    Ok(out)
}

/// U_ij = R_ij / (n + 1), stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservations {
    n: usize,
    d: usize,
    u: Vec<f64>,
}

impl PseudoObservations {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.u[col * self.n + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.u[col * self.n..(col + 1) * self.n]
    }

    pub fn to_data_matrix(&self) -> DataMatrix {
        let cols: Vec<Vec<f64>> = (0..self.d).map(|c| self.column(c).to_vec()).collect();
        DataMatrix::from_columns(&cols).expect("pseudo-observations are finite")
    }
}
