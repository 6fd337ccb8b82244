//! Sign vectors, their index partitions, and the dimension-dependent constants
//! shared by every directional coefficient.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest dimension for which the exact rational constants fit in `i128`.
pub const MAX_EXACT_DIM: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i32(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Direction(format!("sign must be +1 or -1, got {other}"))),
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_i32() as f64
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A direction α ∈ {−1, +1}^d with d ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    signs: Vec<Sign>,
}

impl Direction {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::Dimension(signs.len()));
        }
        Ok(Self { signs })
    }

    pub fn from_i32s(values: &[i32]) -> Result<Self> {
        let signs = values.iter().map(|&v| Sign::from_i32(v)).collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    pub fn all_plus(d: usize) -> Result<Self> {
        Self::new(vec![Sign::Plus; d])
    }

    pub fn all_minus(d: usize) -> Result<Self> {
        Self::new(vec![Sign::Minus; d])
    }

    /// Direction whose i-th sign is −1 exactly when bit i of `mask` is set.
    pub fn from_mask(d: usize, mask: u64) -> Result<Self> {
        let signs = (0..d)
            .map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        Self::new(signs)
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    /// Number of −1 entries.
    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Minus).count()
    }

    pub fn partition(&self) -> SignPartition {
        SignPartition::from_direction(self)
    }

    /// Compact `+`/`-` encoding, e.g. `-++-`.
    pub fn compact(&self) -> String {
        self.signs
            .iter()
            .map(|s| match s {
                Sign::Plus => '+',
                Sign::Minus => '-',
            })
            .collect()
    }

    pub fn to_i32s(&self) -> Vec<i32> {
        self.signs.iter().map(|s| s.as_i32()).collect()
    }
}

impl Neg for &Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        Direction {
            signs: self.signs.iter().map(|s| -*s).collect(),
        }
    }
}

impl Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        -&self
    }
}

/// Tuple form, e.g. `(-1,1,1,-1)`.
impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.signs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s.as_i32())?;
        }
        f.write_str(")")
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Accepts `+-+`, `(-1,1,1)`, `-1,1,1` and whitespace variants.
impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if !trimmed.is_empty() && trimmed.chars().all(|c| c == '+' || c == '-') {
            let signs = trimmed
                .chars()
                .map(|c| if c == '+' { Sign::Plus } else { Sign::Minus })
                .collect();
            return Self::new(signs);
        }
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let signs = inner
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                match tok {
                    "1" | "+1" | "+" => Ok(Sign::Plus),
                    "-1" | "-" => Ok(Sign::Minus),
                    _ => Err(Error::Direction(format!("cannot parse `{s}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }
}

/// Enumerates all 2^d directions, starting from the all-positive one.
pub fn all_directions(d: usize) -> Result<Vec<Direction>> {
    if d < 2 {
        return Err(Error::Dimension(d));
    }
    if d > 20 {
        return Err(Error::TooManyDimensions {
            what: "direction enumeration",
            d,
            limit: 20,
        });
    }
    (0..1u64 << d).map(|mask| Direction::from_mask(d, mask)).collect()
}

/// The split of coordinate indices (0-based) into I = {α_i = −1} and J = {α_i = +1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    pub negatives: Vec<usize>,
    pub positives: Vec<usize>,
    pub dim: usize,
}

impl SignPartition {
    pub fn from_direction(alpha: &Direction) -> Self {
        let (negatives, positives) = (0..alpha.dim()).partition(|&i| alpha.sign(i) == Sign::Minus);
        Self {
            negatives,
            positives,
            dim: alpha.dim(),
        }
    }

    /// Every set I ∪ S for S ⊆ J, paired with |S|. Each set is sorted.
    pub fn expansion_sets(&self) -> Vec<(Vec<usize>, usize)> {
        subsets(&self.positives)
            .into_iter()
            .map(|s| {
                let k = s.len();
                let mut set = self.negatives.clone();
                set.extend(s);
                set.sort_unstable();
                (set, k)
            })
            .collect()
    }
}

/// All subsets of `items`, in bitmask order.
pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    assert!(items.len() < 64, "too many items to enumerate subsets");
    (0..1u64 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect()
        })
        .collect()
}

fn check_exact_dim(d: usize) -> Result<()> {
    if d > MAX_EXACT_DIM {
        return Err(Error::TooManyDimensions {
            what: "exact constants",
            d,
            limit: MAX_EXACT_DIM,
        });
    }
    Ok(())
}

/// 2^d (d+1) / (2^d − (d+1)), the factor in front of every d-dimensional coefficient.
pub fn normalization_constant(d: usize) -> Result<Ratio<i128>> {
    if d < 2 {
        return Err(Error::Dimension(d));
    }
    check_exact_dim(d)?;
    let p = 1i128 << d;
    let k = d as i128 + 1;
    Ok(Ratio::new(p * k, p - k))
}

pub fn normalization_constant_f64(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Dimension(d));
    }
    let p = 2f64.powi(d as i32);
    let k = d as f64 + 1.0;
    Ok(p * k / (p - k))
}

/// (2^k − (k+1)) / (2^k (k+1)): the reciprocal of the normalization constant,
/// and zero for k ∈ {0, 1}.
pub fn subset_weight(k: usize) -> Result<Ratio<i128>> {
    check_exact_dim(k)?;
    let p = 1i128 << k;
    let q = k as i128 + 1;
    Ok(Ratio::new(p - q, p * q))
}

pub fn subset_weight_f64(k: usize) -> f64 {
    let p = 2f64.powi(k as i32);
    let q = k as f64 + 1.0;
    (p - q) / (p * q)
}
