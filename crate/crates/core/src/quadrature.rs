//! Tensor-product Gauss–Legendre rules on the unit cube.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Smallest accepted number of nodes per dimension.
pub const MIN_NODES: usize = 8;

/// One-dimensional Gauss–Legendre rule mapped to [0, 1], applied in every
/// coordinate. Polynomials of degree ≤ 2N − 1 in each variable are integrated
/// exactly.
#[derive(Debug, Clone)]
pub struct TensorGaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TensorGaussLegendre {
    pub fn new(nodes_per_dim: usize) -> Result<Self> {
        if nodes_per_dim < MIN_NODES {
            return Err(Error::Parameter(format!(
                "quadrature needs at least {MIN_NODES} nodes per dimension, got {nodes_per_dim}"
            )));
        }
        let rule = GaussLegendre::new(NonZeroUsize::new(nodes_per_dim).expect("checked above"));
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        Ok(Self { nodes, weights })
    }

    pub fn nodes_per_dim(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_{[0,1]^dim} f. The outermost coordinate is split across threads and
    /// the partial sums are combined in a fixed order, so the result does not
    /// depend on the thread count.
    pub fn integrate<F>(&self, dim: usize, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let axes: Vec<usize> = (0..dim).collect();
        self.integrate_axes(&vec![0.0; dim], &axes, f)
    }

    /// Integrates over the coordinates listed in `axes`, each over [0, 1],
    /// while every other coordinate keeps its value from `base`.
    pub fn integrate_axes<F>(&self, base: &[f64], axes: &[usize], f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let Some((&first, rest)) = axes.split_first() else {
            return f(base);
        };
        let partials: Vec<f64> = (0..self.nodes.len())
            .into_par_iter()
            .map(|k| {
                let mut point = base.to_vec();
                point[first] = self.nodes[k];
                self.weights[k] * self.inner(&f, &mut point, rest)
            })
            .collect();
        partials.into_iter().collect::<NeumaierSum>().value()
    }

    fn inner<F>(&self, f: &F, point: &mut [f64], axes: &[usize]) -> f64
    where
        F: Fn(&[f64]) -> f64,
    {
        let Some((&axis, rest)) = axes.split_first() else {
            return f(point);
        };
        let mut acc = NeumaierSum::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            point[axis] = x;
            acc.add(w * self.inner(f, point, rest));
        }
        acc.value()
    }
}
