//! Directional ρ-coefficients of multivariate dependence.
//!
//! For a d-dimensional copula C and a sign vector α ∈ {−1, +1}^d, the
//! directional coefficient ρ^α measures how much more often the coordinates
//! move jointly in direction α than they would under independence. With
//! d = 2 and α = (1, 1) it is Spearman's ρ.
//!
//! The crate provides
//!
//! - population values for product, comonotone, FGM and Clayton copulas
//!   ([`exact`]), by closed form, quadrature, Monte Carlo, or the
//!   decomposition into lower-orthant coefficients of the margins;
//! - rank-based estimators from data ([`estimator`], [`process`]);
//! - a seeded replication harness for simulation studies ([`simulation`]);
//! - CSV ingestion and report output used by the `dirrho` binary ([`io`]).
//!
//! Rank convention: the directional rank of observation j in coordinate i is
//! R_ij when α_i = +1 and n + 1 − R_ij when α_i = −1. Under this convention the
//! estimator for α converges to ρ^α.

pub mod copula;
pub mod data;
pub mod direction;
pub mod error;
pub mod estimate;
pub mod estimator;
pub mod exact;
pub mod io;
pub mod process;
pub mod quadrature;
pub mod seed;
pub mod simulation;
pub mod sum;

pub use copula::{survival_reflect, CopulaFamily, CopulaModel};
pub use data::{compute_ranks, directional_ranks, DataMatrix, PseudoObservations, RankMatrix, TiePolicy};
pub use direction::{all_directions, normalization_constant, Direction, Sign, SignPartition};
pub use error::{Error, Result};
pub use estimate::{CoefficientEstimate, Method};
pub use exact::IntegratorConfig;
