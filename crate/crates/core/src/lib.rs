//! Exponential random graphs with energy `β Σ d_i²` at fixed node and edge
//! counts.
//!
//! * [`graph`]: the simple-graph value type, degree and cut bookkeeping.
//! * [`degree_law`]: the tilted degree law, its calibration and conditioned
//!   sampling, and the degree concentration report.
//! * [`ergm`]: the Metropolis chain over graphs and an exact enumeration oracle.
//! * [`config_model`]: stub pairing, the erased model and simple-graph rejection.
//! * [`cut_spectral`]: exact expansion and conductance, second eigenvalues,
//!   Cheeger checks and cut profiles.
//! * [`resilience`]: edge-failure percolation and failure thresholds.
//! * [`report`]: deterministic JSON/CSV rendering.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

pub mod config_model;
pub mod cut_spectral;
pub mod degree_law;
pub mod ergm;
mod error;
pub mod families;
pub mod graph;
pub mod linalg;
pub mod report;
pub mod resilience;
pub mod rng;
mod scalar;
pub mod stats;
pub mod union_find;

pub use error::{Error, Result};
pub use graph::{CutStats, DegreeSequence, Graph};
pub use scalar::{log_sum_exp, Scalar};

pub type DegreeLaw = degree_law::DegreeLaw<f64>;
pub type DegreeLaw32 = degree_law::DegreeLaw<f32>;
pub type Moments = degree_law::Moments<f64>;

pub type SymmetricEigen = linalg::SymmetricEigen<f64>;
pub type SpectralReport = cut_spectral::SpectralReport<f64>;
pub type Thresholds = resilience::Thresholds<f64>;
