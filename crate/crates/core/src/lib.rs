//! Holevo quantity of finite ensembles of quantum states and upper bounds on
//! it: reference-state bounds, metric-divergence bounds, Chebyshev-radius
//! capacity bounds and energy-constrained bounds for oscillator systems.
//!
//! Entropies are computed in nats; use [`LogBase`] to convert for display.

pub mod bounds;
pub mod channel;
pub mod divergence;
pub mod energy;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod sample;
pub mod state;

pub use bounds::{BoundEntry, BoundReport};
pub use divergence::{amd_optimal, chebyshev_radius, mmd_optimal, DivergenceSolution, SolverConfig};
pub use ensemble::{average_state, holevo_chi, metric_divergence, DiscreteEnsemble};
pub use entropy::{
    binary_entropy, g_func, relative_entropy, von_neumann_entropy, ExtendedReal, LogBase,
};
pub use error::{Error, Result};
pub use matrix::{CMatrix, HermitianMatrix};
pub use state::{make_pure_state, trace_distance, DensityMatrix};
