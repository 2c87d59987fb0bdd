//! One-dimensional discrete-time quantum walks driven by a time-dependent coin
//! whose angle follows a two-state Markov chain.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: the two-component walker state and the coin/shift unitaries.
//! - [`disorder`]: correlated binary chains and the coin-angle series built on
//!   top of them.
//! - [`observables`]: spreading, entanglement, dissimilarity against a
//!   classical walk, interference and asymmetry diagnostics.
//! - [`ensemble`]: seeded Monte Carlo ensembles with deterministic aggregation.
//! - [`io`]: CSV and JSON writers with fixed schemas.

pub mod disorder;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod lattice;
pub mod observables;

pub use disorder::{AngleSequence, DisorderParams};
pub use ensemble::{EnsembleConfig, EnsembleResult, Observable, ObservableSeries};
pub use error::{Result, WalkError};
pub use lattice::{SpinorField, WalkConfig};
pub use observables::ReducedCoinDensity;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex<f64>;
