//! Reservoir computing classifiers.
//!
//! Echo state networks and time-delay reservoirs turn a scalar input stream
//! into a trajectory of high-dimensional states. Two readouts classify those
//! trajectories:
//!
//! * [`readout::linear`]: per-time ridge-regression output weights whose
//!   outputs are summed over the sampled times.
//! * [`readout::pca`]: no trained weights at all; each class is summarised
//!   by the leading principal components of its squared state norms, and a
//!   new signal goes to the class whose subspace leaves the smallest residual.
//!
//! [`metrics`] provides the separation ratio and empirical checks of the
//! state-divergence bounds for both topologies.

pub mod activation;
mod codec;
pub mod data;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod readout;
pub mod reservoir;
pub mod rng;
pub mod signal;

pub use activation::{activate, Activation};
pub use dataset::{ClassPartition, LabeledDataset};
pub use error::{Error, Result};
pub use rng::{derive_seed, seeded_rng, SeededRng};
pub use signal::{SampleTimes, Signal};
