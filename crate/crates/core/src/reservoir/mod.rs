//! Reservoir construction and simulation.

mod esn;
mod mask;
mod spectral;
mod states;
mod tdr;

pub use esn::{drive_esn, make_esn, EsnParams};
pub use mask::{apply_mask, MultiplexMask};
pub use spectral::spectral_radius;
pub use states::{sample_states, StateMatrix, StateTrajectory};
pub use tdr::{drive_tdr, make_tdr, TdrParams};

use crate::activation::Activation;
use crate::error::Result;
use crate::signal::{SampleTimes, Signal};

/// A fixed-weight recurrent system driven by a scalar signal from the zero state.
pub trait Reservoir {
    fn node_count(&self) -> usize;

    fn activation(&self) -> Activation;

    /// Full trajectory `X(0), …, X(T-1)`.
    fn drive(&self, u: &Signal) -> StateTrajectory;

    /// Only the states at `omega`, without materialising the full trajectory.
    fn drive_sampled(&self, u: &Signal, omega: &SampleTimes) -> Result<StateMatrix>;
}

/// Either reservoir topology, for code that picks one at runtime.
#[derive(Debug, Clone)]
pub enum AnyReservoir {
    Esn(EsnParams),
    Tdr(TdrParams),
}

impl Reservoir for AnyReservoir {
    fn node_count(&self) -> usize {
        match self {
            AnyReservoir::Esn(p) => p.node_count(),
            AnyReservoir::Tdr(p) => p.node_count(),
        }
    }

    fn activation(&self) -> Activation {
        match self {
            AnyReservoir::Esn(p) => p.activation(),
            AnyReservoir::Tdr(p) => p.activation(),
        }
    }

    fn drive(&self, u: &Signal) -> StateTrajectory {
        match self {
            AnyReservoir::Esn(p) => p.drive(u),
            AnyReservoir::Tdr(p) => p.drive(u),
        }
    }

    fn drive_sampled(&self, u: &Signal, omega: &SampleTimes) -> Result<StateMatrix> {
        match self {
            AnyReservoir::Esn(p) => p.drive_sampled(u, omega),
            AnyReservoir::Tdr(p) => p.drive_sampled(u, omega),
        }
    }
}
