//! Readouts mapping sampled reservoir states to class decisions.

pub mod linear;
pub mod pca;

pub use linear::{classify_linear, ridge_objective, train_linear, LinearDecision, LinearReadoutModel};
pub use pca::{
    classify_pca, norm_vector, principal_subspace, train_pca, Centering, NormVector,
    PcaDecision, PcaReadoutModel, ProjectorBank,
};

use crate::dataset::ClassPartition;
use crate::error::{Error, Result};
use crate::reservoir::StateMatrix;
use crate::signal::SampleTimes;

/// Index of the largest entry, smallest index on ties.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Index of the smallest entry, smallest index on ties.
pub(crate) fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// Check that every training matrix is `|Ω| × N` for a common `N`; return `N`.
pub(crate) fn check_states(
    states: &[StateMatrix],
    partition: &ClassPartition,
    omega: &SampleTimes,
) -> Result<usize> {
    if states.len() != partition.total() {
        return Err(Error::DimensionMismatch {
            what: "training signals vs partition size",
            expected: partition.total(),
            actual: states.len(),
        });
    }
    let n = states[0].cols();
    for s in states {
        if s.rows() != omega.len() {
            return Err(Error::DimensionMismatch {
                what: "sampled times",
                expected: omega.len(),
                actual: s.rows(),
            });
        }
        if s.cols() != n {
            return Err(Error::DimensionMismatch { what: "node count", expected: n, actual: s.cols() });
        }
    }
    if n == 0 {
        return Err(Error::InvalidParameter("states have zero nodes".into()));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_go_to_smallest_index() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmin(&[2.0, 0.5, 0.5, 4.0]), 1);
        assert_eq!(argmax(&[0.0, 0.0]), 0);
    }
}
