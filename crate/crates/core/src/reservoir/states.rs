use crate::error::{Error, Result};
use crate::signal::SampleTimes;

/// Dense row-major real matrix; row `i` holds one reservoir state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl StateMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        StateMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "state matrix payload",
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(StateMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "state matrix row",
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(StateMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }
}

/// Reservoir states `X(t)` for every `t` in `0..time_len`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    states: StateMatrix,
}

impl StateTrajectory {
    pub(crate) fn new(states: StateMatrix) -> Self {
        StateTrajectory { states }
    }

    pub fn time_len(&self) -> usize {
        self.states.rows()
    }

    pub fn node_count(&self) -> usize {
        self.states.cols()
    }

    /// State vector `X(t)` (0-based `t`).
    pub fn state(&self, t: usize) -> &[f64] {
        self.states.row(t)
    }

    pub fn as_matrix(&self) -> &StateMatrix {
        &self.states
    }

    pub fn into_matrix(self) -> StateMatrix {
        self.states
    }
}

/// Select the rows of `traj` at the times in `omega`.
pub fn sample_states(traj: &StateTrajectory, omega: &SampleTimes) -> Result<StateMatrix> {
    omega.check_within(traj.time_len())?;
    let n = traj.node_count();
    let mut out = StateMatrix::zeros(omega.len(), n);
    for (i, t) in omega.iter().enumerate() {
        out.row_mut(i).copy_from_slice(traj.state(t));
    }
    Ok(out)
}
