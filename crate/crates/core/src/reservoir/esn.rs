//! Echo state networks: `X(t) = f(W_in u(t) + W_res X(t-1))`, `X(-1) = 0`.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng;

use super::spectral::spectral_radius;
use super::states::{StateMatrix, StateTrajectory};
use super::Reservoir;
use crate::activation::Activation;
use crate::error::{invalid, Error, Result};
use crate::signal::{SampleTimes, Signal};

const MAX_REDRAWS: usize = 10_000;

/// Fixed weights of an echo state network.
///
/// Node `m` feeds node `n` with weight `W_res[(n, m)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EsnParams {
    input_weights: DVector<f64>,
    reservoir_weights: DMatrix<f64>,
    activation: Activation,
    spectral_radius: f64,
}

impl EsnParams {
    /// Validate explicit weights. Requires `ρ(W_res) · L < 1`.
    pub fn new(
        input_weights: DVector<f64>,
        reservoir_weights: DMatrix<f64>,
        activation: Activation,
    ) -> Result<Self> {
        let n = input_weights.len();
        if n == 0 {
            return Err(invalid("ESN needs at least one node"));
        }
        if reservoir_weights.nrows() != n || reservoir_weights.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "reservoir weight matrix size",
                expected: n,
                actual: reservoir_weights.nrows().max(reservoir_weights.ncols()),
            });
        }
        if input_weights.iter().chain(reservoir_weights.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("ESN weights must be finite"));
        }
        let rho = spectral_radius(&reservoir_weights)?;
        Self::checked(input_weights, reservoir_weights, activation, rho)
    }

    fn checked(
        input_weights: DVector<f64>,
        reservoir_weights: DMatrix<f64>,
        activation: Activation,
        spectral_radius: f64,
    ) -> Result<Self> {
        if spectral_radius * activation.lipschitz() >= 1.0 {
            return Err(invalid(format!(
                "spectral radius {spectral_radius} times Lipschitz constant {} must be < 1",
                activation.lipschitz()
            )));
        }
        Ok(EsnParams { input_weights, reservoir_weights, activation, spectral_radius })
    }

    pub fn input_weights(&self) -> &DVector<f64> {
        &self.input_weights
    }

    pub fn reservoir_weights(&self) -> &DMatrix<f64> {
        &self.reservoir_weights
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    fn step(&self, u: f64, prev: &DVector<f64>, next: &mut DVector<f64>) {
        next.copy_from(&self.input_weights);
        next.gemv(1.0, &self.reservoir_weights, prev, u);
        let f = self.activation;
        next.apply(|v| *v = f.apply(*v));
    }
}

/// Random sparse ESN with constant input weights `[α, …, α]ᵀ`.
///
/// Exactly `round(density · N²)` (at least one) entries of `W_res` are
/// nonzero, at uniformly random positions, with values uniform on `[-1, 1]`.
/// The draw is then rescaled once so that `ρ(W_res) = spectral_target`.
/// Draws whose sparsity pattern is acyclic (hence nilpotent, `ρ = 0`) are
/// redrawn.
pub fn make_esn<R: Rng + ?Sized>(
    node_count: usize,
    input_gain: f64,
    density: f64,
    spectral_target: f64,
    activation: Activation,
    rng: &mut R,
) -> Result<EsnParams> {
    if node_count < 1 {
        return Err(invalid("ESN needs at least one node"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(invalid(format!("density must be in (0, 1], got {density}")));
    }
    if !input_gain.is_finite() {
        return Err(invalid("input gain must be finite"));
    }
    if !(spectral_target.is_finite() && spectral_target > 0.0) {
        return Err(invalid(format!("spectral target must be positive, got {spectral_target}")));
    }
    if spectral_target * activation.lipschitz() >= 1.0 {
        return Err(invalid(format!(
            "spectral target {spectral_target} must be below 1/L = {}",
            1.0 / activation.lipschitz()
        )));
    }

    let n = node_count;
    let cells = n * n;
    let nonzeros = ((density * cells as f64).round() as usize).clamp(1, cells);

    for _ in 0..MAX_REDRAWS {
        let mut w = DMatrix::zeros(n, n);
        for cell in index::sample(rng, cells, nonzeros) {
            w[(cell / n, cell % n)] = rng.random_range(-1.0..=1.0);
        }
        if has_acyclic_pattern(&w) {
            continue;
        }
        let rho = spectral_radius(&w)?;
        if rho <= f64::MIN_POSITIVE {
            continue;
        }
        w *= spectral_target / rho;
        let w_in = DVector::from_element(n, input_gain);
        return EsnParams::checked(w_in, w, activation, spectral_target);
    }
    Err(Error::Numerical(format!(
        "no non-nilpotent reservoir found after {MAX_REDRAWS} draws (N={n}, density={density})"
    )))
}

/// True when the directed graph of nonzero entries has no cycle, which makes
/// the matrix nilpotent.
fn has_acyclic_pattern(w: &DMatrix<f64>) -> bool {
    let n = w.nrows();
    let mut indegree = vec![0usize; n];
    for m in 0..n {
        for k in 0..n {
            if w[(k, m)] != 0.0 {
                indegree[k] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&k| indegree[k] == 0).collect();
    let mut removed = 0;
    while let Some(m) = queue.pop() {
        removed += 1;
        for k in 0..n {
            if w[(k, m)] != 0.0 {
                indegree[k] -= 1;
                if indegree[k] == 0 {
                    queue.push(k);
                }
            }
        }
    }
    removed == n
}

/// Drive an ESN from the zero state over every sample of `u`.
pub fn drive_esn(params: &EsnParams, u: &Signal) -> StateTrajectory {
    let n = params.node_count();
    let mut out = StateMatrix::zeros(u.len(), n);
    let mut prev = DVector::zeros(n);
    let mut next = DVector::zeros(n);
    for (t, &ut) in u.iter().enumerate() {
        params.step(ut, &prev, &mut next);
        out.row_mut(t).copy_from_slice(next.as_slice());
        std::mem::swap(&mut prev, &mut next);
    }
    StateTrajectory::new(out)
}

impl Reservoir for EsnParams {
    fn node_count(&self) -> usize {
        self.input_weights.len()
    }

    fn activation(&self) -> Activation {
        self.activation
    }

    fn drive(&self, u: &Signal) -> StateTrajectory {
        drive_esn(self, u)
    }

    fn drive_sampled(&self, u: &Signal, omega: &SampleTimes) -> Result<StateMatrix> {
        omega.check_within(u.len())?;
        let n = self.node_count();
        let mut out = StateMatrix::zeros(omega.len(), n);
        let mut prev = DVector::zeros(n);
        let mut next = DVector::zeros(n);
        let mut wanted = omega.iter().enumerate().peekable();
        for (t, &ut) in u.iter().enumerate().take(omega.last() + 1) {
            self.step(ut, &prev, &mut next);
            if let Some(&(i, _)) = wanted.peek().filter(|&&(_, s)| s == t) {
                out.row_mut(i).copy_from_slice(next.as_slice());
                wanted.next();
            }
            std::mem::swap(&mut prev, &mut next);
        }
        Ok(out)
    }
}
