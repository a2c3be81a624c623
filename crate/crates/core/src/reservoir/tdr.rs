//! Time-delay reservoirs: one nonlinear head node feeding a delay line of
//! `N - 1` virtual nodes.
//!
//! ```text
//! X_0(t) = f(α u(t) + β X_{N-1}(t-1))
//! X_n(t) = X_{n-1}(t-1),   n = 1..N-1
//! ```
//!
//! Since `X_{N-1}(t-1) = X_0(t-N)`, the whole trajectory is determined by the
//! head series `h(t) = X_0(t)`, and `X_n(t) = h(t-n)` (zero for `t < n`).
//! Sampled drives therefore cost `O(T + N|Ω|)`.

use super::states::{StateMatrix, StateTrajectory};
use super::Reservoir;
use crate::activation::Activation;
use crate::error::{invalid, Result};
use crate::signal::{SampleTimes, Signal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdrParams {
    node_count: usize,
    input_gain: f64,
    attenuation: f64,
    activation: Activation,
}

/// Validate a TDR parameter set. Requires `N ≥ 2`, `α > 0`, `0 ≤ β` and `βL < 1`.
pub fn make_tdr(
    node_count: usize,
    input_gain: f64,
    attenuation: f64,
    activation: Activation,
) -> Result<TdrParams> {
    if node_count < 2 {
        return Err(invalid("TDR needs at least one virtual node (N >= 2)"));
    }
    if !(input_gain.is_finite() && input_gain > 0.0) {
        return Err(invalid(format!("input gain must be positive, got {input_gain}")));
    }
    if !(attenuation.is_finite() && attenuation >= 0.0) {
        return Err(invalid(format!("attenuation must be non-negative, got {attenuation}")));
    }
    if attenuation * activation.lipschitz() >= 1.0 {
        return Err(invalid(format!(
            "attenuation {attenuation} times Lipschitz constant {} must be < 1",
            activation.lipschitz()
        )));
    }
    Ok(TdrParams { node_count, input_gain, attenuation, activation })
}

impl TdrParams {
    pub fn input_gain(&self) -> f64 {
        self.input_gain
    }

    pub fn attenuation(&self) -> f64 {
        self.attenuation
    }

    /// Head-node series `X_0(t)` for every `t`.
    pub fn head_series(&self, u: &[f64]) -> Vec<f64> {
        let n = self.node_count;
        let f = self.activation;
        let mut head = Vec::with_capacity(u.len());
        for (t, &ut) in u.iter().enumerate() {
            let fed_back = if t >= n { head[t - n] } else { 0.0 };
            head.push(f.apply(self.input_gain * ut + self.attenuation * fed_back));
        }
        head
    }

    fn fill_row(&self, head: &[f64], t: usize, row: &mut [f64]) {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = if k <= t { head[t - k] } else { 0.0 };
        }
    }
}

pub fn drive_tdr(params: &TdrParams, u: &Signal) -> StateTrajectory {
    let head = params.head_series(u);
    let mut out = StateMatrix::zeros(u.len(), params.node_count);
    for t in 0..u.len() {
        params.fill_row(&head, t, out.row_mut(t));
    }
    StateTrajectory::new(out)
}

impl Reservoir for TdrParams {
    fn node_count(&self) -> usize {
        self.node_count
    }

    fn activation(&self) -> Activation {
        self.activation
    }

    fn drive(&self, u: &Signal) -> StateTrajectory {
        drive_tdr(self, u)
    }

    fn drive_sampled(&self, u: &Signal, omega: &SampleTimes) -> Result<StateMatrix> {
        omega.check_within(u.len())?;
        let head = self.head_series(&u[..=omega.last()]);
        let mut out = StateMatrix::zeros(omega.len(), self.node_count);
        for (i, t) in omega.iter().enumerate() {
            self.fill_row(&head, t, out.row_mut(i));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::states::sample_states;
    use crate::rng::seeded_rng;
    use rand::Rng;
    use std::collections::VecDeque;

    /// Shift-register simulation of the node update rule, one tick at a time.
    fn shift_register(p: &TdrParams, u: &[f64]) -> Vec<Vec<f64>> {
        let n = p.node_count();
        let f = p.activation();
        let mut nodes: VecDeque<f64> = VecDeque::from(vec![0.0; n]);
        let mut out = Vec::new();
        for &ut in u {
            let last = *nodes.back().unwrap();
            let head = f.apply(p.input_gain() * ut + p.attenuation() * last);
            nodes.pop_back();
            nodes.push_front(head);
            out.push(nodes.iter().copied().collect());
        }
        out
    }

    #[test]
    fn validation() {
        assert!(make_tdr(100, 0.5, 0.49995, Activation::Sine).is_ok());
        assert!(make_tdr(10, 0.5, 1.0, Activation::Sine).is_err());
        assert!(make_tdr(1, 0.5, 0.5, Activation::Sine).is_err());
        assert!(make_tdr(10, 0.0, 0.5, Activation::Sine).is_err());
        assert!(make_tdr(10, 0.5, -0.5, Activation::Sine).is_err());
        assert!(make_tdr(10, 0.5, 3.9, Activation::Logistic).is_ok());
    }

    #[test]
    fn zero_input() {
        let p = make_tdr(5, 0.5, 0.4, Activation::Sine).unwrap();
        let tr = drive_tdr(&p, &Signal::new(vec![0.0; 17]).unwrap());
        assert!(tr.as_matrix().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_node_delay() {
        let (alpha, beta) = (0.5, 0.3);
        let p = make_tdr(2, alpha, beta, Activation::Sine).unwrap();
        let u = [0.8, 0.2, 0.6];
        let tr = drive_tdr(&p, &Signal::new(u.to_vec()).unwrap());
        assert_eq!(tr.state(0), &[(alpha * u[0]).sin(), 0.0]);
        assert_eq!(tr.state(1)[1], tr.state(0)[0]);
        // head at t=2 sees X_1(1) = X_0(0)
        let expected = (alpha * u[2] + beta * tr.state(0)[0]).sin();
        assert_eq!(tr.state(2)[0], expected);
    }

    #[test]
    fn matches_shift_register() {
        let mut rng = seeded_rng(21);
        let p = make_tdr(4, 0.7, 0.6, Activation::Sine).unwrap();
        let u: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let tr = drive_tdr(&p, &Signal::new(u.clone()).unwrap());
        for (t, row) in shift_register(&p, &u).iter().enumerate() {
            assert_eq!(tr.state(t), row.as_slice(), "t = {t}");
        }
    }

    #[test]
    fn delay_identity() {
        let mut rng = seeded_rng(22);
        let p = make_tdr(7, 0.9, 0.8, Activation::Tanh).unwrap();
        let u = Signal::new((0..50).map(|_| rng.random::<f64>()).collect()).unwrap();
        let tr = drive_tdr(&p, &u);
        for t in 0..50 {
            for n in 0..=t.min(6) {
                assert_eq!(tr.state(t)[n], tr.state(t - n)[0]);
            }
        }
    }

    #[test]
    fn sampled_matches_full() {
        let mut rng = seeded_rng(23);
        let p = make_tdr(6, 0.5, 0.45, Activation::Sine).unwrap();
        let u = Signal::new((0..60).map(|_| rng.random::<f64>()).collect()).unwrap();
        let omega = SampleTimes::every(5, 12).unwrap();
        let full = sample_states(&p.drive(&u), &omega).unwrap();
        assert_eq!(p.drive_sampled(&u, &omega).unwrap(), full);
    }
}
