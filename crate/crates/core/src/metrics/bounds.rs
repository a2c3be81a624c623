//! Empirical checks of the state-divergence bounds.
//!
//! For two inputs `u_i`, `u_j` with `δ̄ = max_t |u_i(t) − u_j(t)|` and state
//! distance `ε_t = ‖X_i(t) − X_j(t)‖`:
//!
//! ```text
//! ESN:  ε_t ≤ L δ̄ ‖W_in‖ (1 − (Lρ)^{t+1}) / (1 − Lρ)
//! TDR:  ε_t ≤ α δ̄ L √N (1 − (βL)^{⌊t/N⌋+1}) / (1 − βL)
//! ```
//!
//! A [`BoundRatioSeries`] holds `ε_t / bound_t`; values at most 1 certify the
//! inequality on that pair.

use std::fmt;

use crate::error::{Error, Result};
use crate::reservoir::{EsnParams, Reservoir, TdrParams};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReservoirKind {
    Esn,
    Tdr,
}

impl fmt::Display for ReservoirKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReservoirKind::Esn => "esn",
            ReservoirKind::Tdr => "tdr",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRatioSeries {
    pub kind: ReservoirKind,
    /// Dataset indices of the two signals, when known.
    pub pair: Option<(usize, usize)>,
    pub max_input_gap: f64,
    pub distances: Vec<f64>,
    pub bounds: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl BoundRatioSeries {
    pub fn with_pair(mut self, i: usize, j: usize) -> Self {
        self.pair = Some((i, j));
        self
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.ratios.iter().copied().enumerate()
    }
}

/// Partial geometric sum `Σ_{r=0}^{terms-1} q^r`.
fn geometric(q: f64, terms: usize) -> f64 {
    if q == 0.0 {
        return 1.0;
    }
    (1.0 - q.powi(terms as i32)) / (1.0 - q)
}

/// Right-hand side of the ESN bound at time `t` (0-based).
pub fn esn_bound(params: &EsnParams, max_input_gap: f64, t: usize) -> f64 {
    let l = params.activation().lipschitz();
    let w_in = params.input_weights().norm();
    l * max_input_gap * w_in * geometric(l * params.spectral_radius(), t + 1)
}

/// Right-hand side of the TDR bound at time `t` (0-based).
pub fn tdr_bound(params: &TdrParams, max_input_gap: f64, t: usize) -> f64 {
    let l = params.activation().lipschitz();
    let n = params.node_count();
    params.input_gain() * max_input_gap * l * (n as f64).sqrt() * geometric(params.attenuation() * l, t / n + 1)
}

fn max_gap(u_i: &Signal, u_j: &Signal) -> Result<f64> {
    if u_i.len() != u_j.len() {
        return Err(Error::DimensionMismatch { what: "signal length", expected: u_i.len(), actual: u_j.len() });
    }
    Ok(u_i.iter().zip(u_j.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

fn ratio_series<R: Reservoir>(
    kind: ReservoirKind,
    params: &R,
    u_i: &Signal,
    u_j: &Signal,
    bound: impl Fn(f64, usize) -> f64,
) -> Result<BoundRatioSeries> {
    let gap = max_gap(u_i, u_j)?;
    let xi = params.drive(u_i);
    let xj = params.drive(u_j);
    let distances: Vec<f64> = (0..u_i.len())
        .map(|t| {
            xi.state(t)
                .iter()
                .zip(xj.state(t))
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let bounds: Vec<f64> = (0..u_i.len()).map(|t| bound(gap, t)).collect();
    let ratios = distances
        .iter()
        .zip(&bounds)
        .map(|(&e, &b)| if b == 0.0 && e == 0.0 { 0.0 } else { e / b })
        .collect();
    Ok(BoundRatioSeries { kind, pair: None, max_input_gap: gap, distances, bounds, ratios })
}

/// Drive an ESN with both signals and divide each state distance by its bound.
pub fn esn_bound_ratio(params: &EsnParams, u_i: &Signal, u_j: &Signal) -> Result<BoundRatioSeries> {
    ratio_series(ReservoirKind::Esn, params, u_i, u_j, |gap, t| esn_bound(params, gap, t))
}

/// Drive a TDR with both signals and divide each state distance by its bound.
pub fn tdr_bound_ratio(params: &TdrParams, u_i: &Signal, u_j: &Signal) -> Result<BoundRatioSeries> {
    ratio_series(ReservoirKind::Tdr, params, u_i, u_j, |gap, t| tdr_bound(params, gap, t))
}
