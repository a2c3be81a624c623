//! Trained linear output weights.
//!
//! For each sampled time `t`, `W_out(t)` is the ridge-regression map from the
//! training states `X^{(j)}(t)` to the one-hot class indicators `d_j`:
//!
//! ```text
//! W_out(t) = argmin_W  Σ_j ‖d_j − W X^{(j)}(t)‖² + λ ‖W‖_F²
//!          = D Xᵀ (X Xᵀ + λ I_N)⁻¹
//! ```
//!
//! A test signal is scored with `D = Σ_t ω_t W_out(t) X(t)` and assigned to
//! the arg-max class (smallest index on ties).

use std::io::{Read, Write};

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;

use super::{argmax, check_states};
use crate::codec::{LeReader, LeWriter};
use crate::dataset::ClassPartition;
use crate::error::{invalid, Error, Result};
use crate::reservoir::StateMatrix;
use crate::signal::SampleTimes;

const MAGIC: &[u8; 8] = b"RCLINRD1";

#[derive(Debug, Clone, PartialEq)]
pub struct LinearReadoutModel {
    weights: Vec<DMatrix<f64>>,
    omega: SampleTimes,
    class_count: usize,
    node_count: usize,
    regularization: f64,
    classification_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearDecision {
    pub class: usize,
    pub scores: Vec<f64>,
}

/// Fit one ridge map per sampled time.
///
/// `sampled_states[j]` holds the `|Ω| × N` states of training signal `j`;
/// `partition` assigns each `j` to a class.
pub fn train_linear(
    sampled_states: &[StateMatrix],
    partition: &ClassPartition,
    omega: &SampleTimes,
    lambda: f64,
) -> Result<LinearReadoutModel> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid(format!("regularization must be positive, got {lambda}")));
    }
    let node_count = check_states(sampled_states, partition, omega)?;
    let class_count = partition.class_count();
    let labels = partition.labels();
    let j_count = sampled_states.len();

    let weights = (0..omega.len())
        .into_par_iter()
        .map(|i| {
            let x = DMatrix::from_fn(node_count, j_count, |n, j| sampled_states[j].get(i, n));
            // (K×N)ᵀ right-hand side: column k is the sum of class-k states
            let mut rhs = DMatrix::zeros(node_count, class_count);
            for (j, &k) in labels.iter().enumerate() {
                let mut col = rhs.column_mut(k);
                col += x.column(j);
            }
            let mut gram = &x * x.transpose();
            for n in 0..node_count {
                gram[(n, n)] += lambda;
            }
            let chol = Cholesky::new(gram).ok_or_else(|| {
                Error::Numerical(format!(
                    "ridge system at sample {i} is not numerically positive definite (lambda = {lambda})"
                ))
            })?;
            Ok(chol.solve(&rhs).transpose())
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LinearReadoutModel {
        weights,
        omega: omega.clone(),
        class_count,
        node_count,
        regularization: lambda,
        classification_weights: vec![1.0; omega.len()],
    })
}

/// Score `sampled_states` (`|Ω| × N`) and pick the highest-scoring class.
pub fn classify_linear(model: &LinearReadoutModel, sampled_states: &StateMatrix) -> Result<LinearDecision> {
    if sampled_states.rows() != model.omega.len() {
        return Err(Error::DimensionMismatch {
            what: "sampled times",
            expected: model.omega.len(),
            actual: sampled_states.rows(),
        });
    }
    if sampled_states.cols() != model.node_count {
        return Err(Error::DimensionMismatch {
            what: "node count",
            expected: model.node_count,
            actual: sampled_states.cols(),
        });
    }
    let mut scores = DVector::zeros(model.class_count);
    for (i, w) in model.weights.iter().enumerate() {
        let x = DVector::from_column_slice(sampled_states.row(i));
        scores.gemv(model.classification_weights[i], w, &x, 1.0);
    }
    let scores: Vec<f64> = scores.iter().copied().collect();
    Ok(LinearDecision { class: argmax(&scores), scores })
}

/// `Σ_j ‖d_j − W x_j‖² + λ‖W‖_F²` for states `x` (N×J) with labels.
pub fn ridge_objective(w: &DMatrix<f64>, x: &DMatrix<f64>, labels: &[usize], lambda: f64) -> f64 {
    let pred = w * x;
    let mut loss = 0.0;
    for (j, &k) in labels.iter().enumerate() {
        for c in 0..pred.nrows() {
            let target = if c == k { 1.0 } else { 0.0 };
            loss += (target - pred[(c, j)]).powi(2);
        }
    }
    loss + lambda * w.norm_squared()
}

impl LinearReadoutModel {
    /// Assemble a model from explicit weights (one `K × N` matrix per sampled time).
    pub fn from_parts(
        weights: Vec<DMatrix<f64>>,
        omega: SampleTimes,
        regularization: f64,
    ) -> Result<Self> {
        if weights.len() != omega.len() {
            return Err(Error::DimensionMismatch {
                what: "weight matrices per sampled time",
                expected: omega.len(),
                actual: weights.len(),
            });
        }
        let (k, n) = weights[0].shape();
        if weights.iter().any(|w| w.shape() != (k, n)) {
            return Err(invalid("all weight matrices must share one shape"));
        }
        if weights.iter().any(|w| w.iter().any(|v| !v.is_finite())) {
            return Err(invalid("weights must be finite"));
        }
        let len = omega.len();
        Ok(LinearReadoutModel {
            weights,
            omega,
            class_count: k,
            node_count: n,
            regularization,
            classification_weights: vec![1.0; len],
        })
    }

    pub fn with_classification_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.omega.len() {
            return Err(Error::DimensionMismatch {
                what: "classification weights",
                expected: self.omega.len(),
                actual: weights.len(),
            });
        }
        self.classification_weights = weights;
        Ok(self)
    }

    pub fn weights(&self) -> &[DMatrix<f64>] {
        &self.weights
    }

    pub fn omega(&self) -> &SampleTimes {
        &self.omega
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn regularization(&self) -> f64 {
        self.regularization
    }

    pub fn classification_weights(&self) -> &[f64] {
        &self.classification_weights
    }

    /// Binary container, all fields little-endian:
    ///
    /// ```text
    /// magic     8 bytes  "RCLINRD1"
    /// K         u32      class count
    /// N         u32      node count
    /// |Ω|       u32      number of sampled times
    /// reserved  u32      0
    /// λ         f64
    /// Ω         |Ω| × u64, 0-based time indices
    /// ω_t       |Ω| × f64
    /// W_out(t)  |Ω| blocks of K×N f64, row-major, in Ω order
    /// ```
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = LeWriter::new(out);
        w.bytes(MAGIC)?;
        w.u32(self.class_count as u32)?;
        w.u32(self.node_count as u32)?;
        w.u32(self.omega.len() as u32)?;
        w.u32(0)?;
        w.f64(self.regularization)?;
        for t in self.omega.iter() {
            w.u64(t as u64)?;
        }
        w.f64s(&self.classification_weights)?;
        for m in &self.weights {
            for r in 0..self.class_count {
                for c in 0..self.node_count {
                    w.f64(m[(r, c)])?;
                }
            }
        }
        w.finish()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut r = LeReader::new(input);
        r.magic(MAGIC)?;
        let k = r.u32()? as usize;
        let n = r.u32()? as usize;
        let len = r.u32()? as usize;
        let _reserved = r.u32()?;
        if k == 0 || n == 0 || len == 0 {
            return Err(Error::Format("linear readout header has a zero dimension".into()));
        }
        let lambda = r.f64()?;
        let times = (0..len).map(|_| r.u64().map(|t| t as usize)).collect::<Result<Vec<_>>>()?;
        let omega = SampleTimes::new(times).map_err(|e| Error::Format(e.to_string()))?;
        let cw = r.f64s(len)?;
        let mut weights = Vec::with_capacity(len);
        for _ in 0..len {
            weights.push(DMatrix::from_row_slice(k, n, &r.f64s(k * n)?));
        }
        r.expect_end()?;
        LinearReadoutModel::from_parts(weights, omega, lambda)
            .and_then(|m| m.with_classification_weights(cw))
            .map_err(|e| Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;

    fn random_instance(
        seed: u64,
        j: usize,
        n: usize,
        k: usize,
        t: usize,
    ) -> (Vec<StateMatrix>, ClassPartition, SampleTimes) {
        let mut rng = seeded_rng(seed);
        let labels: Vec<usize> = (0..j).map(|i| i % k).collect();
        let states = (0..j)
            .map(|_| {
                let data = (0..t * n).map(|_| rng.random_range(-1.0..1.0)).collect();
                StateMatrix::from_row_major(t, n, data).unwrap()
            })
            .collect();
        (
            states,
            ClassPartition::from_labels(&labels, k).unwrap(),
            SampleTimes::all(t).unwrap(),
        )
    }

    fn states_at(states: &[StateMatrix], i: usize) -> DMatrix<f64> {
        let n = states[0].cols();
        DMatrix::from_fn(n, states.len(), |r, j| states[j].get(i, r))
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let (s, p, o) = random_instance(0, 6, 3, 2, 2);
        assert!(train_linear(&s, &p, &o, 0.0).is_err());
        assert!(train_linear(&s, &p, &o, -1.0).is_err());
    }

    #[test]
    fn heavy_regularization_shrinks_to_zero() {
        let (s, p, o) = random_instance(1, 20, 5, 3, 2);
        let m = train_linear(&s, &p, &o, 1e6).unwrap();
        // ‖W‖ ≤ ‖D Xᵀ‖ / λ ≤ J·max‖x‖ / λ
        for w in m.weights() {
            assert!(w.amax() < 20.0 * 5f64.sqrt() / 1e6);
        }
    }

    #[test]
    fn rank_one_closed_form() {
        let x = vec![0.3, -1.2, 0.5];
        let lambda = 0.1;
        let s = vec![StateMatrix::from_rows(&[x.clone()]).unwrap()];
        let p = ClassPartition::from_labels(&[0], 1).unwrap();
        let m = train_linear(&s, &p, &SampleTimes::all(1).unwrap(), lambda).unwrap();
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        for (c, &xc) in x.iter().enumerate() {
            assert!((m.weights()[0][(0, c)] - xc / (norm2 + lambda)).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_gradient_descent() {
        let (s, p, o) = random_instance(2, 30, 8, 3, 1);
        let lambda = 0.5;
        let m = train_linear(&s, &p, &o, lambda).unwrap();
        let x = states_at(&s, 0);
        let labels = p.labels();
        let mut d = DMatrix::zeros(3, 30);
        for (j, &k) in labels.iter().enumerate() {
            d[(k, j)] = 1.0;
        }
        // gradient of the objective: 2 (W X − D) Xᵀ + 2 λ W
        let xxt = &x * x.transpose();
        let step = 1.0 / (2.0 * (xxt.norm() + lambda));
        let mut w = DMatrix::zeros(3, 8);
        for _ in 0..200_000 {
            let grad = 2.0 * (&w * &x - &d) * x.transpose() + 2.0 * lambda * &w;
            if grad.norm() < 1e-13 {
                break;
            }
            w -= step * grad;
        }
        let rel = (&w - &m.weights()[0]).norm() / m.weights()[0].norm();
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn closed_form_is_optimal_under_perturbation() {
        let (s, p, o) = random_instance(3, 25, 6, 4, 1);
        let lambda = 1e-2;
        let m = train_linear(&s, &p, &o, lambda).unwrap();
        let x = states_at(&s, 0);
        let labels = p.labels();
        let best = ridge_objective(&m.weights()[0], &x, &labels, lambda);
        let mut rng = seeded_rng(33);
        for _ in 0..100 {
            let scale = 10f64.powf(rng.random_range(-6.0..0.0));
            let pert = DMatrix::from_fn(4, 6, |_, _| scale * rng.random_range(-1.0..1.0));
            let other = ridge_objective(&(&m.weights()[0] + pert), &x, &labels, lambda);
            assert!(best <= other + 1e-9);
        }
    }

    #[test]
    fn norm_decreases_with_lambda() {
        let (s, p, o) = random_instance(4, 40, 6, 3, 3);
        let norms: Vec<Vec<f64>> = [1e-10, 1e-4, 1e2]
            .iter()
            .map(|&l| train_linear(&s, &p, &o, l).unwrap().weights().iter().map(|w| w.norm()).collect())
            .collect();
        for t in 0..3 {
            assert!(norms[0][t] >= norms[1][t] && norms[1][t] >= norms[2][t]);
        }
    }

    #[test]
    fn zero_model_ties_to_class_zero() {
        let o = SampleTimes::all(2).unwrap();
        let m = LinearReadoutModel::from_parts(vec![DMatrix::zeros(3, 4); 2], o, 1.0).unwrap();
        let x = StateMatrix::from_row_major(2, 4, vec![1.0; 8]).unwrap();
        let d = classify_linear(&m, &x).unwrap();
        assert_eq!(d.scores, vec![0.0; 3]);
        assert_eq!(d.class, 0);
    }

    #[test]
    fn single_time_score_is_row_product() {
        let w = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, -0.5, 2.0, 1.0]);
        let m = LinearReadoutModel::from_parts(vec![w], SampleTimes::all(1).unwrap(), 1.0).unwrap();
        let x = StateMatrix::from_rows(&[vec![5.0, 1.0, -1.0]]).unwrap();
        let d = classify_linear(&m, &x).unwrap();
        assert_eq!(d.scores, vec![5.0, -2.5 + 2.0 - 1.0]);
        assert_eq!(d.class, 0);
    }

    #[test]
    fn score_matches_naive_sum() {
        let mut rng = seeded_rng(5);
        let (k, n, t) = (3, 5, 4);
        let ws: Vec<DMatrix<f64>> =
            (0..t).map(|_| DMatrix::from_fn(k, n, |_, _| rng.random_range(-1.0..1.0))).collect();
        let omega = SampleTimes::new(vec![1, 4, 6, 9]).unwrap();
        let m = LinearReadoutModel::from_parts(ws.clone(), omega, 1e-4).unwrap();
        let x = StateMatrix::from_row_major(t, n, (0..t * n).map(|_| rng.random::<f64>()).collect()).unwrap();
        let d = classify_linear(&m, &x).unwrap();
        for c in 0..k {
            let mut naive = 0.0;
            for i in 0..t {
                for r in 0..n {
                    naive += ws[i][(c, r)] * x.get(i, r);
                }
            }
            assert!((d.scores[c] - naive).abs() < 1e-12);
        }
    }

    #[test]
    fn argmax_invariant_to_weight_rescaling() {
        let (s, p, o) = random_instance(6, 30, 5, 3, 4);
        let m = train_linear(&s, &p, &o, 1e-3).unwrap();
        let scaled = m.clone().with_classification_weights(vec![7.5; 4]).unwrap();
        for x in &s {
            assert_eq!(classify_linear(&m, x).unwrap().class, classify_linear(&scaled, x).unwrap().class);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (s, p, o) = random_instance(7, 6, 3, 2, 2);
        let m = train_linear(&s, &p, &o, 1e-3).unwrap();
        let wrong_n = StateMatrix::zeros(2, 4);
        let wrong_t = StateMatrix::zeros(3, 3);
        assert!(classify_linear(&m, &wrong_n).is_err());
        assert!(classify_linear(&m, &wrong_t).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let (s, p, o) = random_instance(8, 12, 4, 3, 3);
        let m = train_linear(&s, &p, &o, 1e-4).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 16 + 8 + 3 * 8 + 3 * 8 + 3 * 3 * 4 * 8);
        assert_eq!(LinearReadoutModel::read_from(buf.as_slice()).unwrap(), m);
        assert!(LinearReadoutModel::read_from(&buf[..buf.len() - 1]).is_err());
    }
}
