use std::fmt;

use crate::dataset::ClassPartition;
use crate::error::{Error, Result};
use crate::reservoir::StateMatrix;
use crate::signal::SampleTimes;

/// Which representation of the states the separation ratio is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationVariant {
    /// Full state vectors `X^{(j)}(t)` (the trained-weights readout sees these).
    Vector,
    /// Unsquared state norms `‖X^{(j)}(t)‖` (the clustering readout sees these).
    Norm,
}

impl fmt::Display for SeparationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeparationVariant::Vector => "vector",
            SeparationVariant::Norm => "norm",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationSeries {
    pub values: Vec<f64>,
    pub variant: SeparationVariant,
}

impl SeparationSeries {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `(t, Sep(t))` pairs over the sampled times.
    pub fn with_times<'a>(&'a self, omega: &'a SampleTimes) -> impl Iterator<Item = (usize, f64)> + 'a {
        omega.iter().zip(self.values.iter().copied())
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// `Sep(t) = d(t) / (1 + v(t))` at every sampled row.
///
/// `d(t)` averages the distance between every ordered pair of class means
/// (including each class with itself) and `v(t)` averages the per-class mean
/// absolute deviation from the class mean.
pub fn separation_ratio(
    states: &[StateMatrix],
    partition: &ClassPartition,
    variant: SeparationVariant,
) -> Result<SeparationSeries> {
    if states.len() != partition.total() {
        return Err(Error::DimensionMismatch {
            what: "signals vs partition size",
            expected: partition.total(),
            actual: states.len(),
        });
    }
    let (rows, cols) = (states[0].rows(), states[0].cols());
    if let Some(s) = states.iter().find(|s| s.rows() != rows || s.cols() != cols) {
        return Err(Error::DimensionMismatch { what: "sampled state shape", expected: rows * cols, actual: s.rows() * s.cols() });
    }
    let k_count = partition.class_count();
    let k2 = (k_count * k_count) as f64;

    let values = (0..rows)
        .map(|i| {
            // Per-signal features at this time: the state vector, or its norm as a 1-vector.
            let feature = |j: usize| -> Vec<f64> {
                let row = states[j].row(i);
                match variant {
                    SeparationVariant::Vector => row.to_vec(),
                    SeparationVariant::Norm => vec![row.iter().map(|v| v * v).sum::<f64>().sqrt()],
                }
            };
            let dim = match variant {
                SeparationVariant::Vector => cols,
                SeparationVariant::Norm => 1,
            };
            let mut means = vec![vec![0.0; dim]; k_count];
            let mut features = Vec::with_capacity(k_count);
            for (k, members) in partition.classes().iter().enumerate() {
                let fs: Vec<Vec<f64>> = members.iter().map(|&j| feature(j)).collect();
                for f in &fs {
                    for (m, v) in means[k].iter_mut().zip(f) {
                        *m += v;
                    }
                }
                let count = members.len() as f64;
                means[k].iter_mut().for_each(|m| *m /= count);
                features.push(fs);
            }
            let mut inter = 0.0;
            for a in &means {
                for b in &means {
                    inter += euclid(a, b);
                }
            }
            let inter = inter / k2;
            let intra = features
                .iter()
                .zip(&means)
                .map(|(fs, m)| fs.iter().map(|f| euclid(m, f)).sum::<f64>() / fs.len() as f64)
                .sum::<f64>()
                / k_count as f64;
            inter / (1.0 + intra)
        })
        .collect();
    Ok(SeparationSeries { values, variant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;

    #[test]
    fn identical_signals_have_zero_separation() {
        let s = StateMatrix::from_rows(&[vec![0.3, -0.2], vec![0.1, 0.9]]).unwrap();
        let states = vec![s; 6];
        let p = ClassPartition::from_labels(&[0, 1, 2, 0, 1, 2], 3).unwrap();
        for variant in [SeparationVariant::Vector, SeparationVariant::Norm] {
            let sep = separation_ratio(&states, &p, variant).unwrap();
            assert!(sep.values.iter().all(|&v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn hand_computed_norm_case() {
        // class 0 norms are 1, class 1 norms are 3
        let states = vec![
            StateMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap(),
            StateMatrix::from_rows(&[vec![0.0, -1.0]]).unwrap(),
            StateMatrix::from_rows(&[vec![3.0, 0.0]]).unwrap(),
            StateMatrix::from_rows(&[vec![0.0, 3.0]]).unwrap(),
        ];
        let p = ClassPartition::from_labels(&[0, 0, 1, 1], 2).unwrap();
        let sep = separation_ratio(&states, &p, SeparationVariant::Norm).unwrap();
        assert!((sep.values[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_class_is_zero() {
        let states = vec![
            StateMatrix::from_rows(&[vec![1.0]]).unwrap(),
            StateMatrix::from_rows(&[vec![2.0]]).unwrap(),
        ];
        let p = ClassPartition::from_labels(&[0, 0], 1).unwrap();
        let sep = separation_ratio(&states, &p, SeparationVariant::Vector).unwrap();
        assert_eq!(sep.values, vec![0.0]);
    }

    /// Direct transcription of the definitions with explicit index loops.
    fn naive(states: &[StateMatrix], labels: &[usize], k: usize, norm: bool) -> Vec<f64> {
        let (t_len, n) = (states[0].rows(), states[0].cols());
        let mut out = vec![];
        for t in 0..t_len {
            let val = |j: usize| -> Vec<f64> {
                let r: Vec<f64> = (0..n).map(|c| states[j].get(t, c)).collect();
                if norm {
                    vec![r.iter().map(|x| x * x).sum::<f64>().sqrt()]
                } else {
                    r
                }
            };
            let dim = if norm { 1 } else { n };
            let mut m = vec![vec![0.0; dim]; k];
            let mut cnt = vec![0.0; k];
            for j in 0..states.len() {
                let v = val(j);
                for c in 0..dim {
                    m[labels[j]][c] += v[c];
                }
                cnt[labels[j]] += 1.0;
            }
            for c in 0..k {
                for x in m[c].iter_mut() {
                    *x /= cnt[c];
                }
            }
            let mut d = 0.0;
            for a in 0..k {
                for b in 0..k {
                    let mut s = 0.0;
                    for c in 0..dim {
                        s += (m[a][c] - m[b][c]).powi(2);
                    }
                    d += s.sqrt();
                }
            }
            d /= (k * k) as f64;
            let mut v = 0.0;
            for c in 0..k {
                let mut acc = 0.0;
                for j in 0..states.len() {
                    if labels[j] == c {
                        let x = val(j);
                        let mut s = 0.0;
                        for q in 0..dim {
                            s += (m[c][q] - x[q]).powi(2);
                        }
                        acc += s.sqrt();
                    }
                }
                v += acc / cnt[c];
            }
            v /= k as f64;
            out.push(d / (1.0 + v));
        }
        out
    }

    fn random_states(seed: u64, count: usize) -> Vec<StateMatrix> {
        let mut rng = seeded_rng(seed);
        (0..count)
            .map(|_| StateMatrix::from_row_major(4, 6, (0..24).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap())
            .collect()
    }

    #[test]
    fn matches_nested_loop_oracle() {
        let states = random_states(3, 15);
        let labels: Vec<usize> = (0..15).map(|j| j / 5).collect();
        let p = ClassPartition::from_labels(&labels, 3).unwrap();
        for (variant, norm) in [(SeparationVariant::Vector, false), (SeparationVariant::Norm, true)] {
            let sep = separation_ratio(&states, &p, variant).unwrap();
            let oracle = naive(&states, &labels, 3, norm);
            for (a, b) in sep.values.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invariant_under_class_relabeling() {
        let states = random_states(4, 12);
        let labels: Vec<usize> = (0..12).map(|j| j % 3).collect();
        let permuted: Vec<usize> = labels.iter().map(|&k| [2, 0, 1][k]).collect();
        let p = ClassPartition::from_labels(&labels, 3).unwrap();
        let q = ClassPartition::from_labels(&permuted, 3).unwrap();
        for variant in [SeparationVariant::Vector, SeparationVariant::Norm] {
            let a = separation_ratio(&states, &p, variant).unwrap();
            let b = separation_ratio(&states, &q, variant).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-12);
                assert!(*x >= 0.0);
            }
        }
    }
}
