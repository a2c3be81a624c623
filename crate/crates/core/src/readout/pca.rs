//! Principal-component clustering of reservoir state norms.
//!
//! Each training signal is reduced to its norm vector
//! `b(i) = ‖X(t_i)‖²`, `t_i ∈ Ω`. The norm vectors of class `k` form the
//! columns of `B_k`, and `U_k` holds the top `R` left singular vectors of
//! `B_k`. A test vector `b` is assigned to the class with the smallest
//! residual `d_k = ‖(I − U_k U_kᵀ) b‖²`, evaluated as `‖b‖² − ‖U_kᵀ b‖²`.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::argmin;
use crate::codec::{LeReader, LeWriter};
use crate::dataset::ClassPartition;
use crate::error::{invalid, Error, Result};
use crate::reservoir::StateMatrix;
use crate::signal::SampleTimes;

const MAGIC: &[u8; 8] = b"RCPCARD1";

/// Squared state norms over the sampled times.
#[derive(Debug, Clone, PartialEq)]
pub struct NormVector(Vec<f64>);

impl NormVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("norm vector entries must be finite and non-negative"));
        }
        Ok(NormVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Row-wise squared Euclidean norms of `sampled_states`.
pub fn norm_vector(sampled_states: &StateMatrix) -> NormVector {
    NormVector(
        sampled_states
            .row_iter()
            .map(|row| row.iter().map(|v| v * v).sum())
            .collect(),
    )
}

/// Whether class subspaces are fitted to raw or mean-subtracted columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centering {
    #[default]
    Uncentered,
    Centered,
}

/// Top-`rank` left singular vectors of `b`, ordered by descending singular
/// value, each with its largest-magnitude entry made positive.
pub fn principal_subspace(b: &DMatrix<f64>, rank: usize) -> Result<DMatrix<f64>> {
    let (rows, cols) = b.shape();
    if rank < 1 || rank > rows.min(cols) {
        return Err(invalid(format!(
            "rank {rank} outside 1..={} for a {rows}x{cols} matrix",
            rows.min(cols)
        )));
    }
    let svd = nalgebra::SVD::try_new(b.clone(), true, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &c| svd.singular_values[c].total_cmp(&svd.singular_values[a]).then(a.cmp(&c)));

    let mut out = DMatrix::zeros(rows, rank);
    for (dst, &src) in order.iter().take(rank).enumerate() {
        let col = u.column(src);
        let pivot = col.iter().enumerate().fold(0, |best, (i, v)| {
            if v.abs() > col[best].abs() {
                i
            } else {
                best
            }
        });
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        out.set_column(dst, &(col * sign));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaReadoutModel {
    bases: Vec<DMatrix<f64>>,
    means: Option<Vec<DVector<f64>>>,
    rank: usize,
    omega: SampleTimes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaDecision {
    pub class: usize,
    pub residuals: Vec<f64>,
}

/// Fit one rank-`rank` principal subspace per class.
pub fn train_pca(
    norm_vectors: &[NormVector],
    partition: &ClassPartition,
    omega: &SampleTimes,
    rank: usize,
    centering: Centering,
) -> Result<PcaReadoutModel> {
    if norm_vectors.len() != partition.total() {
        return Err(Error::DimensionMismatch {
            what: "training vectors vs partition size",
            expected: partition.total(),
            actual: norm_vectors.len(),
        });
    }
    let len = omega.len();
    if let Some(bad) = norm_vectors.iter().find(|b| b.len() != len) {
        return Err(Error::DimensionMismatch { what: "norm vector length", expected: len, actual: bad.len() });
    }
    for (k, members) in partition.classes().iter().enumerate() {
        if rank > members.len().min(len) {
            return Err(invalid(format!(
                "rank {rank} exceeds min(|C_{k}| = {}, |Ω| = {len})",
                members.len()
            )));
        }
    }

    let fitted = partition
        .classes()
        .par_iter()
        .map(|members| {
            let mut b = DMatrix::from_fn(len, members.len(), |i, c| norm_vectors[members[c]].0[i]);
            let mean = match centering {
                Centering::Uncentered => None,
                Centering::Centered => {
                    let mean = b.column_mean();
                    for mut col in b.column_iter_mut() {
                        col -= &mean;
                    }
                    Some(mean)
                }
            };
            principal_subspace(&b, rank).map(|u| (u, mean))
        })
        .collect::<Result<Vec<_>>>()?;

    let (bases, means): (Vec<_>, Vec<_>) = fitted.into_iter().unzip();
    let means = match centering {
        Centering::Uncentered => None,
        Centering::Centered => Some(means.into_iter().map(Option::unwrap).collect()),
    };
    Ok(PcaReadoutModel { bases, means, rank, omega: omega.clone() })
}

/// Assign `b` to the class whose subspace leaves the smallest residual.
pub fn classify_pca(model: &PcaReadoutModel, b: &NormVector) -> Result<PcaDecision> {
    model.check_len(b)?;
    let residuals: Vec<f64> = (0..model.class_count())
        .map(|k| {
            let v = model.shifted(k, b);
            let proj = model.bases[k].tr_mul(&v);
            (v.norm_squared() - proj.norm_squared()).max(0.0)
        })
        .collect();
    Ok(PcaDecision { class: argmin(&residuals), residuals })
}

impl PcaReadoutModel {
    /// Assemble a model from explicit orthonormal bases (uncentered).
    pub fn from_bases(bases: Vec<DMatrix<f64>>, omega: SampleTimes) -> Result<Self> {
        if bases.is_empty() {
            return Err(invalid("need at least one class basis"));
        }
        let rank = bases[0].ncols();
        for u in &bases {
            if u.nrows() != omega.len() || u.ncols() != rank {
                return Err(invalid("every basis must be |Ω| × R"));
            }
            let gram = u.tr_mul(u);
            if (gram - DMatrix::identity(rank, rank)).amax() > 1e-10 {
                return Err(invalid("basis columns are not orthonormal"));
            }
        }
        Ok(PcaReadoutModel { bases, means: None, rank, omega })
    }

    pub fn bases(&self) -> &[DMatrix<f64>] {
        &self.bases
    }

    pub fn means(&self) -> Option<&[DVector<f64>]> {
        self.means.as_deref()
    }

    pub fn centering(&self) -> Centering {
        if self.means.is_some() {
            Centering::Centered
        } else {
            Centering::Uncentered
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class_count(&self) -> usize {
        self.bases.len()
    }

    pub fn omega(&self) -> &SampleTimes {
        &self.omega
    }

    fn check_len(&self, b: &NormVector) -> Result<()> {
        if b.len() != self.omega.len() {
            return Err(Error::DimensionMismatch {
                what: "norm vector length",
                expected: self.omega.len(),
                actual: b.len(),
            });
        }
        Ok(())
    }

    fn shifted(&self, k: usize, b: &NormVector) -> DVector<f64> {
        let v = DVector::from_column_slice(&b.0);
        match &self.means {
            Some(means) => v - &means[k],
            None => v,
        }
    }

    /// Materialise `I − U_k U_kᵀ` for every class.
    pub fn projectors(&self) -> ProjectorBank {
        let len = self.omega.len();
        let projectors = self
            .bases
            .iter()
            .map(|u| DMatrix::identity(len, len) - u * u.transpose())
            .collect();
        ProjectorBank { projectors, model: self.clone() }
    }

    /// Binary container, all fields little-endian:
    ///
    /// ```text
    /// magic     8 bytes  "RCPCARD1"
    /// K         u32      class count
    /// R         u32      rank
    /// |Ω|       u32      number of sampled times
    /// centered  u32      0 = uncentered, 1 = centered
    /// Ω         |Ω| × u64, 0-based time indices
    /// U_k       K blocks of |Ω|×R f64, row-major
    /// μ_k       K blocks of |Ω| f64 (only when centered)
    /// ```
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = LeWriter::new(out);
        let len = self.omega.len();
        w.bytes(MAGIC)?;
        w.u32(self.class_count() as u32)?;
        w.u32(self.rank as u32)?;
        w.u32(len as u32)?;
        w.u32(u32::from(self.means.is_some()))?;
        for t in self.omega.iter() {
            w.u64(t as u64)?;
        }
        for u in &self.bases {
            for r in 0..len {
                for c in 0..self.rank {
                    w.f64(u[(r, c)])?;
                }
            }
        }
        if let Some(means) = &self.means {
            for m in means {
                w.f64s(m.as_slice())?;
            }
        }
        w.finish()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut r = LeReader::new(input);
        r.magic(MAGIC)?;
        let k = r.u32()? as usize;
        let rank = r.u32()? as usize;
        let len = r.u32()? as usize;
        let centered = match r.u32()? {
            0 => false,
            1 => true,
            other => return Err(Error::Format(format!("bad centering flag {other}"))),
        };
        if k == 0 || rank == 0 || len == 0 {
            return Err(Error::Format("PCA readout header has a zero dimension".into()));
        }
        let times = (0..len).map(|_| r.u64().map(|t| t as usize)).collect::<Result<Vec<_>>>()?;
        let omega = SampleTimes::new(times).map_err(|e| Error::Format(e.to_string()))?;
        let mut bases = Vec::with_capacity(k);
        for _ in 0..k {
            bases.push(DMatrix::from_row_slice(len, rank, &r.f64s(len * rank)?));
        }
        let means = if centered {
            Some((0..k).map(|_| r.f64s(len).map(DVector::from_vec)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        r.expect_end()?;
        let mut model = PcaReadoutModel::from_bases(bases, omega).map_err(|e| Error::Format(e.to_string()))?;
        model.means = means;
        Ok(model)
    }
}

/// Classification through precomputed `|Ω| × |Ω|` residual projectors.
///
/// Costs `O(K|Ω|²)` per test vector instead of `O(KR|Ω|)`; kept for
/// comparison with the projector-based cost model.
#[derive(Debug, Clone)]
pub struct ProjectorBank {
    projectors: Vec<DMatrix<f64>>,
    model: PcaReadoutModel,
}

impl ProjectorBank {
    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn classify(&self, b: &NormVector) -> Result<PcaDecision> {
        self.model.check_len(b)?;
        let residuals: Vec<f64> = self
            .projectors
            .iter()
            .enumerate()
            .map(|(k, p)| (p * self.model.shifted(k, b)).norm_squared())
            .collect();
        Ok(PcaDecision { class: argmin(&residuals), residuals })
    }
}
