//! Scalar input streams and the time indices at which reservoirs are read out.
//!
//! All time indices in this crate are 0-based: index `t` refers to the
//! `t+1`-th sample of the signal, and the state before the first sample is
//! the all-zeros vector.

use std::ops::Deref;

use crate::error::{Error, Result};

/// A finite, nonempty real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSignal("signal must have at least one sample".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Signal(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Signal {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Signal::new(values)
    }
}

/// Strictly increasing, nonempty set of 0-based time indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleTimes(Vec<usize>);

impl SampleTimes {
    pub fn new(times: Vec<usize>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidParameter("sample times must be nonempty".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "sample times must be strictly increasing".into(),
            ));
        }
        Ok(SampleTimes(times))
    }

    /// Every time index `0..len`.
    pub fn all(len: usize) -> Result<Self> {
        SampleTimes::new((0..len).collect())
    }

    /// `count` indices spaced `period` apart, starting at 0.
    ///
    /// For a mask-expanded signal with mask length `period`, this reads the
    /// reservoir once at the start of every mask block.
    pub fn every(period: usize, count: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("sampling period must be positive".into()));
        }
        SampleTimes::new((0..count).map(|r| r * period).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("sample times are nonempty")
    }

    /// Check that every index is valid for a trajectory of length `time_len`.
    pub fn check_within(&self, time_len: usize) -> Result<()> {
        let last = self.last();
        if last >= time_len {
            return Err(Error::TimeOutOfRange { index: last, len: time_len });
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_rejects_empty_and_nonfinite() {
        assert!(Signal::new(vec![]).is_err());
        assert!(Signal::new(vec![0.0, f64::NAN]).is_err());
        assert!(Signal::new(vec![1.0, f64::INFINITY]).is_err());
        assert_eq!(Signal::new(vec![0.5]).unwrap().len(), 1);
    }

    #[test]
    fn sample_times_validation() {
        assert!(SampleTimes::new(vec![]).is_err());
        assert!(SampleTimes::new(vec![0, 0]).is_err());
        assert!(SampleTimes::new(vec![3, 1]).is_err());
        let s = SampleTimes::new(vec![0, 4, 9]).unwrap();
        assert!(s.check_within(10).is_ok());
        assert!(matches!(
            s.check_within(9),
            Err(Error::TimeOutOfRange { index: 9, len: 9 })
        ));
    }

    #[test]
    fn periodic_sampling() {
        let s = SampleTimes::every(99, 256).unwrap();
        assert_eq!(s.len(), 256);
        assert_eq!(s.as_slice()[1], 99);
        assert_eq!(s.last(), 255 * 99);
        assert!(s.check_within(256 * 99).is_ok());
    }
}
