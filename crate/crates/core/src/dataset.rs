use crate::error::{Error, Result};
use crate::signal::Signal;

/// Disjoint, nonempty per-class index sets covering `0..total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    classes: Vec<Vec<usize>>,
    total: usize,
}

impl ClassPartition {
    /// Validate explicit class index sets against a dataset of `total` items.
    pub fn new(classes: Vec<Vec<usize>>, total: usize) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidPartition("need at least one class".into()));
        }
        let mut seen = vec![false; total];
        for (k, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("class {k} is empty")));
            }
            for &j in members {
                if j >= total {
                    return Err(Error::InvalidPartition(format!(
                        "index {j} in class {k} exceeds dataset size {total}"
                    )));
                }
                if seen[j] {
                    return Err(Error::InvalidPartition(format!(
                        "index {j} appears in more than one class"
                    )));
                }
                seen[j] = true;
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {j} belongs to no class")));
        }
        Ok(ClassPartition { classes, total })
    }

    /// Build from per-item labels in `0..class_count`.
    pub fn from_labels(labels: &[usize], class_count: usize) -> Result<Self> {
        let mut classes = vec![Vec::new(); class_count];
        for (j, &k) in labels.iter().enumerate() {
            if k >= class_count {
                return Err(Error::InvalidPartition(format!(
                    "label {k} at index {j} is outside 0..{class_count}"
                )));
            }
            classes[k].push(j);
        }
        ClassPartition::new(classes, labels.len())
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.classes[class]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Label of every item, in index order.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.total];
        for (k, members) in self.classes.iter().enumerate() {
            for &j in members {
                labels[j] = k;
            }
        }
        labels
    }
}

/// Equal-length signals with a class partition over them.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    signals: Vec<Signal>,
    partition: ClassPartition,
}

impl LabeledDataset {
    pub fn new(signals: Vec<Signal>, partition: ClassPartition) -> Result<Self> {
        if signals.len() != partition.total() {
            return Err(Error::DimensionMismatch {
                what: "signals vs partition size",
                expected: partition.total(),
                actual: signals.len(),
            });
        }
        let len = signals[0].len();
        if let Some(j) = signals.iter().position(|s| s.len() != len) {
            return Err(Error::DimensionMismatch {
                what: "signal length",
                expected: len,
                actual: signals[j].len(),
            });
        }
        Ok(LabeledDataset { signals, partition })
    }

    pub fn from_labeled(signals: Vec<Signal>, labels: &[usize], class_count: usize) -> Result<Self> {
        let partition = ClassPartition::from_labels(labels, class_count)?;
        LabeledDataset::new(signals, partition)
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.partition
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn signal_len(&self) -> usize {
        self.signals[0].len()
    }

    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.partition.labels()
    }

    /// Dataset restricted to `indices` (in the given order), keeping class ids.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let labels = self.labels();
        let signals = indices.iter().map(|&j| self.signals[j].clone()).collect();
        let sub_labels: Vec<usize> = indices.iter().map(|&j| labels[j]).collect();
        LabeledDataset::from_labeled(signals, &sub_labels, self.class_count())
    }
}
