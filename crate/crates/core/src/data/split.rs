use rand::seq::index;

use crate::dataset::LabeledDataset;
use crate::error::{invalid, Result};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub seed: u64,
}

/// A train/test partition of a dataset, with the original indices of each side.
#[derive(Debug, Clone)]
pub struct Split {
    pub train: LabeledDataset,
    pub test: LabeledDataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Draw `train_per_class` items of every class without replacement; the rest
/// form the test set. Both sides keep ascending original-index order.
pub fn split(dataset: &LabeledDataset, spec: SplitSpec) -> Result<Split> {
    let partition = dataset.partition();
    if spec.train_per_class == 0 {
        return Err(invalid("train_per_class must be positive"));
    }
    for (k, members) in partition.classes().iter().enumerate() {
        if spec.train_per_class >= members.len() {
            return Err(invalid(format!(
                "train_per_class {} must be below the size {} of class {k}",
                spec.train_per_class,
                members.len()
            )));
        }
    }
    let mut rng = seeded_rng(spec.seed);
    let mut in_train = vec![false; dataset.len()];
    for members in partition.classes() {
        for pick in index::sample(&mut rng, members.len(), spec.train_per_class) {
            in_train[members[pick]] = true;
        }
    }
    let (train_indices, test_indices): (Vec<usize>, Vec<usize>) = (0..dataset.len()).partition(|&j| in_train[j]);
    Ok(Split {
        train: dataset.subset(&train_indices)?,
        test: dataset.subset(&test_indices)?,
        train_indices,
        test_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Signal;

    fn dataset(per_class: usize, k: usize) -> LabeledDataset {
        let n = per_class * k;
        let signals = (0..n).map(|j| Signal::new(vec![j as f64 / n as f64]).unwrap()).collect();
        let labels: Vec<usize> = (0..n).map(|j| j % k).collect();
        LabeledDataset::from_labeled(signals, &labels, k).unwrap()
    }

    #[test]
    fn leave_one_out_per_class() {
        let ds = dataset(6, 3);
        let s = split(&ds, SplitSpec { train_per_class: 5, seed: 1 }).unwrap();
        assert_eq!(s.test.len(), 3);
        for k in 0..3 {
            assert_eq!(s.test.partition().members(k).len(), 1);
        }
    }

    #[test]
    fn rejects_oversized_train() {
        let ds = dataset(4, 2);
        assert!(split(&ds, SplitSpec { train_per_class: 4, seed: 0 }).is_err());
        assert!(split(&ds, SplitSpec { train_per_class: 0, seed: 0 }).is_err());
    }

    #[test]
    fn deterministic_in_seed() {
        let ds = dataset(50, 4);
        let spec = SplitSpec { train_per_class: 20, seed: 7 };
        let a = split(&ds, spec).unwrap();
        let b = split(&ds, spec).unwrap();
        assert_eq!(a.train_indices, b.train_indices);
        let c = split(&ds, SplitSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(a.train_indices, c.train_indices);
    }

    #[test]
    fn is_a_partition() {
        let ds = dataset(30, 5);
        let s = split(&ds, SplitSpec { train_per_class: 12, seed: 3 }).unwrap();
        let mut all: Vec<usize> = s.train_indices.iter().chain(&s.test_indices).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..150).collect::<Vec<_>>());
        for k in 0..5 {
            assert_eq!(s.train.partition().members(k).len(), 12);
            assert_eq!(s.test.partition().members(k).len(), 18);
        }
        let labels = ds.labels();
        for (pos, &j) in s.train_indices.iter().enumerate() {
            assert_eq!(s.train.labels()[pos], labels[j]);
            assert_eq!(s.train.signals()[pos], ds.signals()[j]);
        }
    }
}
