use proptest::prelude::*;

use rescomp::data::{load_dataset, read_csv, write_csv, RawDatasetFile};
use rescomp::readout::{train_linear, train_pca, Centering, LinearReadoutModel, NormVector, PcaReadoutModel};
use rescomp::reservoir::StateMatrix;
use rescomp::{ClassPartition, LabeledDataset, SampleTimes, Signal};

/// A dataset with `k` classes, every class nonempty, values in [0, 1].
fn dataset_strategy() -> impl Strategy<Value = LabeledDataset> {
    (1usize..5, 1usize..12, 0usize..10).prop_flat_map(|(k, len, extra)| {
        let count = k + extra;
        (
            prop::collection::vec(prop::collection::vec(0.0f64..=1.0, len), count),
            prop::collection::vec(0..k, extra),
        )
            .prop_map(move |(values, extra_labels)| {
                let labels: Vec<usize> = (0..k).chain(extra_labels).collect();
                let signals = values.into_iter().map(|v| Signal::new(v).unwrap()).collect();
                LabeledDataset::from_labeled(signals, &labels, k).unwrap()
            })
    })
}

fn states_strategy(j: usize, t: usize, n: usize) -> impl Strategy<Value = Vec<StateMatrix>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, t * n), j)
        .prop_map(move |all| all.into_iter().map(|d| StateMatrix::from_row_major(t, n, d).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binary_dataset_round_trip(data in dataset_strategy()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.rcds");
        data.save(&path).unwrap();
        prop_assert_eq!(load_dataset(&path).unwrap(), data);
    }

    #[test]
    fn csv_dataset_round_trip(data in dataset_strategy()) {
        let mut buf = Vec::new();
        write_csv(&data, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap().into_dataset().unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn image_files_load_column_stacked(rows in 1usize..5, cols in 1usize..5, seed in 0u64..1000) {
        let raster: Vec<f64> = (0..rows * cols).map(|i| ((i as u64 * 31 + seed) % 97) as f64 / 96.0).collect();
        let raw = RawDatasetFile {
            sample_length: rows * cols,
            class_count: 1,
            image_shape: Some((rows, cols)),
            labels: vec![0],
            samples: raster.clone(),
        };
        let mut buf = Vec::new();
        raw.write_to(&mut buf).unwrap();
        let data = RawDatasetFile::read_from(buf.as_slice()).unwrap().into_dataset().unwrap();
        let s = &data.signals()[0];
        for c in 0..cols {
            for r in 0..rows {
                prop_assert_eq!(s[c * rows + r], raster[r * cols + c]);
            }
        }
    }

    #[test]
    fn linear_model_round_trip(
        states in states_strategy(6, 3, 4),
        lambda in 1e-6f64..10.0,
    ) {
        let partition = ClassPartition::from_labels(&[0, 1, 2, 0, 1, 2], 3).unwrap();
        let model = train_linear(&states, &partition, &SampleTimes::all(3).unwrap(), lambda).unwrap();
        let mut buf = Vec::new();
        model.write_to(&mut buf).unwrap();
        prop_assert_eq!(LinearReadoutModel::read_from(buf.as_slice()).unwrap(), model);
    }

    #[test]
    fn pca_model_round_trip(
        values in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 5), 8),
        rank in 1usize..4,
        centered in any::<bool>(),
    ) {
        let b: Vec<NormVector> = values.into_iter().map(|v| NormVector::new(v).unwrap()).collect();
        let partition = ClassPartition::from_labels(&[0, 1, 0, 1, 0, 1, 0, 1], 2).unwrap();
        let centering = if centered { Centering::Centered } else { Centering::Uncentered };
        let model = train_pca(&b, &partition, &SampleTimes::all(5).unwrap(), rank, centering).unwrap();
        let mut buf = Vec::new();
        model.write_to(&mut buf).unwrap();
        prop_assert_eq!(PcaReadoutModel::read_from(buf.as_slice()).unwrap(), model);
    }
}

#[test]
fn truncated_files_are_rejected() {
    let data = LabeledDataset::from_labeled(vec![Signal::new(vec![0.5, 0.25]).unwrap()], &[0], 1).unwrap();
    let mut buf = Vec::new();
    RawDatasetFile::from_dataset(&data).write_to(&mut buf).unwrap();
    for cut in [0, 4, 8, buf.len() - 1] {
        assert!(RawDatasetFile::read_from(&buf[..cut]).is_err(), "cut at {cut}");
    }
    let mut extra = buf.clone();
    extra.push(0);
    assert!(RawDatasetFile::read_from(extra.as_slice()).is_err());
}
