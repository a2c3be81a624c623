//! Dataset ingestion, splitting and synthetic generation.

mod format;
mod split;
mod synth;

pub use format::{load_dataset, read_csv, vectorize_image, write_csv, RawDatasetFile};
pub use split::{split, Split, SplitSpec};
pub use synth::synth_dataset;
