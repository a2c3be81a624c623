//! On-disk dataset formats.
//!
//! # Binary (`.rcds`)
//!
//! Little-endian throughout:
//!
//! ```text
//! magic      8 bytes  "RCDATA01"
//! count      u64      number of samples
//! length     u64      values per sample
//! classes    u64      number of classes K
//! img_rows   u32      image height, or 0 for plain signals
//! img_cols   u32      image width,  or 0 for plain signals
//! labels     count × u32, each in 0..K
//! payload    count × length × f64
//! ```
//!
//! When `img_rows · img_cols == length > 0`, each sample's payload is the
//! image in raster (row-by-row) order, and loading stacks it column by column
//! into the signal. Otherwise the payload is the signal itself.
//!
//! # CSV
//!
//! One sample per line, no header: the integer class label, then the sample
//! values. The class count is `max(label) + 1`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::codec::{LeReader, LeWriter};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::signal::Signal;

const MAGIC: &[u8; 8] = b"RCDATA01";

/// Parsed contents of a binary dataset file, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDatasetFile {
    pub sample_length: usize,
    pub class_count: usize,
    pub image_shape: Option<(usize, usize)>,
    pub labels: Vec<usize>,
    pub samples: Vec<f64>,
}

/// Stack a raster-order `rows × cols` image column by column.
pub fn vectorize_image(raster: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            out.push(raster[r * cols + c]);
        }
    }
    out
}

impl RawDatasetFile {
    /// Plain-signal file holding `dataset` exactly.
    pub fn from_dataset(dataset: &LabeledDataset) -> Self {
        RawDatasetFile {
            sample_length: dataset.signal_len(),
            class_count: dataset.class_count(),
            image_shape: None,
            labels: dataset.labels(),
            samples: dataset.signals().iter().flat_map(|s| s.iter().copied()).collect(),
        }
    }

    pub fn sample_count(&self) -> usize {
        self.labels.len()
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = LeWriter::new(out);
        w.bytes(MAGIC)?;
        w.u64(self.labels.len() as u64)?;
        w.u64(self.sample_length as u64)?;
        w.u64(self.class_count as u64)?;
        let (r, c) = self.image_shape.unwrap_or((0, 0));
        w.u32(r as u32)?;
        w.u32(c as u32)?;
        for &l in &self.labels {
            w.u32(l as u32)?;
        }
        w.f64s(&self.samples)?;
        w.finish()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut r = LeReader::new(input);
        r.magic(MAGIC)?;
        let count = r.u64()? as usize;
        let sample_length = r.u64()? as usize;
        let class_count = r.u64()? as usize;
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        if count == 0 {
            return Err(Error::Format("dataset has zero samples".into()));
        }
        if sample_length == 0 || class_count == 0 {
            return Err(Error::Format("dataset header has a zero dimension".into()));
        }
        let image_shape = match (rows, cols) {
            (0, 0) => None,
            (r, c) if r * c == sample_length => Some((r, c)),
            (r, c) => {
                return Err(Error::Format(format!(
                    "image shape {r}x{c} does not match sample length {sample_length}"
                )))
            }
        };
        let labels = (0..count).map(|_| r.u32().map(|l| l as usize)).collect::<Result<Vec<_>>>()?;
        let samples = r.f64s(count * sample_length)?;
        r.expect_end()?;
        Ok(RawDatasetFile { sample_length, class_count, image_shape, labels, samples })
    }

    /// Validate labels and values and build the dataset (column-stacking images).
    pub fn into_dataset(self) -> Result<LabeledDataset> {
        let k = self.class_count;
        if self.labels.is_empty() {
            return Err(Error::Format("dataset has zero samples".into()));
        }
        if let Some((j, &l)) = self.labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::Format(format!("label {l} of sample {j} outside 0..{k}")));
        }
        if self.samples.len() != self.labels.len() * self.sample_length {
            return Err(Error::Format("payload size does not match header".into()));
        }
        if let Some(i) = self.samples.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Format(format!(
                "value {} of sample {} outside [0, 1]",
                self.samples[i],
                i / self.sample_length
            )));
        }
        let signals = self
            .samples
            .chunks_exact(self.sample_length)
            .map(|chunk| {
                let values = match self.image_shape {
                    Some((r, c)) => vectorize_image(chunk, r, c),
                    None => chunk.to_vec(),
                };
                Signal::new(values)
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::from_labeled(signals, &self.labels, k).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Parse the CSV format into an unvalidated file structure.
pub fn read_csv<R: Read>(input: R) -> Result<RawDatasetFile> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut labels = Vec::new();
    let mut samples = Vec::new();
    let mut sample_length = None;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut fields = record.iter();
        let label: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Format(format!("line {}: bad label", line + 1)))?;
        let before = samples.len();
        for f in fields {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad value '{f}'", line + 1)))?;
            samples.push(v);
        }
        let len = samples.len() - before;
        match sample_length {
            None => sample_length = Some(len),
            Some(l) if l != len => {
                return Err(Error::Format(format!("line {}: expected {l} values, found {len}", line + 1)))
            }
            _ => {}
        }
        labels.push(label);
    }
    let sample_length = sample_length.ok_or_else(|| Error::Format("dataset has zero samples".into()))?;
    if sample_length == 0 {
        return Err(Error::Format("samples have no values".into()));
    }
    let class_count = labels.iter().max().map_or(0, |m| m + 1);
    Ok(RawDatasetFile { sample_length, class_count, image_shape: None, labels, samples })
}

/// Write `dataset` as CSV (label, then values).
pub fn write_csv<W: Write>(dataset: &LabeledDataset, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    for (s, l) in dataset.signals().iter().zip(dataset.labels()) {
        let mut row = vec![l.to_string()];
        row.extend(s.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Load a dataset from the binary format (detected by magic) or CSV.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let mut file = BufReader::new(File::open(path.as_ref())?);
    let mut head = [0u8; 8];
    let n = read_up_to(&mut file, &mut head)?;
    let chained = (&head[..n]).chain(file);
    let raw = if n == 8 && &head == MAGIC {
        RawDatasetFile::read_from(chained)?
    } else {
        read_csv(chained)?
    };
    raw.into_dataset()
}

fn read_up_to<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

impl LabeledDataset {
    /// Save in the binary format as plain signals.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        RawDatasetFile::from_dataset(self).write_to(BufWriter::new(File::create(path)?))
    }
}
