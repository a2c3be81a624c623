//! Parameter-grid experiment runner and bound-figure emission.
//!
//! A run sweeps `(reservoir kind, N, α)` for a number of trials. Within one
//! trial every grid point reuses the same train/test split. Each grid point
//! builds a reservoir from a seed derived from the base seed, the trial and
//! its grid coordinates, drives the training and test sets, fits the
//! requested readouts, and records one [`ResultRow`] per readout setting.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rayon::prelude::*;
use serde::Deserialize;

use crate::activation::Activation;
use crate::data::{load_dataset, split, synth_dataset, SplitSpec};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::metrics::{
    esn_bound_ratio, separation_ratio, tdr_bound_ratio, write_series_csv, BoundRatioSeries, SeparationVariant,
};
use crate::readout::{classify_linear, classify_pca, norm_vector, train_linear, train_pca, Centering, NormVector};
use crate::reservoir::{apply_mask, make_esn, make_tdr, AnyReservoir, MultiplexMask, Reservoir, StateMatrix};
use crate::rng::{derive_seed, seeded_rng};
use crate::signal::{SampleTimes, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Esn,
    Tdr,
    /// Raw signals straight into the principal-component readout.
    None,
}

impl ExperimentKind {
    fn id(self) -> u64 {
        match self {
            ExperimentKind::Esn => 1,
            ExperimentKind::Tdr => 2,
            ExperimentKind::None => 3,
        }
    }

    /// Default node-count grid for the kind.
    pub fn default_node_counts(self) -> Vec<usize> {
        match self {
            ExperimentKind::Esn => vec![10, 25, 50, 100],
            ExperimentKind::Tdr => vec![25, 50, 100, 400],
            ExperimentKind::None => vec![0],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Esn => "esn",
            ExperimentKind::Tdr => "tdr",
            ExperimentKind::None => "none",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "esn" => Ok(ExperimentKind::Esn),
            "tdr" => Ok(ExperimentKind::Tdr),
            "none" => Ok(ExperimentKind::None),
            other => Err(Error::Config(format!("unknown reservoir kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReadoutChoice {
    Linear,
    Pca,
    #[default]
    Both,
}

impl ReadoutChoice {
    fn linear(self) -> bool {
        matches!(self, ReadoutChoice::Linear | ReadoutChoice::Both)
    }

    fn pca(self) -> bool {
        matches!(self, ReadoutChoice::Pca | ReadoutChoice::Both)
    }
}

impl FromStr for ReadoutChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ReadoutChoice::Linear),
            "pca" => Ok(ReadoutChoice::Pca),
            "both" => Ok(ReadoutChoice::Both),
            other => Err(Error::Config(format!("unknown readout '{other}'"))),
        }
    }
}

/// Everything a run needs. Parsed from a flat TOML file; every key is optional.
///
/// ```toml
/// kind = "esn"
/// node_counts = [10, 25, 50, 100]
/// input_gains = [0.1, 0.5, 0.9]
/// readout = "both"
/// lambdas = [1e-4, 1e-10]
/// ranks = [10]
/// trials = 10
/// seed = 0
/// dataset = "usps.rcds"
/// train_per_class = 400
/// out = "results"
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Empty means the kind's default grid.
    pub node_counts: Vec<usize>,
    pub input_gains: Vec<f64>,
    pub readout: ReadoutChoice,
    pub lambdas: Vec<f64>,
    pub ranks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Dataset file; without one a synthetic set is generated from the `synth_*` keys.
    pub dataset: Option<PathBuf>,
    pub synth_classes: usize,
    pub synth_per_class: usize,
    pub synth_length: usize,
    pub synth_separation: f64,
    pub synth_noise: f64,
    pub train_per_class: usize,
    pub out: PathBuf,
    pub activation: Activation,
    pub density: f64,
    /// ESN spectral radius and default TDR attenuation are `margin · (1 − α)`.
    pub spectral_margin: f64,
    /// Fixed TDR attenuation β; `None` uses `spectral_margin · (1 − α)`.
    pub attenuation: Option<f64>,
    pub centering: bool,
    /// Worker threads; `None` uses all cores.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Esn,
            node_counts: Vec::new(),
            input_gains: (1..=9).map(|i| i as f64 / 10.0).collect(),
            readout: ReadoutChoice::Both,
            lambdas: vec![1e-4, 1e-10],
            ranks: vec![10],
            trials: 10,
            seed: 0,
            dataset: None,
            synth_classes: 3,
            synth_per_class: 200,
            synth_length: 64,
            synth_separation: 1.0,
            synth_noise: 0.05,
            train_per_class: 400,
            out: PathBuf::from("results"),
            activation: Activation::Sine,
            density: 0.2,
            spectral_margin: 0.9999,
            attenuation: None,
            centering: false,
            workers: None,
        }
    }
}

impl<'de> Deserialize<'de> for Activation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn effective_node_counts(&self) -> Vec<usize> {
        if self.kind == ExperimentKind::None {
            vec![0]
        } else if self.node_counts.is_empty() {
            self.kind.default_node_counts()
        } else {
            self.node_counts.clone()
        }
    }

    fn effective_gains(&self) -> Vec<f64> {
        if self.kind == ExperimentKind::None {
            vec![0.0]
        } else {
            self.input_gains.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.kind != ExperimentKind::None {
            if self.effective_node_counts().contains(&0) {
                return bad("node counts must be positive");
            }
            if self.input_gains.is_empty() {
                return bad("input_gains must be nonempty");
            }
        }
        if self.readout.linear() && self.kind != ExperimentKind::None && self.lambdas.is_empty() {
            return bad("lambdas must be nonempty for the linear readout");
        }
        if (self.readout.pca() || self.kind == ExperimentKind::None) && self.ranks.is_empty() {
            return bad("ranks must be nonempty for the PCA readout");
        }
        Ok(())
    }

    pub fn load_data(&self) -> Result<LabeledDataset> {
        match &self.dataset {
            Some(path) => load_dataset(path),
            None => synth_dataset(
                self.synth_classes,
                self.synth_per_class,
                self.synth_length,
                self.synth_separation,
                self.synth_noise,
                derive_seed(self.seed, &[0x5e]),
            ),
        }
    }
}

/// One CSV line of results.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub kind: ExperimentKind,
    pub node_count: usize,
    pub alpha: f64,
    pub readout: &'static str,
    pub lambda: Option<f64>,
    pub rank: Option<usize>,
    pub trial: usize,
    pub accuracy: f64,
    pub test_time_s: f64,
    pub max_sep_vector: f64,
    pub max_sep_norm: f64,
}

pub const CSV_HEADER: [&str; 11] = [
    "kind", "N", "alpha", "readout", "lambda", "rank", "trial", "accuracy", "test_time_s", "max_sep_vector",
    "max_sep_norm",
];

impl ResultRow {
    fn sort_key(&self, other: &Self) -> std::cmp::Ordering {
        self.kind
            .cmp(&other.kind)
            .then(self.node_count.cmp(&other.node_count))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.readout.cmp(other.readout))
            .then(self.lambda.unwrap_or(0.0).total_cmp(&other.lambda.unwrap_or(0.0)))
            .then(self.rank.cmp(&other.rank))
            .then(self.trial.cmp(&other.trial))
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.kind.to_string(),
            self.node_count.to_string(),
            self.alpha.to_string(),
            self.readout.to_string(),
            self.lambda.map(|l| l.to_string()).unwrap_or_default(),
            self.rank.map(|r| r.to_string()).unwrap_or_default(),
            self.trial.to_string(),
            self.accuracy.to_string(),
            self.test_time_s.to_string(),
            self.max_sep_vector.to_string(),
            self.max_sep_norm.to_string(),
        ]
    }
}

pub fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Trial-averaged view of the rows sharing one `(kind, N, α, readout, λ, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub kind: ExperimentKind,
    pub node_count: usize,
    pub alpha: f64,
    pub readout: &'static str,
    pub lambda: Option<f64>,
    pub rank: Option<usize>,
    pub trials: usize,
    pub mean_accuracy: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std_accuracy: f64,
    pub mean_test_time_s: f64,
    pub mean_max_sep_vector: f64,
    pub mean_max_sep_norm: f64,
}

pub const SUMMARY_HEADER: [&str; 12] = [
    "kind", "N", "alpha", "readout", "lambda", "rank", "trials", "mean_accuracy", "std_accuracy",
    "mean_test_time_s", "mean_max_sep_vector", "mean_max_sep_norm",
];

/// Group sorted rows by everything except the trial and average each group.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let same = |a: &ResultRow, b: &ResultRow| {
        a.kind == b.kind
            && a.node_count == b.node_count
            && a.alpha == b.alpha
            && a.readout == b.readout
            && a.lambda == b.lambda
            && a.rank == b.rank
    };
    rows.chunk_by(|a, b| same(a, b))
        .map(|g| {
            let n = g.len() as f64;
            let mean = |f: fn(&ResultRow) -> f64| g.iter().map(f).sum::<f64>() / n;
            let mean_accuracy = mean(|r| r.accuracy);
            let std_accuracy = if g.len() > 1 {
                (g.iter().map(|r| (r.accuracy - mean_accuracy).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                kind: g[0].kind,
                node_count: g[0].node_count,
                alpha: g[0].alpha,
                readout: g[0].readout,
                lambda: g[0].lambda,
                rank: g[0].rank,
                trials: g.len(),
                mean_accuracy,
                std_accuracy,
                mean_test_time_s: mean(|r| r.test_time_s),
                mean_max_sep_vector: mean(|r| r.max_sep_vector),
                mean_max_sep_norm: mean(|r| r.max_sep_norm),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.kind.to_string(),
            r.node_count.to_string(),
            r.alpha.to_string(),
            r.readout.to_string(),
            r.lambda.map(|l| l.to_string()).unwrap_or_default(),
            r.rank.map(|k| k.to_string()).unwrap_or_default(),
            r.trials.to_string(),
            r.mean_accuracy.to_string(),
            r.std_accuracy.to_string(),
            r.mean_test_time_s.to_string(),
            r.mean_max_sep_vector.to_string(),
            r.mean_max_sep_norm.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Input transformation and sampling plan for one grid point.
struct Pipeline {
    reservoir: Option<AnyReservoir>,
    mask: Option<MultiplexMask>,
    omega: SampleTimes,
}

impl Pipeline {
    fn build(cfg: &ExperimentConfig, n: usize, alpha: f64, raw_len: usize, seed: u64) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        match cfg.kind {
            ExperimentKind::Esn => {
                let target = cfg.spectral_margin * (1.0 - alpha);
                let p = make_esn(n, alpha, cfg.density, target, cfg.activation, &mut rng)?;
                Ok(Pipeline { reservoir: Some(AnyReservoir::Esn(p)), mask: None, omega: SampleTimes::all(raw_len)? })
            }
            ExperimentKind::Tdr => {
                let beta = cfg.attenuation.unwrap_or(cfg.spectral_margin * (1.0 - alpha));
                let p = make_tdr(n, alpha, beta, cfg.activation)?;
                let mask = MultiplexMask::random(n - 1, &mut rng)?;
                let omega = SampleTimes::every(n - 1, raw_len)?;
                Ok(Pipeline { reservoir: Some(AnyReservoir::Tdr(p)), mask: Some(mask), omega })
            }
            ExperimentKind::None => Ok(Pipeline { reservoir: None, mask: None, omega: SampleTimes::all(raw_len)? }),
        }
    }

    /// Sampled states of one signal. Without a reservoir the raw signal is a
    /// one-node "state".
    fn states(&self, u: &Signal) -> Result<StateMatrix> {
        match &self.reservoir {
            Some(r) => match &self.mask {
                Some(m) => r.drive_sampled(&apply_mask(u, m), &self.omega),
                None => r.drive_sampled(u, &self.omega),
            },
            None => StateMatrix::from_row_major(u.len(), 1, u.to_vec()),
        }
    }

    /// Feature vector for the principal-component readout.
    fn pca_features(&self, states: &StateMatrix) -> Result<NormVector> {
        match self.reservoir {
            Some(_) => Ok(norm_vector(states)),
            None => NormVector::new(states.as_slice().to_vec()),
        }
    }
}

fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

fn run_grid_point(
    cfg: &ExperimentConfig,
    train: &LabeledDataset,
    test: &LabeledDataset,
    trial: usize,
    n: usize,
    (alpha_index, alpha): (usize, f64),
) -> Result<Vec<ResultRow>> {
    let seed = derive_seed(cfg.seed, &[trial as u64, cfg.kind.id(), n as u64, alpha_index as u64]);
    let pipe = Pipeline::build(cfg, n, alpha, train.signal_len(), seed)?;

    let train_states = train.signals().iter().map(|u| pipe.states(u)).collect::<Result<Vec<_>>>()?;
    let sep_vector = separation_ratio(&train_states, train.partition(), SeparationVariant::Vector)?.max();
    let sep_norm = separation_ratio(&train_states, train.partition(), SeparationVariant::Norm)?.max();

    let started = Instant::now();
    let test_states = test.signals().iter().map(|u| pipe.states(u)).collect::<Result<Vec<_>>>()?;
    let drive_time = started.elapsed().as_secs_f64();
    let truth = test.labels();

    let row = |readout, lambda, rank, acc, time| ResultRow {
        kind: cfg.kind,
        node_count: n,
        alpha,
        readout,
        lambda,
        rank,
        trial,
        accuracy: acc,
        test_time_s: time,
        max_sep_vector: sep_vector,
        max_sep_norm: sep_norm,
    };
    let mut rows = Vec::new();

    if cfg.readout.linear() && pipe.reservoir.is_some() {
        for &lambda in &cfg.lambdas {
            let model = train_linear(&train_states, train.partition(), &pipe.omega, lambda)?;
            let started = Instant::now();
            let predicted = test_states
                .iter()
                .map(|s| classify_linear(&model, s).map(|d| d.class))
                .collect::<Result<Vec<_>>>()?;
            let time = drive_time + started.elapsed().as_secs_f64();
            rows.push(row("linear", Some(lambda), None, accuracy(&predicted, &truth), time));
        }
    }
    if cfg.readout.pca() || pipe.reservoir.is_none() {
        let centering = if cfg.centering { Centering::Centered } else { Centering::Uncentered };
        let train_b = train_states.iter().map(|s| pipe.pca_features(s)).collect::<Result<Vec<_>>>()?;
        for &rank in &cfg.ranks {
            let model = train_pca(&train_b, train.partition(), &pipe.omega, rank, centering)?;
            let started = Instant::now();
            let predicted = test_states
                .iter()
                .map(|s| pipe.pca_features(s).and_then(|b| classify_pca(&model, &b)).map(|d| d.class))
                .collect::<Result<Vec<_>>>()?;
            let time = drive_time + started.elapsed().as_secs_f64();
            rows.push(row("pca", None, Some(rank), accuracy(&predicted, &truth), time));
        }
    }
    Ok(rows)
}

/// Outcome of a run: every successful row (sorted) and the first failure, if any.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub rows: Vec<ResultRow>,
    pub failure: Option<Error>,
}

/// Run the configured grid on `data`, without touching the filesystem.
pub fn run_on(cfg: &ExperimentConfig, data: &LabeledDataset) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let splits = (0..cfg.trials)
        .map(|trial| {
            split(
                data,
                SplitSpec { train_per_class: cfg.train_per_class, seed: derive_seed(cfg.seed, &[trial as u64]) },
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let nodes = cfg.effective_node_counts();
    let gains = cfg.effective_gains();
    let mut jobs = Vec::new();
    for trial in 0..cfg.trials {
        for &n in &nodes {
            for (ai, &alpha) in gains.iter().enumerate() {
                jobs.push((trial, n, ai, alpha));
            }
        }
    }

    let work = || {
        jobs.par_iter()
            .map(|&(trial, n, ai, alpha)| {
                let s = &splits[trial];
                run_grid_point(cfg, &s.train, &s.test, trial, n, (ai, alpha))
            })
            .collect::<Vec<_>>()
    };
    let results = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    };

    let mut rows = Vec::new();
    let mut failure = None;
    for r in results {
        match r {
            Ok(mut rs) => rows.append(&mut rs),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    rows.sort_by(|a, b| a.sort_key(b));
    Ok(ExperimentOutcome { rows, failure })
}

/// Load the data, run the grid, and write `results.csv` (one row per trial)
/// and `summary.csv` (trial means) under `cfg.out`.
///
/// Rows from grid points that succeeded are written even when another grid
/// point fails; the failure is then returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let data = cfg.load_data()?;
    let outcome = run_on(cfg, &data)?;
    fs::create_dir_all(&cfg.out)?;
    write_rows(&outcome.rows, BufWriter::new(File::create(cfg.out.join("results.csv"))?))?;
    write_summary(&summarize(&outcome.rows), BufWriter::new(File::create(cfg.out.join("summary.csv"))?))?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(outcome.rows),
    }
}

/// Settings for the state-divergence bound figures.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundFigureConfig {
    pub class: usize,
    pub node_count: usize,
    pub alpha: f64,
    pub seed: u64,
    pub activation: Activation,
    pub density: f64,
    pub spectral_margin: f64,
    pub attenuation: Option<f64>,
    /// Explicit pair of dataset indices; otherwise two distinct random members of `class`.
    pub pair: Option<(usize, usize)>,
}

impl Default for BoundFigureConfig {
    fn default() -> Self {
        BoundFigureConfig {
            class: 3,
            node_count: 100,
            alpha: 0.5,
            seed: 0,
            activation: Activation::Sine,
            density: 0.2,
            spectral_margin: 0.9999,
            attenuation: None,
            pair: None,
        }
    }
}

/// Bound-ratio series for the ESN and the TDR on one pair of signals.
pub fn bound_figures(cfg: &BoundFigureConfig, data: &LabeledDataset) -> Result<(BoundRatioSeries, BoundRatioSeries)> {
    let mut rng = seeded_rng(cfg.seed);
    let (i, j) = match cfg.pair {
        Some((i, j)) => {
            if i >= data.len() || j >= data.len() {
                return Err(Error::Config(format!("pair ({i}, {j}) outside dataset of size {}", data.len())));
            }
            (i, j)
        }
        None => {
            if cfg.class >= data.class_count() {
                return Err(Error::Config(format!("class {} not in dataset ({} classes)", cfg.class, data.class_count())));
            }
            let members = data.partition().members(cfg.class);
            if members.len() < 2 {
                return Err(Error::Config(format!("class {} has fewer than two signals", cfg.class)));
            }
            let picks = index::sample(&mut rng, members.len(), 2);
            (members[picks.index(0)], members[picks.index(1)])
        }
    };
    let (u_i, u_j) = (&data.signals()[i], &data.signals()[j]);
    let target = cfg.spectral_margin * (1.0 - cfg.alpha);
    let esn = make_esn(cfg.node_count, cfg.alpha, cfg.density, target, cfg.activation, &mut rng)?;
    let esn_series = esn_bound_ratio(&esn, u_i, u_j)?.with_pair(i, j);

    let beta = cfg.attenuation.unwrap_or(target);
    let tdr = make_tdr(cfg.node_count, cfg.alpha, beta, cfg.activation)?;
    let mask = MultiplexMask::random(cfg.node_count - 1, &mut rng)?;
    let tdr_series = tdr_bound_ratio(&tdr, &apply_mask(u_i, &mask), &apply_mask(u_j, &mask))?.with_pair(i, j);
    Ok((esn_series, tdr_series))
}

/// Write `bound_esn.csv` and `bound_tdr.csv` (and SVG plots when `svg`) into `out`.
pub fn emit_bound_figures(
    cfg: &BoundFigureConfig,
    data: &LabeledDataset,
    out: &Path,
    svg: bool,
) -> Result<(BoundRatioSeries, BoundRatioSeries)> {
    let (esn, tdr) = bound_figures(cfg, data)?;
    fs::create_dir_all(out)?;
    for s in [&esn, &tdr] {
        let stem = format!("bound_{}", s.kind);
        write_series_csv(BufWriter::new(File::create(out.join(format!("{stem}.csv")))?), s.points())?;
        if svg {
            let title = format!("{} bound ratio, pair {:?}", s.kind, s.pair.unwrap_or((0, 0)));
            fs::write(out.join(format!("{stem}.svg")), svg_polyline(&title, &s.ratios))?;
        }
    }
    Ok((esn, tdr))
}

/// A bare-bones line plot of `values` against their index, y-axis from 0 to
/// `max(1, max(values))` with a dashed reference line at 1.
pub fn svg_polyline(title: &str, values: &[f64]) -> String {
    let (w, h, pad) = (640.0, 360.0, 40.0);
    let ymax = values.iter().copied().fold(1.0, f64::max);
    let xmax = (values.len().max(2) - 1) as f64;
    let x = |i: usize| pad + (w - 2.0 * pad) * i as f64 / xmax;
    let y = |v: f64| h - pad - (h - 2.0 * pad) * v / ymax;
    let points: Vec<String> = values.iter().enumerate().map(|(i, &v)| format!("{:.2},{:.2}", x(i), y(v))).collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n",
            "<text x=\"{pad}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
            "<rect x=\"{pad}\" y=\"{pad}\" width=\"{iw}\" height=\"{ih}\" fill=\"none\" stroke=\"black\"/>\n",
            "<line x1=\"{pad}\" y1=\"{one:.2}\" x2=\"{right}\" y2=\"{one:.2}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
            "<polyline fill=\"none\" stroke=\"steelblue\" points=\"{pts}\"/>\n",
            "</svg>\n"
        ),
        w = w,
        h = h,
        pad = pad,
        iw = w - 2.0 * pad,
        ih = h - 2.0 * pad,
        one = y(1.0),
        right = w - pad,
        title = title,
        pts = points.join(" "),
    )
}
