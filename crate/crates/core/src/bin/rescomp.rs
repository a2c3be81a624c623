use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rescomp::data::{load_dataset, read_csv, synth_dataset};
use rescomp::experiment::{emit_bound_figures, run_experiment, BoundFigureConfig, ExperimentConfig};
use rescomp::{Activation, Error, Result};

#[derive(Parser)]
#[command(name = "rescomp", version, about = "Reservoir computing classification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter-grid experiment and write results.csv
    Run(RunArgs),
    /// Write state-divergence bound ratio series for one pair of signals
    Bounds(BoundsArgs),
    /// Convert a CSV dataset (label first, no header) into the binary format
    Convert(ConvertArgs),
    /// Generate a synthetic dataset
    Synth(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags below override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// esn, tdr or none
    #[arg(long)]
    kind: Option<String>,
    /// linear, pca or both
    #[arg(long)]
    readout: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rank: Option<Vec<usize>>,
    #[arg(long)]
    train_per_class: Option<usize>,
    /// Classify raw signals with the PCA readout (same as --kind none)
    #[arg(long)]
    baseline: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    class: usize,
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Activation::Sine)]
    activation: Activation,
    /// Explicit pair of sample indices, e.g. 12,40
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pair: Option<Vec<usize>>,
    /// Also write SVG plots
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct ConvertArgs {
    input: PathBuf,
    output: PathBuf,
    /// Samples are raster-order images of this shape, e.g. 16x16
    #[arg(long)]
    image: Option<String>,
    /// Divide every value by this before writing
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    output: PathBuf,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 200)]
    per_class: usize,
    #[arg(long, default_value_t = 64)]
    length: usize,
    #[arg(long, default_value_t = 1.0)]
    separation: f64,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV instead of the binary format
    #[arg(long)]
    csv: bool,
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(d) = args.dataset {
        cfg.dataset = Some(d);
    }
    if let Some(o) = args.out {
        cfg.out = o;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(k) = args.kind {
        cfg.kind = k.parse()?;
    }
    if args.baseline {
        cfg.kind = "none".parse()?;
    }
    if let Some(r) = args.readout {
        cfg.readout = r.parse()?;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(n) = args.nodes {
        cfg.node_counts = n;
    }
    if let Some(a) = args.alphas {
        cfg.input_gains = a;
    }
    if let Some(l) = args.lambdas {
        cfg.lambdas = l;
    }
    if let Some(r) = args.rank {
        cfg.ranks = r;
    }
    if let Some(t) = args.train_per_class {
        cfg.train_per_class = t;
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    let rows = run_experiment(&cfg)?;
    eprintln!("wrote {} rows to {}", rows.len(), cfg.out.join("results.csv").display());
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<()> {
    let data = load_dataset(&args.dataset)?;
    let cfg = BoundFigureConfig {
        class: args.class,
        node_count: args.nodes,
        alpha: args.alpha,
        seed: args.seed,
        activation: args.activation,
        pair: args.pair.map(|p| (p[0], p[1])),
        ..Default::default()
    };
    let (esn, tdr) = emit_bound_figures(&cfg, &data, &args.out, args.svg)?;
    eprintln!("max ratio: esn {:.4}, tdr {:.4}", esn.max_ratio(), tdr.max_ratio());
    Ok(())
}

fn parse_shape(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("bad image shape '{s}', expected ROWSxCOLS"));
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let shape = (r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?);
    if shape.0 == 0 || shape.1 == 0 {
        return Err(bad());
    }
    Ok(shape)
}

fn convert(args: ConvertArgs) -> Result<()> {
    let mut raw = read_csv(BufReader::new(File::open(&args.input)?))?;
    if let Some(s) = &args.image {
        let (r, c) = parse_shape(s)?;
        if r * c != raw.sample_length {
            return Err(Error::Format(format!("image {r}x{c} does not match sample length {}", raw.sample_length)));
        }
        raw.image_shape = Some((r, c));
    }
    if let Some(scale) = args.scale {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Config("scale must be positive".into()));
        }
        raw.samples.iter_mut().for_each(|v| *v /= scale);
    }
    // Validate before writing so the output is always loadable.
    let data = raw.clone().into_dataset()?;
    raw.write_to(BufWriter::new(File::create(&args.output)?))?;
    eprintln!("wrote {} samples, {} classes, length {}", data.len(), data.class_count(), data.signal_len());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let data = synth_dataset(args.classes, args.per_class, args.length, args.separation, args.noise, args.seed)?;
    if args.csv {
        rescomp::data::write_csv(&data, BufWriter::new(File::create(&args.output)?))
    } else {
        data.save(&args.output)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Bounds(a) => bounds(a),
        Command::Convert(a) => convert(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
