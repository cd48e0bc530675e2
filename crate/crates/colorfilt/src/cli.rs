//! The `colorfilt` command line. Exit codes: 0 success, 1 I/O or processing
//! failure, 2 invalid arguments.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use colorfilt_core::color::convert;
use colorfilt_core::filters::{apply_denoise, apply_edge};
use colorfilt_core::metrics;
use colorfilt_core::noise::apply_noise;
use colorfilt_core::synth::generate_synthetic_document;
use colorfilt_core::{Approach, ColorSpace, FilterKind, FilterSpec, LeeParams, NoiseSpec};

use crate::error::{Error, Result};
use crate::harness::{run_matrix, ExperimentConfig};
use crate::io::{load_image, save_image, save_scalar_image};
use crate::report::{emit_csv, emit_json, sig6, summarize};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Mean,
    Median,
    #[value(alias = "morph_denoise")]
    MorphDenoise,
    Laplacian,
    Sobel,
    #[value(alias = "morph_gradient")]
    MorphGradient,
}

impl From<KindArg> for FilterKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Mean => FilterKind::Mean,
            KindArg::Median => FilterKind::Median,
            KindArg::MorphDenoise => FilterKind::MorphDenoise,
            KindArg::Laplacian => FilterKind::Laplacian,
            KindArg::Sobel => FilterKind::Sobel,
            KindArg::MorphGradient => FilterKind::MorphGradient,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ApproachArg {
    Marginal,
    Vector,
    /// marginal pass, then vector pass
    Mv,
    /// vector pass, then marginal pass
    Vm,
}

impl From<ApproachArg> for Approach {
    fn from(a: ApproachArg) -> Self {
        match a {
            ApproachArg::Marginal => Approach::Marginal,
            ApproachArg::Vector => Approach::Vector,
            ApproachArg::Mv => Approach::MarginalThenVector,
            ApproachArg::Vm => Approach::VectorThenMarginal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceArg {
    Rgb,
    Hsb,
}

impl From<SpaceArg> for ColorSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Rgb => ColorSpace::Rgb,
            SpaceArg::Hsb => ColorSpace::Hsb,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NoiseArg {
    /// gaussian, weak (sigma 10)
    Noise1,
    /// gaussian, strong (sigma 30)
    Noise2,
    /// speckle, weak (variance 0.04)
    Noise3,
    /// speckle, strong (variance 0.16)
    Noise4,
    /// salt and pepper, weak (density 0.02)
    Noise5,
    /// salt and pepper, strong (density 0.10)
    Noise6,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MetricArg {
    Psnr,
    Mse,
    Sr,
    Rsc,
}

#[derive(Debug, Parser)]
#[command(name = "colorfilt", version, about = "Marginal, vector and dual color filtering of document images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter an image. Edge filters write a grayscale map rescaled so its
    /// maximum is 255 and print the scale factor.
    Filter {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum)]
        approach: ApproachArg,
        /// Color space the filter runs in; the result is converted back to RGB.
        #[arg(long, value_enum, default_value = "rgb")]
        space: SpaceArg,
    },
    /// Corrupt an image with one of the six noise models.
    Noise {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        model: NoiseArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the model's default parameter (sigma, variance or density).
        #[arg(long)]
        parameter: Option<f64>,
    },
    /// Compare two images, or score the edge map of TEST with R_SC.
    Metric {
        reference: PathBuf,
        test: PathBuf,
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "rgb")]
        space: SpaceArg,
        /// Edge filter used to build the map for `rsc`; REFERENCE is not read.
        #[arg(long, value_enum, default_value = "sobel")]
        edge: KindArg,
        #[arg(long, value_enum, default_value = "vector")]
        approach: ApproachArg,
        /// Lee-smooth the edge map before `rsc`.
        #[arg(long)]
        lee: bool,
    },
    /// Run an experiment matrix and write CSV and JSON results.
    Bench {
        /// JSON experiment config; the built-in desk corpus when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory receiving results.csv and results.json; overrides the
        /// config's output paths.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic document page.
    Synth {
        output: PathBuf,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // bad filter/approach or noise parameter combinations are argument errors
            Error::Core(
                core @ (colorfilt_core::Error::InvalidApproach { .. }
                | colorfilt_core::Error::InvalidNoise { .. }
                | colorfilt_core::Error::SegmentLength(_)),
            ) => Failure::Usage(core.to_string()),
            Error::Config(msg) => Failure::Usage(format!("invalid experiment config: {msg}")),
            other => Failure::Run(other),
        }
    }
}

impl From<colorfilt_core::Error> for Failure {
    fn from(e: colorfilt_core::Error) -> Self {
        Error::Core(e).into()
    }
}

/// Parse `args` (program name first) and run the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Filter { input, output, kind, approach, space } => {
            let spec = FilterSpec::new(kind.into(), approach.into())?;
            cmd_filter(&input, &output, spec, space.into())
        }
        Command::Noise { input, output, model, seed, parameter } => {
            let mut spec = NoiseSpec::from_id(model as u8 + 1, seed)?;
            if let Some(p) = parameter {
                spec = spec.with_parameter(p);
            }
            spec.validate()?;
            let img = load_image(&input)?;
            save_image(&apply_noise(&img, &spec)?, &output)?;
            Ok(())
        }
        Command::Metric { reference, test, metric, space, edge, approach, lee } => {
            let value = match metric {
                MetricArg::Rsc => {
                    let spec = FilterSpec::new(edge.into(), approach.into())?;
                    if !spec.kind.is_edge() {
                        return Err(Failure::Usage(format!("{} is not an edge filter", spec.kind)));
                    }
                    let img = convert(&load_image(&test)?, space.into())?;
                    let map = apply_edge(&img, spec)?;
                    metrics::rsc(&map, metrics::SEGMENT_LENGTH, lee.then(LeeParams::default))?
                }
                _ => {
                    let a = convert(&load_image(&reference)?, space.into())?;
                    let b = convert(&load_image(&test)?, space.into())?;
                    match metric {
                        MetricArg::Psnr => metrics::psnr(&a, &b)?,
                        MetricArg::Mse => metrics::mse(&a, &b)?,
                        _ => metrics::sr(&a, &b)?,
                    }
                }
            };
            println!("{}", sig6(value));
            Ok(())
        }
        Command::Bench { config, out } => cmd_bench(config.as_deref(), out.as_deref()),
        Command::Synth { output, width, height, seed } => {
            let page = generate_synthetic_document(width, height, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            save_image(&page, &output)?;
            Ok(())
        }
    }
}

fn cmd_filter(input: &Path, output: &Path, spec: FilterSpec, space: ColorSpace) -> std::result::Result<(), Failure> {
    let img = convert(&load_image(input)?, space)?;
    if spec.kind.is_edge() {
        let map = apply_edge(&img, spec)?;
        let scale = save_scalar_image(&map, output)?;
        println!("scale {}", sig6(scale));
    } else {
        let filtered = apply_denoise(&img, spec)?;
        save_image(&convert(&filtered, ColorSpace::Rgb)?, output)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    Ok(BufWriter::new(file))
}

fn cmd_bench(config_path: Option<&Path>, out: Option<&Path>) -> std::result::Result<(), Failure> {
    let mut config = match config_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
            ExperimentConfig::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?
        }
        None => ExperimentConfig::desk_default(),
    };
    if let Some(dir) = out {
        config.output.csv = Some(dir.join("results.csv"));
        config.output.json = Some(dir.join("results.json"));
    }
    let rows = run_matrix(&config)?;
    if let Some(path) = &config.output.csv {
        emit_csv(&rows, config.csv_timing, create(path)?)?;
    }
    if let Some(path) = &config.output.json {
        emit_json(&config, &rows, create(path)?)?;
    }
    if config.output.csv.is_none() && config.output.json.is_none() {
        emit_csv(&rows, config.csv_timing, std::io::stdout().lock())?;
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    print!("{}", summarize(&rows));
    println!("{} rows, {} with errors", rows.len(), failed);
    Ok(())
}
