use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use segpipe_core::{
    equalize_with, labels_to_image, load_netpbm, median_filter, save_pgm, segment, synth,
    FcmConfig, GrayImage, LabelMap, PipelineConfig, WindowSpec,
};
use thiserror::Error;

use crate::report::{millis, path_string, ConfigEcho, RunReport};
use crate::{FcmFlags, HeMode, OutputArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: segpipe_core::ParseError,
    },
    #[error(transparent)]
    Stage(#[from] segpipe_core::Error),
    #[error("report serialization failed: {0}")]
    Report(#[from] serde_json::Error),
}

impl CliError {
    /// Usage errors exit with 2 (clap's code); the rest are distinct.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Stage(_) => 5,
            CliError::Report(_) => 6,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Input PGM or PPM file
    pub input: PathBuf,
    #[command(flatten)]
    pub fcm: FcmFlags,
    /// Median window side length (odd)
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    /// Skip histogram equalization
    #[arg(long)]
    pub skip_he: bool,
    /// Skip median filtering
    #[arg(long)]
    pub skip_median: bool,
    #[arg(long, value_enum, default_value_t = HeMode::Prose)]
    pub he_mode: HeMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EqualizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = HeMode::Prose)]
    pub he_mode: HeMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MedianArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FcmArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub fcm: FcmFlags,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum GenKind {
    /// Left half at --low, right half at --high
    TwoRegion,
    /// Horizontal ramp over the full level range
    Gradient,
    /// Every level equally often (width = max level + 1)
    Uniform,
    /// Independent uniform noise
    Random,
    /// The 5x5 median worked example
    Fig2,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::TwoRegion)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 128)]
    pub width: usize,
    #[arg(long, default_value_t = 128)]
    pub height: usize,
    #[arg(long, default_value_t = 60)]
    pub low: u8,
    #[arg(long, default_value_t = 190)]
    pub high: u8,
    #[arg(long, default_value_t = 255)]
    pub max_level: u8,
    /// Fraction of pixels replaced by salt-and-pepper noise
    #[arg(long, default_value_t = 0.0)]
    pub noise_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output image path
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth label image (two-region only; labels 0 and max level)
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub ascii: bool,
}

fn read_image(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    load_netpbm(&bytes).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

struct Writer<'a> {
    opts: &'a OutputArgs,
    written: Vec<String>,
}

impl<'a> Writer<'a> {
    fn new(opts: &'a OutputArgs) -> Result<Self> {
        fs::create_dir_all(&opts.out_dir).map_err(|source| CliError::Io {
            path: opts.out_dir.clone(),
            source,
        })?;
        Ok(Self {
            opts,
            written: Vec::new(),
        })
    }

    fn image(&mut self, name: &str, img: &GrayImage) -> Result<()> {
        let path = self.opts.out_dir.join(name);
        write_file(&path, &save_pgm(img, !self.opts.ascii))?;
        self.written.push(path_string(&path));
        Ok(())
    }

    fn report(self, mut report: RunReport) -> Result<()> {
        report.outputs = self.written;
        let path = self.opts.out_dir.join("report.json");
        let mut json = serde_json::to_vec_pretty(&report)?;
        json.push(b'\n');
        write_file(&path, &json)
    }
}

fn fcm_config(flags: &FcmFlags) -> FcmConfig {
    FcmConfig {
        clusters: flags.clusters,
        fuzzifier: flags.fuzzifier,
        tolerance: flags.tol,
        max_iters: flags.max_iters,
        seed: flags.seed,
    }
}

fn he_mode_name(mode: HeMode) -> &'static str {
    match mode {
        HeMode::Prose => "prose",
        HeMode::Minmax => "minmax",
    }
}

fn segment_and_write(
    command: &'static str,
    input: &Path,
    cfg: PipelineConfig,
    mut echo: ConfigEcho,
    output: &OutputArgs,
) -> Result<()> {
    let img = read_image(input)?;
    let res = segment(&img, &cfg)?;
    let clusters = cfg.fcm.clusters;

    let mut out = Writer::new(output)?;
    out.image("equalized.pgm", &res.equalized)?;
    out.image("denoised.pgm", &res.denoised)?;
    out.image(
        "labels.pgm",
        &labels_to_image(&res.labels, clusters, img.max_level())?,
    )?;
    for (k, map) in res.membership_maps.iter().enumerate() {
        out.image(&format!("membership_{k}.pgm"), map)?;
    }

    echo.clusters = Some(clusters);
    echo.fuzzifier = Some(cfg.fcm.fuzzifier);
    echo.tol = Some(cfg.fcm.tolerance);
    echo.max_iters = Some(cfg.fcm.max_iters);
    echo.seed = Some(cfg.fcm.seed);
    echo.skip_he = cfg.skip_equalize;
    echo.skip_median = cfg.skip_median;
    echo.ascii = output.ascii;

    let t = res.timings;
    let timings_ms = BTreeMap::from([
        ("equalize", millis(t.equalize)),
        ("median", millis(t.median)),
        ("fcm", millis(t.fcm)),
        ("total", millis(t.total)),
    ]);
    out.report(RunReport {
        command,
        input: path_string(input),
        config: echo,
        timings_ms,
        fcm_iterations: Some(res.fcm_iterations),
        objective_trace: Some(res.objective_trace),
        converged: Some(res.converged),
        centers: Some(res.centers),
        outputs: Vec::new(),
    })
}

pub fn run(args: RunArgs) -> Result<()> {
    let cfg = PipelineConfig {
        window: WindowSpec::new(args.window)?,
        fcm: fcm_config(&args.fcm),
        equalize_mode: args.he_mode.into(),
        skip_equalize: args.skip_he,
        skip_median: args.skip_median,
    };
    let echo = ConfigEcho {
        window: Some(args.window),
        he_mode: Some(he_mode_name(args.he_mode)),
        ..Default::default()
    };
    segment_and_write("run", &args.input, cfg, echo, &args.output)
}

pub fn fcm(args: FcmArgs) -> Result<()> {
    let cfg = PipelineConfig {
        fcm: fcm_config(&args.fcm),
        skip_equalize: true,
        skip_median: true,
        ..Default::default()
    };
    segment_and_write("fcm", &args.input, cfg, ConfigEcho::default(), &args.output)
}

fn single_stage_report(
    command: &'static str,
    input: &Path,
    stage: &'static str,
    elapsed: std::time::Duration,
    config: ConfigEcho,
) -> RunReport {
    RunReport {
        command,
        input: path_string(input),
        config,
        timings_ms: BTreeMap::from([(stage, millis(elapsed)), ("total", millis(elapsed))]),
        fcm_iterations: None,
        objective_trace: None,
        converged: None,
        centers: None,
        outputs: Vec::new(),
    }
}

pub fn equalize(args: EqualizeArgs) -> Result<()> {
    let img = read_image(&args.input)?;
    let start = Instant::now();
    let out_img = equalize_with(&img, args.he_mode.into());
    let elapsed = start.elapsed();
    let mut out = Writer::new(&args.output)?;
    out.image("equalized.pgm", &out_img)?;
    let echo = ConfigEcho {
        he_mode: Some(he_mode_name(args.he_mode)),
        ascii: args.output.ascii,
        ..Default::default()
    };
    out.report(single_stage_report("equalize", &args.input, "equalize", elapsed, echo))
}

pub fn median(args: MedianArgs) -> Result<()> {
    let window = WindowSpec::new(args.window)?;
    let img = read_image(&args.input)?;
    let start = Instant::now();
    let out_img = median_filter(&img, window);
    let elapsed = start.elapsed();
    let mut out = Writer::new(&args.output)?;
    out.image("denoised.pgm", &out_img)?;
    let echo = ConfigEcho {
        window: Some(args.window),
        ascii: args.output.ascii,
        ..Default::default()
    };
    out.report(single_stage_report("median", &args.input, "median", elapsed, echo))
}

pub fn gen(args: GenArgs) -> Result<()> {
    if args.truth.is_some() && !matches!(args.kind, GenKind::TwoRegion) {
        return Err(segpipe_core::Error::InvalidConfig(
            "--truth is only available for two-region images".into(),
        )
        .into());
    }
    let mut truth = None;
    let img = match args.kind {
        GenKind::TwoRegion => {
            let (img, labels) =
                synth::two_region(args.width, args.height, args.low, args.high, args.max_level)?;
            truth = Some(labels);
            img
        }
        GenKind::Gradient => synth::gradient(args.width, args.height, args.max_level)?,
        GenKind::Uniform => synth::uniform_levels(args.max_level, args.height)?,
        GenKind::Random => synth::random_image(args.width, args.height, args.max_level, args.seed)?,
        GenKind::Fig2 => synth::fig2_grid(),
    };
    let img = if args.noise_frac > 0.0 {
        synth::salt_and_pepper(&img, args.noise_frac, args.seed)?
    } else {
        img
    };
    write_file(&args.out, &save_pgm(&img, !args.ascii))?;

    if let (Some(path), Some(labels)) = (&args.truth, truth) {
        let map = LabelMap {
            width: img.width(),
            height: img.height(),
            labels,
        };
        write_file(path, &save_pgm(&labels_to_image(&map, 2, img.max_level())?, !args.ascii))?;
    }
    Ok(())
}
