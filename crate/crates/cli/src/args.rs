//! The clap surface: every flag, default, and value enum. Commands receive
//! these structs; conversion into core config types happens here so the
//! command bodies stay about orchestration.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hyperlens::pipeline::{
    CaptureConfig, SamplingMode, DEFAULT_DECIMATION, DEFAULT_EPSILON, DEFAULT_PSF_RADIUS,
};
use hyperlens::psf::PsfSpec;
use hyperlens::Error as CoreError;

use crate::io::{parse_bits, BitDepth};

#[derive(Debug, Parser)]
#[command(
    name = "hyperlens",
    version,
    about = "Simulate an imaging system that blurs on purpose and reconstructs \
             detail finer than its sensor pitch",
    long_about = "Simulate an imaging system that spreads each point of light across \
                  many coarse sensor cells with a known kernel, then inverts that \
                  spreading after capture. Compare it against the conventional \
                  sharp-optics sensor on synthetic scenes, sweep parameters into CSV \
                  reports, and check the photon-budget arithmetic."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic test scene and write it to an image file
    Scene(SceneArgs),
    /// Blur an image with the kernel and decimate it onto the sensor grid
    Capture(CaptureArgs),
    /// Upsample a captured image and invert the blur
    Reconstruct(ReconstructArgs),
    /// Run both routes on one scene; write reconstructions and a metrics CSV
    Compare(CompareArgs),
    /// Run a parameter grid and emit one CSV row per cell
    Sweep(SweepArgs),
    /// Print photon-budget, dynamic-range, and photoreceptor-geometry numbers
    Radiometry(RadiometryArgs),
}

// ---------------------------------------------------------------------------
// Value enums
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsfKindArg {
    Airy,
    Gaussian,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    Point,
    Area,
}

impl From<SamplingArg> for SamplingMode {
    fn from(value: SamplingArg) -> Self {
        match value {
            SamplingArg::Point => SamplingMode::Point,
            SamplingArg::Area => SamplingMode::Area,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum PipelineArg {
    Baseline,
    Hyperacuity,
}

impl PipelineArg {
    pub fn name(self) -> &'static str {
        match self {
            PipelineArg::Baseline => "baseline",
            PipelineArg::Hyperacuity => "hyperacuity",
        }
    }
}

// ---------------------------------------------------------------------------
// Shared flag groups
// ---------------------------------------------------------------------------

/// The optical kernel.
#[derive(Debug, Clone, clap::Args)]
pub struct OpticsArgs {
    /// Blur kernel kind
    #[arg(long, value_enum, default_value = "airy")]
    pub psf: PsfKindArg,

    /// Kernel radius in pixels: first dark ring for airy, sigma for gaussian
    #[arg(long, default_value_t = DEFAULT_PSF_RADIUS)]
    pub psf_radius: f64,

    /// Override the kernel truncation half-width in pixels
    #[arg(long)]
    pub psf_support: Option<usize>,
}

impl OpticsArgs {
    pub fn to_spec(&self) -> Result<PsfSpec, CoreError> {
        let spec = match self.psf {
            PsfKindArg::Airy => PsfSpec::airy(self.psf_radius)?,
            PsfKindArg::Gaussian => PsfSpec::gaussian(self.psf_radius)?,
            PsfKindArg::Delta => PsfSpec::delta(),
        };
        match self.psf_support {
            Some(support) => spec.with_support(support),
            None => Ok(spec),
        }
    }
}

/// The sensor: decimation geometry and noise.
#[derive(Debug, Clone, clap::Args)]
pub struct SensorArgs {
    /// Decimation factor between the input grid and the sensor grid
    #[arg(long, default_value_t = DEFAULT_DECIMATION)]
    pub decimation: usize,

    /// How each sensor cell samples: corner point or block average
    #[arg(long, value_enum, default_value = "point")]
    pub sampling: SamplingArg,

    /// Std of additive Gaussian sensor noise (0 disables noise)
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,

    /// Seed for the sensor-noise generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SensorArgs {
    pub fn to_capture(&self, psf: PsfSpec) -> CaptureConfig {
        CaptureConfig {
            psf,
            decimation: self.decimation,
            sampling_mode: self.sampling.into(),
            noise_sigma: self.noise_sigma,
            seed: self.seed,
        }
    }
}

// ---------------------------------------------------------------------------
// Per-command arguments
// ---------------------------------------------------------------------------

#[derive(Debug, clap::Args)]
pub struct SceneArgs {
    /// Scene description, e.g. "grid_lines,h=500,w=500,pitch=50,width=1"
    #[arg(long, value_name = "SPEC")]
    pub spec: String,

    /// Output image path (.pgm, .ppm, or .pfm)
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// Integer sample depth for .pgm/.ppm output
    #[arg(long, default_value = "8", value_parser = parse_bits)]
    pub bits: BitDepth,
}

#[derive(Debug, clap::Args)]
pub struct CaptureArgs {
    /// Input image path
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    /// Output image path (.pgm, .ppm, or .pfm); dimensions shrink by the
    /// decimation factor
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    #[command(flatten)]
    pub optics: OpticsArgs,

    #[command(flatten)]
    pub sensor: SensorArgs,

    /// Integer sample depth for .pgm/.ppm output
    #[arg(long, default_value = "8", value_parser = parse_bits)]
    pub bits: BitDepth,
}

#[derive(Debug, clap::Args)]
pub struct ReconstructArgs {
    /// Input image path (a captured, decimated image)
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    /// Output image path (.pgm, .ppm, or .pfm)
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// Upsampling factor from the sensor grid to the recovered grid
    #[arg(long, default_value_t = DEFAULT_DECIMATION)]
    pub upsample: usize,

    /// Inverse-filter threshold relative to max |H|, in (0, 1]
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,

    #[command(flatten)]
    pub optics: OpticsArgs,

    /// Sampling mode the capture used; area folds the block-mean response
    /// into the inverted transfer function
    #[arg(long, value_enum, default_value = "point")]
    pub sampling: SamplingArg,

    /// Write the upsampled image without inverting the blur
    #[arg(long)]
    pub stop_after_interpolation: bool,

    /// Invert with pure 1/H and no magnitude guard (numerically dangerous;
    /// ignores --eps)
    #[arg(long)]
    pub unguarded: bool,

    /// Integer sample depth for .pgm/.ppm output
    #[arg(long, default_value = "8", value_parser = parse_bits)]
    pub bits: BitDepth,
}

#[derive(Debug, clap::Args)]
pub struct CompareArgs {
    /// Scene description to run both routes on
    #[arg(long, value_name = "SPEC")]
    pub scene: String,

    /// Directory for reconstructions, metrics.csv, and the run manifest
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    #[command(flatten)]
    pub optics: OpticsArgs,

    #[command(flatten)]
    pub sensor: SensorArgs,

    /// Upsampling factor (default: the decimation factor, restoring the
    /// scene grid)
    #[arg(long)]
    pub upsample: Option<usize>,

    /// Inverse-filter threshold relative to max |H|, in (0, 1]
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,

    /// Peak signal value for PSNR
    #[arg(long, default_value_t = 1.0)]
    pub peak: f64,

    /// Integer sample depth for the output images
    #[arg(long, default_value = "8", value_parser = parse_bits)]
    pub bits: BitDepth,

    /// Write reconstructions as 32-bit float files instead of integer ones
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// Scene description (repeatable; no scenes → header-only CSV)
    #[arg(long = "scene", value_name = "SPEC")]
    pub scenes: Vec<String>,

    /// Pipeline to run (repeatable; default: both)
    #[arg(long = "pipeline", value_enum)]
    pub pipelines: Vec<PipelineArg>,

    /// Decimation factor (repeatable; default: 10)
    #[arg(long = "decimation")]
    pub decimations: Vec<usize>,

    /// Upsampling factor (repeatable; default: track each decimation)
    #[arg(long = "upsample")]
    pub upsamples: Vec<usize>,

    /// Blur kernel kind (repeatable; default: airy)
    #[arg(long = "psf", value_enum)]
    pub psf_kinds: Vec<PsfKindArg>,

    /// Kernel radius in pixels (repeatable; default: 35)
    #[arg(long = "psf-radius")]
    pub psf_radii: Vec<f64>,

    /// Inverse-filter threshold (repeatable; default: 1e-3)
    #[arg(long = "eps")]
    pub epsilons: Vec<f64>,

    /// Sensor noise std (repeatable; default: 0)
    #[arg(long = "noise-sigma")]
    pub noise_sigmas: Vec<f64>,

    /// Noise seed (repeatable; default: 0)
    #[arg(long = "seed")]
    pub seeds: Vec<u64>,

    /// Sampling mode applied to every cell
    #[arg(long, value_enum, default_value = "point")]
    pub sampling: SamplingArg,

    /// Kernel truncation override applied to every cell
    #[arg(long)]
    pub psf_support: Option<usize>,

    /// Peak signal value for PSNR
    #[arg(long, default_value_t = 1.0)]
    pub peak: f64,
}

#[derive(Debug, clap::Args)]
pub struct RadiometryArgs {
    /// Photosite light-collecting area (e.g. 1.767um2)
    #[arg(long, default_value = "1.767um2")]
    pub area: String,

    /// Irradiance on the sensor plane, W/m^2
    #[arg(long, default_value_t = 1.0)]
    pub irradiance: f64,

    /// Exposure time (e.g. 1ms)
    #[arg(long, default_value = "1ms")]
    pub exposure: String,

    /// Illumination wavelength (e.g. 550nm)
    #[arg(long, default_value = "550nm")]
    pub wavelength: String,

    /// Saturation irradiation level
    #[arg(long, default_value_t = 1e8)]
    pub saturation: f64,

    /// Minimum detectable irradiation level
    #[arg(long, default_value_t = 1.0)]
    pub minimum: f64,

    /// Smaller photoreceptor area for the packing comparison
    #[arg(long, default_value = "1.767um2")]
    pub small_area: String,

    /// Larger photoreceptor area for the packing comparison
    #[arg(long, default_value = "4.84um2")]
    pub large_area: String,

    /// Photoreceptor density, count per mm^2
    #[arg(long, default_value_t = 147000.0)]
    pub cone_density: f64,

    /// Fovea diameter (e.g. 1.5mm)
    #[arg(long, default_value = "1.5mm")]
    pub fovea_diameter: String,
}
