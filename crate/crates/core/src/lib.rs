//! # hyperlens
//!
//! Simulation of diffraction-assisted imaging: a deliberately blurred optical
//! system sampled far below its native resolution can be inverted back to a
//! sharper image than a diffraction-free sensor of the same pixel count would
//! ever record. The blur acts as an optical anti-aliasing filter, spreading
//! sub-pixel detail across neighbouring samples where it survives decimation;
//! an inverse filter concentrates it again after upsampling.
//!
//! ## Pipeline
//!
//! ```text
//!   scene ──► diffract ──► sense ──► interpolate_fft ──► inverse_filter ──► output
//!            (PSF blur)   (D:1 decimation,  (U:1 zero-pad   (guarded 1/H)
//!                          optional noise)   upsampling)
//!
//!   baseline:  scene ──► sense ──► interpolate_fft   (no blur, no inversion)
//! ```
//!
//! Both routes are driven by [`pipeline::run_hyperacuity`] and
//! [`pipeline::run_baseline`]; [`metrics`] scores them against the original
//! scene, and [`scenes`] generates deterministic test content. [`radiometry`]
//! holds the photon-count and dynamic-range arithmetic used to size sensor
//! photosites against fovea cones.
//!
//! All image data is `f64` end to end. Transforms are circular: every
//! convolution and every interpolation treats the grid as periodic.
//!
//! ## Modules
//!
//! - [`grid`] — image and spectrum containers, 2-D DFT/IDFT, spectrum algebra
//! - [`psf`] — point-spread-function synthesis (Airy, Gaussian, delta) and OTFs
//! - [`pipeline`] — capture and reconstruction stages and the two full routes
//! - [`metrics`] — MSE/PSNR, band energy, and the comparison report schema
//! - [`scenes`] — deterministic scene generators and their spec-string grammar
//! - [`radiometry`] — photon counts, dynamic range, photosite/cone geometry
//! - [`rng`] — the pinned 64-bit generator behind every stochastic feature

pub mod error;
pub mod grid;
pub mod metrics;
pub mod pipeline;
pub mod psf;
pub mod radiometry;
pub mod rng;
pub mod scenes;

pub use error::Error;
pub use grid::{dft2, idft2, multiply_spectra, ImageGrid, Spectrum};
pub use psf::{make_otf, make_psf, Otf, PsfKind, PsfSpec};
/// Re-exported so downstream code can name spectrum bins without taking
/// its own dependency on the complex-number crate.
pub use num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
