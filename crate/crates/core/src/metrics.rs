//! Reconstruction-quality metrics and the comparison report they feed.
//!
//! The quality figure throughout is PSNR, `10·log10(peak²/MSE)`, computed
//! per channel and pooled (pooled PSNR comes from the channel-pooled MSE,
//! not from averaging per-channel dB values). A perfect reconstruction has
//! MSE 0 and is reported as an honest `+∞` sentinel rather than a large
//! made-up number.
//!
//! [`band_energy_fraction`] is the diagnostic behind every bandlimiting
//! argument in the crate: how much of an image's spectral energy lives
//! inside the centered low-frequency rectangle that survives decimation.

use crate::error::Error;
use crate::grid::{dft2, ImageGrid};
use crate::Result;

/// Exact header of the comparison CSV, one column per [`CsvRow`] field.
pub const CSV_HEADER: [&str; 14] = [
    "scene",
    "pipeline",
    "D",
    "U",
    "psf_kind",
    "psf_radius",
    "eps",
    "noise_sigma",
    "seed",
    "psnr_r",
    "psnr_g",
    "psnr_b",
    "psnr_pooled",
    "mse_pooled",
];

/// Per-channel mean squared error between two same-shaped images.
pub fn mse(a: &ImageGrid, b: &ImageGrid) -> Result<Vec<f64>> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "mse over {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let mut out = Vec::with_capacity(a.channels());
    for ch in 0..a.channels() {
        let sum: f64 = a
            .channel(ch)
            .iter()
            .zip(b.channel(ch))
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        out.push(sum / (a.height() * a.width()) as f64);
    }
    Ok(out)
}

/// PSNR in dB for a known MSE. `+∞` when the MSE is zero.
///
/// The caller owns `peak` validation; this is the shared formula used by
/// [`psnr`] and the report builders.
pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

/// Per-channel and pooled PSNR of `b` against `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsnrValues {
    pub per_channel: Vec<f64>,
    pub pooled: f64,
}

/// PSNR between two images: per-channel values plus the pooled figure
/// computed from the channel-pooled MSE. Symmetric in its image arguments.
pub fn psnr(a: &ImageGrid, b: &ImageGrid, peak: f64) -> Result<PsnrValues> {
    if peak <= 0.0 || !peak.is_finite() {
        return Err(Error::NonPositiveInput("psnr peak"));
    }
    let per_mse = mse(a, b)?;
    let pooled_mse = per_mse.iter().sum::<f64>() / per_mse.len() as f64;
    Ok(PsnrValues {
        per_channel: per_mse.iter().map(|&m| psnr_from_mse(m, peak)).collect(),
        pooled: psnr_from_mse(pooled_mse, peak),
    })
}

/// Fraction of spectral energy inside the centered rectangle of half-widths
/// `band·H/2` × `band·W/2`, pooled over channels.
///
/// Energy is `Σ|X|²` over DFT bins, so the fraction is invariant under DFT
/// normalization conventions (Parseval) and under scaling the image. A
/// zero-energy image returns 1.0: nothing lies outside the band.
pub fn band_energy_fraction(img: &ImageGrid, band: f64) -> Result<f64> {
    if !(band > 0.0 && band <= 1.0) {
        return Err(Error::BandOutOfRange(band));
    }
    let spec = dft2(img);
    let (h, w) = (img.height(), img.width());
    let rmax = band * h as f64 / 2.0;
    let cmax = band * w as f64 / 2.0;

    let mut inside = 0.0f64;
    let mut total = 0.0f64;
    for ch in 0..spec.channels() {
        let plane = spec.channel(ch);
        for r in 0..h {
            let fr = signed_frequency(r, h);
            for c in 0..w {
                let fc = signed_frequency(c, w);
                let e = plane[r * w + c].norm_sqr();
                total += e;
                if fr.abs() as f64 <= rmax && fc.abs() as f64 <= cmax {
                    inside += e;
                }
            }
        }
    }
    if total == 0.0 {
        return Ok(1.0);
    }
    Ok(inside / total)
}

/// Signed frequency of DFT bin `k` on an `n`-point axis: `0..=n/2` map to
/// themselves, the rest to negatives. On even axes the single Nyquist bin
/// counts as `+n/2`.
pub fn signed_frequency(k: usize, n: usize) -> isize {
    if k <= n / 2 {
        k as isize
    } else {
        k as isize - n as isize
    }
}

/// Quality summary of one reconstruction against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub per_channel_mse: Vec<f64>,
    pub per_channel_psnr: Vec<f64>,
    /// Channel-pooled MSE (mean over all samples of all channels).
    pub pooled_mse: f64,
    /// PSNR of the pooled MSE, not the mean of per-channel PSNRs.
    pub pooled_psnr: f64,
    /// Peak value the PSNR is quoted against.
    pub peak: f64,
    /// Free-form diagnostics (resolvable pitch, band fractions, …).
    pub notes: Vec<String>,
}

impl MetricsReport {
    /// Score `test` against `reference` with the given peak.
    pub fn compare(reference: &ImageGrid, test: &ImageGrid, peak: f64) -> Result<Self> {
        if peak <= 0.0 || !peak.is_finite() {
            return Err(Error::NonPositiveInput("psnr peak"));
        }
        let per_channel_mse = mse(reference, test)?;
        let pooled_mse =
            per_channel_mse.iter().sum::<f64>() / per_channel_mse.len() as f64;
        Ok(Self {
            per_channel_psnr: per_channel_mse
                .iter()
                .map(|&m| psnr_from_mse(m, peak))
                .collect(),
            pooled_psnr: psnr_from_mse(pooled_mse, peak),
            per_channel_mse,
            pooled_mse,
            peak,
            notes: Vec::new(),
        })
    }

    /// The (r, g, b) PSNR triple for the CSV row. Gray images report their
    /// single channel in all three columns.
    pub fn psnr_rgb(&self) -> [f64; 3] {
        match self.per_channel_psnr.len() {
            1 => [self.per_channel_psnr[0]; 3],
            3 => [
                self.per_channel_psnr[0],
                self.per_channel_psnr[1],
                self.per_channel_psnr[2],
            ],
            n => unreachable!("images have 1 or 3 channels, got {n}"),
        }
    }
}

/// One row of the comparison CSV; field order mirrors [`CSV_HEADER`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    /// Scene spec string exactly as the user supplied it.
    pub scene: String,
    /// `"hyperacuity"` or `"baseline"`.
    pub pipeline: String,
    pub decimation: usize,
    pub upsample: usize,
    pub psf_kind: String,
    pub psf_radius: f64,
    pub eps: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub psnr_r: f64,
    pub psnr_g: f64,
    pub psnr_b: f64,
    pub psnr_pooled: f64,
    pub mse_pooled: f64,
}

impl CsvRow {
    /// Fields as strings in header order. Floats use the shortest exact
    /// decimal form; infinite PSNR appears as the literal `inf` sentinel.
    pub fn record(&self) -> [String; 14] {
        [
            self.scene.clone(),
            self.pipeline.clone(),
            self.decimation.to_string(),
            self.upsample.to_string(),
            self.psf_kind.clone(),
            self.psf_radius.to_string(),
            self.eps.to_string(),
            self.noise_sigma.to_string(),
            self.seed.to_string(),
            self.psnr_r.to_string(),
            self.psnr_g.to_string(),
            self.psnr_b.to_string(),
            self.psnr_pooled.to_string(),
            self.mse_pooled.to_string(),
        ]
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
