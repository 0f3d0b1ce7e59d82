//! Image and spectrum containers plus the 2-D DFT that connects them.
//!
//! Everything downstream (blur, sensing, interpolation, inversion) is built
//! on the conventions fixed here, so they are spelled out once:
//!
//! - Images are real `f64` rasters with 1 (gray) or 3 (RGB) channels, stored
//!   channel-major, row-major within a channel. Channels never interact.
//! - The forward DFT is unnormalized, `X[v,u] = Σ_{r,c} x[r,c]·e^{-2πi(vr/H + uc/W)}`,
//!   with the DC bin at index `[0][0]`. The inverse carries the full `1/(H·W)`
//!   factor, so `idft2(dft2(x)) == x` up to rounding.
//! - All convolutions implied by spectrum products are circular: the grid is
//!   treated as periodic in both axes. There is no implicit padding anywhere.
//! - Grids may be any size ≥ 1 per axis; nothing assumes powers of two.
//!
//! [`idft2`] refuses spectra that are not Hermitian-symmetric (within
//! [`HERMITIAN_REL_TOL`] of the spectrum peak) instead of silently returning
//! the real part of a complex result.

use std::cell::RefCell;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::Error;
use crate::Result;

/// Relative tolerance for the conjugate-symmetry check in [`idft2`].
///
/// Asymmetry is measured as `max |X[v,u] - conj(X[-v,-u])|` against the
/// largest bin magnitude. Spectra produced by [`dft2`] of a real image pass
/// with orders of magnitude to spare; anything beyond this indicates the
/// caller built a spectrum with no real-valued preimage.
pub const HERMITIAN_REL_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// ImageGrid
// ---------------------------------------------------------------------------

/// A real-valued raster: one plane per color channel.
///
/// Samples are nominally scene radiance in `[0, 1]`, but intermediate stages
/// (inverse filtering in particular) may overshoot; values are only clamped
/// at export time via [`ImageGrid::clipped`]. Every public operation in the
/// crate keeps samples finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    channels: usize,
    height: usize,
    width: usize,
    samples: Vec<f64>,
}

impl ImageGrid {
    /// All-zero grid. `channels` must be 1 or 3 and both dimensions ≥ 1.
    pub fn new(channels: usize, height: usize, width: usize) -> Result<Self> {
        check_shape(channels, height, width)?;
        Ok(Self {
            channels,
            height,
            width,
            samples: vec![0.0; channels * height * width],
        })
    }

    /// Grid filled with a single finite value.
    pub fn constant(channels: usize, height: usize, width: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidImage(format!("non-finite fill value {value}")));
        }
        let mut g = Self::new(channels, height, width)?;
        g.samples.fill(value);
        Ok(g)
    }

    /// Wrap raw samples laid out channel-major, row-major. Rejects length
    /// mismatches and non-finite values.
    pub fn from_samples(
        channels: usize,
        height: usize,
        width: usize,
        samples: Vec<f64>,
    ) -> Result<Self> {
        check_shape(channels, height, width)?;
        let expected = channels * height * width;
        if samples.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} samples for {channels}x{height}x{width}, got {}",
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidImage(format!("non-finite sample {bad}")));
        }
        Ok(Self {
            channels,
            height,
            width,
            samples,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `(channels, height, width)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn get(&self, channel: usize, row: usize, col: usize) -> f64 {
        self.samples[self.index(channel, row, col)]
    }

    pub fn set(&mut self, channel: usize, row: usize, col: usize, value: f64) {
        let i = self.index(channel, row, col);
        self.samples[i] = value;
    }

    /// One channel plane, row-major.
    pub fn channel(&self, channel: usize) -> &[f64] {
        let n = self.height * self.width;
        &self.samples[channel * n..(channel + 1) * n]
    }

    pub fn channel_mut(&mut self, channel: usize) -> &mut [f64] {
        let n = self.height * self.width;
        &mut self.samples[channel * n..(channel + 1) * n]
    }

    /// All samples, channel-major.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Mean sample value of one channel.
    pub fn channel_mean(&self, channel: usize) -> f64 {
        let plane = self.channel(channel);
        plane.iter().sum::<f64>() / plane.len() as f64
    }

    /// Copy with every sample clamped to `[0, 1]`, the export range.
    pub fn clipped(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            *s = s.clamp(0.0, 1.0);
        }
        out
    }

    fn index(&self, channel: usize, row: usize, col: usize) -> usize {
        debug_assert!(channel < self.channels && row < self.height && col < self.width);
        (channel * self.height + row) * self.width + col
    }
}

fn check_shape(channels: usize, height: usize, width: usize) -> Result<()> {
    if channels != 1 && channels != 3 {
        return Err(Error::InvalidImage(format!(
            "channel count must be 1 or 3, got {channels}"
        )));
    }
    if height == 0 || width == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions must be at least 1x1, got {height}x{width}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Complex DFT bins of an [`ImageGrid`], same channel-major layout.
///
/// Bin `[v][u]` holds the unnormalized coefficient of frequency
/// `(v cycles/image vertically, u cycles/image horizontally)`, DC at `[0][0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    channels: usize,
    height: usize,
    width: usize,
    bins: Vec<Complex<f64>>,
}

impl Spectrum {
    /// All-zero spectrum. Same shape rules as [`ImageGrid::new`].
    pub fn zeros(channels: usize, height: usize, width: usize) -> Result<Self> {
        check_shape(channels, height, width)?;
        Ok(Self {
            channels,
            height,
            width,
            bins: vec![Complex::new(0.0, 0.0); channels * height * width],
        })
    }

    /// Wrap raw bins laid out channel-major, row-major.
    pub fn from_bins(
        channels: usize,
        height: usize,
        width: usize,
        bins: Vec<Complex<f64>>,
    ) -> Result<Self> {
        check_shape(channels, height, width)?;
        let expected = channels * height * width;
        if bins.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} bins for {channels}x{height}x{width}, got {}",
                bins.len()
            )));
        }
        if let Some(bad) = bins.iter().find(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(Error::InvalidImage(format!("non-finite bin {bad}")));
        }
        Ok(Self {
            channels,
            height,
            width,
            bins,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn get(&self, channel: usize, row: usize, col: usize) -> Complex<f64> {
        self.bins[self.index(channel, row, col)]
    }

    pub fn set(&mut self, channel: usize, row: usize, col: usize, value: Complex<f64>) {
        let i = self.index(channel, row, col);
        self.bins[i] = value;
    }

    /// One channel plane of bins, row-major.
    pub fn channel(&self, channel: usize) -> &[Complex<f64>] {
        let n = self.height * self.width;
        &self.bins[channel * n..(channel + 1) * n]
    }

    pub fn channel_mut(&mut self, channel: usize) -> &mut [Complex<f64>] {
        let n = self.height * self.width;
        &mut self.bins[channel * n..(channel + 1) * n]
    }

    /// Largest bin magnitude in one channel.
    pub fn channel_max_abs(&self, channel: usize) -> f64 {
        self.channel(channel)
            .iter()
            .map(|b| b.norm())
            .fold(0.0, f64::max)
    }

    fn index(&self, channel: usize, row: usize, col: usize) -> usize {
        debug_assert!(channel < self.channels && row < self.height && col < self.width);
        (channel * self.height + row) * self.width + col
    }
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

thread_local! {
    // One planner per thread: rustfft caches twiddles and algorithm choices
    // per length, which matters when the pipeline transforms the same grid
    // size dozens of times.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

/// In-place 2-D FFT of one `height`×`width` plane: rows first, then columns
/// via transpose. Unnormalized in both directions; [`idft2`] applies the
/// `1/(H·W)` factor itself.
fn fft2_plane(plane: &mut [Complex<f64>], height: usize, width: usize, dir: Direction) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let row_fft = match dir {
            Direction::Forward => planner.plan_fft_forward(width),
            Direction::Inverse => planner.plan_fft_inverse(width),
        };
        let col_fft = match dir {
            Direction::Forward => planner.plan_fft_forward(height),
            Direction::Inverse => planner.plan_fft_inverse(height),
        };

        row_fft.process(plane);

        let mut transposed = vec![Complex::new(0.0, 0.0); plane.len()];
        for r in 0..height {
            for c in 0..width {
                transposed[c * height + r] = plane[r * width + c];
            }
        }
        col_fft.process(&mut transposed);
        for c in 0..width {
            for r in 0..height {
                plane[r * width + c] = transposed[c * height + r];
            }
        }
    });
}

/// Forward 2-D DFT of every channel. Unnormalized: the DC bin equals the
/// plain sum of the channel's samples.
pub fn dft2(image: &ImageGrid) -> Spectrum {
    let (channels, height, width) = image.shape();
    let mut out = Spectrum::zeros(channels, height, width).expect("image shape is valid");
    for ch in 0..channels {
        let plane = out.channel_mut(ch);
        for (bin, &s) in plane.iter_mut().zip(image.channel(ch)) {
            *bin = Complex::new(s, 0.0);
        }
        fft2_plane(plane, height, width, Direction::Forward);
    }
    out
}

/// Inverse 2-D DFT back to a real image, normalizing by `1/(H·W)`.
///
/// The spectrum must be Hermitian-symmetric within [`HERMITIAN_REL_TOL`]
/// of its peak magnitude (checked per channel); the tiny imaginary residue
/// that remains after an honest inverse transform is discarded.
pub fn idft2(spectrum: &Spectrum) -> Result<ImageGrid> {
    let (channels, height, width) = spectrum.shape();
    for ch in 0..channels {
        check_hermitian(spectrum, ch)?;
    }

    let mut out = ImageGrid::new(channels, height, width).expect("spectrum shape is valid");
    let norm = 1.0 / (height as f64 * width as f64);
    let mut scratch = vec![Complex::new(0.0, 0.0); height * width];
    for ch in 0..channels {
        scratch.copy_from_slice(spectrum.channel(ch));
        fft2_plane(&mut scratch, height, width, Direction::Inverse);
        for (s, bin) in out.channel_mut(ch).iter_mut().zip(&scratch) {
            *s = bin.re * norm;
        }
    }
    Ok(out)
}

fn check_hermitian(spectrum: &Spectrum, channel: usize) -> Result<()> {
    let (h, w) = (spectrum.height(), spectrum.width());
    let plane = spectrum.channel(channel);
    let mut max_abs = 0.0f64;
    let mut max_asym = 0.0f64;
    for r in 0..h {
        let mr = (h - r) % h;
        for c in 0..w {
            let mc = (w - c) % w;
            let x = plane[r * w + c];
            let partner = plane[mr * w + mc];
            max_abs = max_abs.max(x.norm());
            max_asym = max_asym.max((x - partner.conj()).norm());
        }
    }
    if max_asym > HERMITIAN_REL_TOL * max_abs {
        return Err(Error::NonHermitianSpectrum {
            max_asymmetry: if max_abs > 0.0 { max_asym / max_abs } else { max_asym },
            tolerance: HERMITIAN_REL_TOL,
        });
    }
    Ok(())
}

/// Elementwise spectrum product.
///
/// Shapes must match; a 1-channel factor (an OTF, typically) broadcasts
/// across the other side's 3 channels.
pub fn multiply_spectra(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum planes {}x{} vs {}x{}",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    let (broad, narrow) = if a.channels() >= b.channels() {
        (a, b)
    } else {
        (b, a)
    };
    if narrow.channels() != broad.channels() && narrow.channels() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "cannot broadcast {} channels against {}",
            narrow.channels(),
            broad.channels()
        )));
    }

    let mut out = broad.clone();
    for ch in 0..broad.channels() {
        let factor = narrow.channel(if narrow.channels() == 1 { 0 } else { ch });
        for (bin, f) in out.channel_mut(ch).iter_mut().zip(factor) {
            *bin *= f;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
