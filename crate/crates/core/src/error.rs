//! Error type shared by every module in the crate.

/// Everything that can go wrong inside the library.
///
/// I/O does not appear here: the library is purely in-memory, and file
/// handling lives with the CLI.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two grids or spectra that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A spectrum handed to the inverse DFT is not conjugate-symmetric, so
    /// no real-valued image corresponds to it.
    #[error(
        "spectrum is not Hermitian-symmetric: max asymmetry {max_asymmetry:.3e} \
         exceeds {tolerance:.3e} relative to the spectrum peak"
    )]
    NonHermitianSpectrum {
        max_asymmetry: f64,
        tolerance: f64,
    },

    /// The requested kernel truncation half-width does not fit on the grid.
    #[error("PSF support half-width {support} px does not fit a {height}x{width} grid")]
    SupportTooLarge {
        support: usize,
        height: usize,
        width: usize,
    },

    /// The requested quantity is not defined for this kernel kind.
    #[error("operation is not defined for the {0} kernel")]
    NotApplicable(&'static str),

    /// Image dimensions are not divisible by the decimation factor.
    #[error("dimensions {height}x{width} are not divisible by decimation factor {factor}")]
    NotDivisible {
        height: usize,
        width: usize,
        factor: usize,
    },

    /// Inverse-filter threshold outside its valid range (0, 1].
    #[error("epsilon {0} is outside (0, 1]")]
    EpsilonOutOfRange(f64),

    /// Band fraction outside its valid range (0, 1].
    #[error("band fraction {0} is outside (0, 1]")]
    BandOutOfRange(f64),

    /// A quantity that must be strictly positive is not.
    #[error("{0} must be strictly positive")]
    NonPositiveInput(&'static str),

    /// Scene or kernel parameters that fail validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Raw sample data that cannot form a valid image (wrong length, NaN, …).
    #[error("invalid image data: {0}")]
    InvalidImage(String),

    /// A scene spec string that does not follow the grammar.
    #[error("cannot parse scene spec at {token:?}: {message}")]
    ParseError { token: String, message: String },
}
