//! Sensor-physics arithmetic: photon budgets, dynamic range, and the
//! photosite-versus-cone geometry comparison.
//!
//! The formulas are deliberately small: expected photon count
//! `μ = A·E·t·λ/(h·c)`, dynamic range `DR = u_sat/u_min` quoted in dB as
//! `20·log10(DR)`, and circular-area bookkeeping for packing photoreceptors
//! into a fovea-sized disc. Everything takes SI units at this API; unit
//! suffixes like `um2` or `ms` are CLI conveniences parsed before the
//! numbers get here.
//!
//! Note the dB convention: irradiation ratios are converted with the
//! `20·log10` voltage-style rule, not `10·log10`. That convention is what
//! makes a ratio of 10⁸ read as 160 dB.

use crate::error::Error;
use crate::Result;

/// Planck constant, J·s. Fixed at the value the rest of the arithmetic is
/// calibrated against; not configurable.
pub const PLANCK_CONSTANT: f64 = 6.6260755e-34;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// One photosite (or photoreceptor) under constant illumination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSpec {
    /// Light-collecting area, m².
    pub area: f64,
    /// Irradiance on the sensor plane, W/m².
    pub irradiance: f64,
    /// Exposure time, s.
    pub exposure: f64,
    /// Wavelength of the (monochromatic) illumination, m.
    pub wavelength: f64,
    /// Irradiation at which the detector saturates.
    pub sat_irradiation: f64,
    /// Smallest detectable irradiation, same units as `sat_irradiation`.
    pub min_irradiation: f64,
}

/// The reference photoreceptor: a foveal-cone-sized aperture under 1 W/m²
/// of 550 nm light for 1 ms, with an 8-decade irradiation range.
impl Default for SensorSpec {
    fn default() -> Self {
        Self {
            area: 1.767e-12,
            irradiance: 1.0,
            exposure: 1e-3,
            wavelength: 550e-9,
            sat_irradiation: 1e8,
            min_irradiation: 1.0,
        }
    }
}

impl SensorSpec {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            (self.area, "sensor area"),
            (self.irradiance, "irradiance"),
            (self.exposure, "exposure time"),
            (self.wavelength, "wavelength"),
            (self.sat_irradiation, "saturation irradiation"),
            (self.min_irradiation, "minimum irradiation"),
        ];
        for (value, name) in fields {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::NonPositiveInput(name));
            }
        }
        Ok(())
    }
}

/// Expected photon count over one exposure: `A·E·t·λ/(h·c)`.
///
/// Returned as a real number, not an integer: this is the mean of the
/// arrival process, and each factor enters exactly linearly.
pub fn photon_count(s: &SensorSpec) -> Result<f64> {
    s.validate()?;
    Ok(s.area * s.irradiance * s.exposure * s.wavelength
        / (PLANCK_CONSTANT * SPEED_OF_LIGHT))
}

/// Dynamic range as a plain ratio and in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicRange {
    /// `sat_irradiation / min_irradiation`.
    pub ratio: f64,
    /// `20·log10(ratio)`.
    pub db: f64,
}

/// Saturation-to-threshold ratio of the detector.
pub fn dynamic_range(s: &SensorSpec) -> Result<DynamicRange> {
    s.validate()?;
    let ratio = s.sat_irradiation / s.min_irradiation;
    Ok(DynamicRange {
        ratio,
        db: 20.0 * ratio.log10(),
    })
}

/// How many times larger `a2` is than `a1`.
pub fn area_ratio(a1: f64, a2: f64) -> Result<f64> {
    for (v, name) in [(a1, "first area"), (a2, "second area")] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NonPositiveInput(name));
        }
    }
    Ok(a2 / a1)
}

/// Area of a circle given its diameter: `π·(d/2)²`.
pub fn circle_area_from_diameter(diameter: f64) -> Result<f64> {
    if diameter <= 0.0 || !diameter.is_finite() {
        return Err(Error::NonPositiveInput("diameter"));
    }
    let r = diameter / 2.0;
    Ok(std::f64::consts::PI * r * r)
}

/// Upper bound on receptor count in a circular fovea: packing density times
/// disc area. Density is per unit area and the diameter in the matching
/// length unit (conventionally count/mm² and mm).
pub fn fovea_cone_estimate(density: f64, fovea_diameter: f64) -> Result<f64> {
    if density <= 0.0 || !density.is_finite() {
        return Err(Error::NonPositiveInput("receptor density"));
    }
    Ok(density * circle_area_from_diameter(fovea_diameter)?)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
