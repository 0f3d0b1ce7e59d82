//! `hyperlens radiometry`: sensor photon-budget and packing estimates,
//! printed as a plain-text report. Purely arithmetic — no files are read
//! or written, so there is no run manifest.

use std::fmt::Write as _;
use std::io::Write as _;

use hyperlens::radiometry::{
    area_ratio, dynamic_range, fovea_cone_estimate, photon_count, SensorSpec,
};

use crate::args::RadiometryArgs;
use crate::units::{parse_area, parse_duration, parse_length};
use crate::CliError;

pub fn run(args: &RadiometryArgs) -> Result<(), CliError> {
    let spec = SensorSpec {
        area: parse_area(&args.area)?,
        irradiance: args.irradiance,
        exposure: parse_duration(&args.exposure)?,
        wavelength: parse_length(&args.wavelength)?,
        sat_irradiation: args.saturation,
        min_irradiation: args.minimum,
    };
    spec.validate()?;

    let photons = photon_count(&spec)?;
    let range = dynamic_range(&spec)?;

    let small = parse_area(&args.small_area)?;
    let large = parse_area(&args.large_area)?;
    let ratio = area_ratio(small, large)?;

    let diameter_mm = parse_length(&args.fovea_diameter)? * 1e3;
    let cones = fovea_cone_estimate(args.cone_density, diameter_mm)?;

    let mut report = String::new();
    let w = &mut report;
    let _ = writeln!(w, "photon budget");
    let _ = writeln!(w, "  collecting area   {} ({:.6e} m^2)", args.area, spec.area);
    let _ = writeln!(w, "  irradiance        {} W/m^2", spec.irradiance);
    let _ = writeln!(w, "  exposure          {} ({:.6e} s)", args.exposure, spec.exposure);
    let _ = writeln!(w, "  wavelength        {} ({:.6e} m)", args.wavelength, spec.wavelength);
    let _ = writeln!(w, "  photons collected {photons:.4}");
    let _ = writeln!(w);
    let _ = writeln!(w, "dynamic range");
    let _ = writeln!(w, "  saturation        {:e} photons", spec.sat_irradiation);
    let _ = writeln!(w, "  detection floor   {:e} photons", spec.min_irradiation);
    let _ = writeln!(w, "  ratio             {:e}", range.ratio);
    let _ = writeln!(w, "  20*log10(ratio)   {:.4} dB", range.db);
    let _ = writeln!(w);
    let _ = writeln!(w, "photoreceptor packing");
    let _ = writeln!(w, "  small aperture    {}", args.small_area);
    let _ = writeln!(w, "  large aperture    {}", args.large_area);
    let _ = writeln!(w, "  area ratio        {ratio:.4}");
    let _ = writeln!(w);
    let _ = writeln!(w, "fovea capacity");
    let _ = writeln!(w, "  cone density      {} per mm^2", args.cone_density);
    let _ = writeln!(w, "  fovea diameter    {} ({diameter_mm} mm)", args.fovea_diameter);
    let _ = writeln!(w, "  cones (approx)    {cones:.0}");

    // A downstream reader closing early (`hyperlens radiometry | head`) is
    // normal pipeline behavior, not an error: swallow the broken pipe
    // instead of panicking like the print! macros would.
    match std::io::stdout().lock().write_all(report.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::io(std::path::Path::new("stdout"), e))
        }
        _ => Ok(()),
    }
}
