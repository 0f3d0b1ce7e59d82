//! `hyperlens reconstruct`: upsample a captured image back to the fine
//! grid and invert the blur. `--stop-after-interpolation` exposes the
//! intermediate (upsampled but still blurred) stage; `--unguarded` swaps
//! the thresholded inverse for a pure 1/H division.

use hyperlens::pipeline::{
    box_response, interpolate_fft, inverse_filter_unguarded_with, inverse_filter_with,
};
use hyperlens::psf::{make_otf, Otf};
use hyperlens::multiply_spectra;

use crate::args::{ReconstructArgs, SamplingArg};
use crate::commands::note_optics;
use crate::io::{format_for_path, read_image, write_image};
use crate::manifest::{manifest_path, RunManifest};
use crate::CliError;

pub fn run(args: &ReconstructArgs) -> Result<(), CliError> {
    let format = format_for_path(&args.out, args.bits)?;

    let mut manifest = RunManifest::new();
    manifest.note("upsample", args.upsample);
    manifest.note("sampling", if args.sampling == SamplingArg::Area { "area" } else { "point" });
    manifest.note("stop_after_interpolation", args.stop_after_interpolation);
    manifest.note("maxval", args.bits.maxval());

    let img = manifest.stage("read", || read_image(&args.input))?;
    let interpolated =
        manifest.stage("interpolate", || interpolate_fft(&img, args.upsample))?;

    let out_img = if args.stop_after_interpolation {
        interpolated
    } else {
        // The kernel is synthesized directly on the recovered grid, so
        // --psf-radius is measured in recovered pixels here (equal to the
        // capture-side radius whenever U = D).
        let psf = args.optics.to_spec()?;
        note_optics(&mut manifest, &psf);
        let mut otf = make_otf(&psf, interpolated.height(), interpolated.width())?;
        if args.sampling == SamplingArg::Area {
            let boxed = box_response(
                interpolated.height(),
                interpolated.width(),
                args.upsample,
            )?;
            otf = Otf::from_spectrum(multiply_spectra(otf.spectrum(), boxed.spectrum())?)?;
        }
        if args.unguarded {
            manifest.note("inverse", "unguarded");
            manifest.stage("invert", || inverse_filter_unguarded_with(&interpolated, &otf))?
        } else {
            manifest.note("inverse", "guarded");
            manifest.note("eps", args.eps);
            manifest.stage("invert", || {
                inverse_filter_with(&interpolated, &otf, args.eps)
            })?
        }
    };

    manifest.stage("write", || write_image(&args.out, &out_img, format))?;
    manifest.output(&args.out);
    manifest.write(&manifest_path(&args.out))
}
