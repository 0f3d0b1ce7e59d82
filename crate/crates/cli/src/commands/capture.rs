//! `hyperlens capture`: blur with the kernel, then decimate onto the
//! sensor grid — what the coarse sensor actually records.

use hyperlens::pipeline::{diffract, sense};

use crate::args::CaptureArgs;
use crate::commands::note_sensor;
use crate::io::{format_for_path, read_image, write_image};
use crate::manifest::{manifest_path, RunManifest};
use crate::CliError;

pub fn run(args: &CaptureArgs) -> Result<(), CliError> {
    let psf = args.optics.to_spec()?;
    let cc = args.sensor.to_capture(psf);
    cc.validate()?;
    let format = format_for_path(&args.out, args.bits)?;

    let mut manifest = RunManifest::new();
    note_sensor(&mut manifest, &cc);
    manifest.note("maxval", args.bits.maxval());

    let img = manifest.stage("read", || read_image(&args.input))?;
    let blurred = manifest.stage("diffract", || diffract(&img, &cc.psf))?;
    let sensed = manifest.stage("sense", || sense(&blurred, &cc))?;
    manifest.stage("write", || write_image(&args.out, &sensed, format))?;
    manifest.output(&args.out);
    manifest.write(&manifest_path(&args.out))
}
