//! `hyperlens compare`: run both routes on one scene, write both
//! reconstructions for visual inspection, and emit one CSV row each
//! (baseline first — rows sort by pipeline name).

use std::fs;

use hyperlens::pipeline::ReconstructConfig;
use hyperlens::scenes::{generate, SceneSpec};

use crate::args::{CompareArgs, PipelineArg};
use crate::commands::{evaluate_route, note_sensor, write_csv};
use crate::io::{extension_for, write_image, FileFormat};
use crate::manifest::RunManifest;
use crate::CliError;

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    let spec = SceneSpec::parse(&args.scene)?;
    let psf = args.optics.to_spec()?;
    let cc = args.sensor.to_capture(psf);
    cc.validate()?;
    let rc = ReconstructConfig::new(args.upsample.unwrap_or(cc.decimation), args.eps);
    rc.validate()?;

    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;

    let mut manifest = RunManifest::new();
    manifest.note("scene", &args.scene);
    manifest.note("upsample", rc.upsample);
    manifest.note("eps", rc.inverse_epsilon);
    manifest.note("peak", args.peak);
    note_sensor(&mut manifest, &cc);

    let format = if args.float {
        FileFormat::Pfm
    } else {
        FileFormat::Netpbm(args.bits)
    };

    let scene_img = manifest.stage("generate", || generate(&spec))?;
    let ext = extension_for(scene_img.shape().0, args.float);
    // CSV metrics are computed on the export view of both reconstruction
    // and scene, so the rows describe exactly the files written below.
    let (base_img, base_row) = manifest.stage("baseline", || {
        evaluate_route(
            &args.scene,
            &scene_img,
            PipelineArg::Baseline,
            &cc,
            &rc,
            args.peak,
            Some(format),
        )
    })?;
    let (hyper_img, hyper_row) = manifest.stage("hyperacuity", || {
        evaluate_route(
            &args.scene,
            &scene_img,
            PipelineArg::Hyperacuity,
            &cc,
            &rc,
            args.peak,
            Some(format),
        )
    })?;
    let base_path = args.out_dir.join(format!("baseline.{ext}"));
    let hyper_path = args.out_dir.join(format!("hyperacuity.{ext}"));
    let csv_path = args.out_dir.join("metrics.csv");

    manifest.stage("write", || -> Result<(), CliError> {
        write_image(&base_path, &base_img, format)?;
        write_image(&hyper_path, &hyper_img, format)?;
        write_csv(&csv_path, &[base_row, hyper_row])
    })?;
    for path in [&base_path, &hyper_path, &csv_path] {
        manifest.output(path);
    }
    manifest.write(&args.out_dir.join("run.manifest.json"))
}
