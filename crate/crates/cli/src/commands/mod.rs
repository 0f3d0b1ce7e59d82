//! One module per subcommand, plus the shared route-evaluation and CSV
//! plumbing that `compare` and `sweep` both use.

pub mod capture;
pub mod compare;
pub mod radiometry;
pub mod reconstruct;
pub mod scene;
pub mod sweep;

use std::path::Path;

use hyperlens::metrics::{CsvRow, MetricsReport, CSV_HEADER};
use hyperlens::pipeline::{run_baseline, run_hyperacuity, CaptureConfig, ReconstructConfig};
use hyperlens::psf::PsfSpec;
use hyperlens::{Error as CoreError, ImageGrid};

use crate::args::PipelineArg;
use crate::manifest::RunManifest;
use crate::CliError;

/// Run one route on a generated scene and score it against that scene.
/// The reconstruction is clipped to [0, 1] before scoring; when an export
/// format is given, both reconstruction and reference are additionally
/// mapped through [`crate::io::export_view`], so the CSV numbers describe
/// exactly the files a reader could open. Scoring requires the recovered
/// grid to match the scene grid, i.e. U = D.
pub(crate) fn evaluate_route(
    scene_text: &str,
    scene_img: &ImageGrid,
    pipeline: PipelineArg,
    cc: &CaptureConfig,
    rc: &ReconstructConfig,
    peak: f64,
    export: Option<crate::io::FileFormat>,
) -> Result<(ImageGrid, CsvRow), CliError> {
    if rc.upsample != cc.decimation {
        return Err(CoreError::InvalidParams(format!(
            "scoring against the scene needs the recovered grid to match it: \
             upsample {} != decimation {}",
            rc.upsample, cc.decimation
        ))
        .into());
    }
    let mut recon = match pipeline {
        PipelineArg::Hyperacuity => run_hyperacuity(scene_img, cc, rc)?,
        PipelineArg::Baseline => run_baseline(scene_img, cc, rc.upsample)?,
    }
    .clipped();
    let report = match export {
        Some(format) => {
            recon = crate::io::export_view(&recon, format);
            let reference = crate::io::export_view(scene_img, format);
            MetricsReport::compare(&reference, &recon, peak)?
        }
        None => MetricsReport::compare(scene_img, &recon, peak)?,
    };
    let [psnr_r, psnr_g, psnr_b] = report.psnr_rgb();
    let row = CsvRow {
        scene: scene_text.to_string(),
        pipeline: pipeline.name().to_string(),
        decimation: cc.decimation,
        upsample: rc.upsample,
        psf_kind: cc.psf.kind.name().to_string(),
        psf_radius: cc.psf.radius,
        eps: rc.inverse_epsilon,
        noise_sigma: cc.noise_sigma,
        seed: cc.seed,
        psnr_r,
        psnr_g,
        psnr_b,
        psnr_pooled: report.pooled_psnr,
        mse_pooled: report.pooled_mse,
    };
    Ok((recon, row))
}

/// Write the metrics CSV: fixed header, one record per row, `\n` line ends.
pub(crate) fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<(), CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let encode = |e: csv::Error| CliError::BadFile(format!("csv encoding: {e}"));
    writer.write_record(CSV_HEADER).map_err(encode)?;
    for row in rows {
        writer.write_record(row.record()).map_err(encode)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::BadFile(format!("csv encoding: {e}")))?;
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub(crate) fn note_optics(manifest: &mut RunManifest, psf: &PsfSpec) {
    manifest.note("psf", psf.kind.name());
    manifest.note("psf_radius", psf.radius);
    manifest.note("psf_support", psf.support);
}

pub(crate) fn note_sensor(manifest: &mut RunManifest, cc: &CaptureConfig) {
    manifest.note("decimation", cc.decimation);
    manifest.note("sampling", cc.sampling_mode.name());
    manifest.note("noise_sigma", cc.noise_sigma);
    manifest.note("seed", cc.seed);
    note_optics(manifest, &cc.psf);
}
