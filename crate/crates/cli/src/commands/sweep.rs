//! `hyperlens sweep`: evaluate a cartesian parameter grid, one CSV row per
//! cell. Cells may run in parallel (capped by `HYPERLENS_THREADS`), but
//! rows are buffered and written in lexicographic grid order — column by
//! CSV column — so repeated runs are byte-identical.

use rayon::prelude::*;

use hyperlens::pipeline::{
    CaptureConfig, ReconstructConfig, DEFAULT_DECIMATION, DEFAULT_EPSILON, DEFAULT_PSF_RADIUS,
};
use hyperlens::psf::PsfSpec;
use hyperlens::scenes::{generate, SceneSpec};
use hyperlens::{Error as CoreError, ImageGrid};

use crate::args::{PipelineArg, PsfKindArg, SweepArgs};
use crate::commands::{evaluate_route, write_csv};
use crate::manifest::{manifest_path, RunManifest};
use crate::CliError;

/// Hard bound on grid size; anything larger is a precondition violation.
pub const MAX_CELLS: usize = 10_000;

#[derive(Clone, Copy)]
struct Cell {
    scene: usize, // index into the sorted scene list
    pipeline: PipelineArg,
    decimation: usize,
    upsample: usize,
    kind: PsfKindArg,
    radius: f64,
    eps: f64,
    noise_sigma: f64,
    seed: u64,
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    // --- Resolve each axis: explicit values sorted and deduplicated, or
    // the documented default. Sorting makes the output independent of the
    // order flags were given in.
    let mut scenes = args.scenes.clone();
    scenes.sort();
    scenes.dedup();

    let pipelines = {
        let mut p = if args.pipelines.is_empty() {
            vec![PipelineArg::Baseline, PipelineArg::Hyperacuity]
        } else {
            args.pipelines.clone()
        };
        p.sort_by_key(|p| p.name());
        p.dedup();
        p
    };
    let decimations = sorted_or(&args.decimations, DEFAULT_DECIMATION);
    let upsamples = if args.upsamples.is_empty() {
        None // track each cell's decimation
    } else {
        Some(sorted_or(&args.upsamples, 0))
    };
    let kinds = {
        let mut k = if args.psf_kinds.is_empty() {
            vec![PsfKindArg::Airy]
        } else {
            args.psf_kinds.clone()
        };
        k.sort_by_key(kind_name);
        k.dedup();
        k
    };
    let radii = sorted_float_axis(&args.psf_radii, DEFAULT_PSF_RADIUS, "psf-radius")?;
    let epsilons = sorted_float_axis(&args.epsilons, DEFAULT_EPSILON, "eps")?;
    let noise_sigmas = sorted_float_axis(&args.noise_sigmas, 0.0, "noise-sigma")?;
    let seeds = sorted_or(&args.seeds, 0);

    // --- Bound the grid before doing any work.
    let cell_count = scenes.len()
        * pipelines.len()
        * decimations.len()
        * upsamples.as_ref().map_or(1, Vec::len)
        * kinds.len()
        * radii.len()
        * epsilons.len()
        * noise_sigmas.len()
        * seeds.len();
    if cell_count > MAX_CELLS {
        return Err(CliError::GridTooLarge {
            cells: cell_count,
            max: MAX_CELLS,
        });
    }

    let mut manifest = RunManifest::new();
    manifest.note("scenes", scenes.join(" | "));
    manifest.note("pipelines", join(&pipelines, |p| p.name().to_string()));
    manifest.note("decimations", join(&decimations, usize::to_string));
    manifest.note(
        "upsamples",
        upsamples
            .as_ref()
            .map_or("track decimation".to_string(), |u| {
                join(u, usize::to_string)
            }),
    );
    manifest.note("psf_kinds", join(&kinds, |k| kind_name(k).to_string()));
    manifest.note("psf_radii", join(&radii, f64::to_string));
    manifest.note("epsilons", join(&epsilons, f64::to_string));
    manifest.note("noise_sigmas", join(&noise_sigmas, f64::to_string));
    manifest.note("seeds", join(&seeds, u64::to_string));
    manifest.note("sampling", if args.sampling == crate::args::SamplingArg::Area { "area" } else { "point" });
    manifest.note("peak", args.peak);
    manifest.note("cells", cell_count);

    // --- Generate each scene once, up front (also validates every spec
    // before any cell runs).
    let scene_images: Vec<ImageGrid> = manifest.stage("generate", || {
        scenes
            .iter()
            .map(|text| Ok(generate(&SceneSpec::parse(text)?)?))
            .collect::<Result<_, CliError>>()
    })?;

    // --- Enumerate cells in CSV-column order: scene, pipeline, D, U,
    // psf_kind, psf_radius, eps, noise_sigma, seed.
    let mut cells = Vec::with_capacity(cell_count);
    for scene in 0..scenes.len() {
        for &pipeline in &pipelines {
            for &decimation in &decimations {
                let us = match &upsamples {
                    Some(u) => u.clone(),
                    None => vec![decimation],
                };
                for upsample in us {
                    for &kind in &kinds {
                        for &radius in &radii {
                            for &eps in &epsilons {
                                for &noise_sigma in &noise_sigmas {
                                    for &seed in &seeds {
                                        cells.push(Cell {
                                            scene,
                                            pipeline,
                                            decimation,
                                            upsample,
                                            kind,
                                            radius,
                                            eps,
                                            noise_sigma,
                                            seed,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // --- Evaluate, possibly in parallel; collect preserves cell order.
    let results: Vec<Result<_, CliError>> = manifest.stage("evaluate", || {
        Ok::<_, CliError>(thread_pool()?.install(|| {
            cells
                .par_iter()
                .map(|cell| {
                    // No images are exported, so rows score the in-memory
                    // reconstruction (clipped, unquantized).
                    let (_, row) = evaluate_route(
                        &scenes[cell.scene],
                        &scene_images[cell.scene],
                        cell.pipeline,
                        &capture_config(cell, args)?,
                        &ReconstructConfig::new(cell.upsample, cell.eps),
                        args.peak,
                        None,
                    )?;
                    Ok(row)
                })
                .collect()
        }))
    })?;
    let mut rows = Vec::with_capacity(results.len());
    for result in results {
        rows.push(result?); // first failure in deterministic cell order
    }

    manifest.stage("write", || write_csv(&args.out, &rows))?;
    manifest.output(&args.out);
    manifest.write(&manifest_path(&args.out))
}

fn capture_config(cell: &Cell, args: &SweepArgs) -> Result<CaptureConfig, CliError> {
    let psf = match cell.kind {
        PsfKindArg::Airy => PsfSpec::airy(cell.radius)?,
        PsfKindArg::Gaussian => PsfSpec::gaussian(cell.radius)?,
        PsfKindArg::Delta => PsfSpec::delta(),
    };
    let psf = match args.psf_support {
        Some(support) => psf.with_support(support)?,
        None => psf,
    };
    Ok(CaptureConfig {
        psf,
        decimation: cell.decimation,
        sampling_mode: args.sampling.into(),
        noise_sigma: cell.noise_sigma,
        seed: cell.seed,
    })
}

fn kind_name(kind: &PsfKindArg) -> &'static str {
    match kind {
        PsfKindArg::Airy => "airy",
        PsfKindArg::Gaussian => "gaussian",
        PsfKindArg::Delta => "delta",
    }
}

fn sorted_or<T: Ord + Copy>(values: &[T], default: T) -> Vec<T> {
    if values.is_empty() {
        return vec![default];
    }
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    v
}

fn sorted_float_axis(values: &[f64], default: f64, flag: &str) -> Result<Vec<f64>, CliError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::InvalidParams(format!("--{flag} values must be finite")).into());
    }
    if values.is_empty() {
        return Ok(vec![default]);
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    v.dedup();
    Ok(v)
}

fn join<T>(values: &[T], f: impl Fn(&T) -> String) -> String {
    values.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// One pool per sweep; `HYPERLENS_THREADS` caps its size.
fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var("HYPERLENS_THREADS") {
        match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => {
                return Err(CoreError::ParseError {
                    token: text,
                    message: "HYPERLENS_THREADS must be a positive integer".into(),
                }
                .into())
            }
        }
    }
    builder
        .build()
        .map_err(|e| CliError::BadFile(format!("thread pool: {e}")))
}
