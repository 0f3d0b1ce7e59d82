//! `hyperlens scene`: generate a synthetic test scene into an image file.

use hyperlens::scenes::{generate, SceneSpec};

use crate::args::SceneArgs;
use crate::io::{format_for_path, write_image};
use crate::manifest::{manifest_path, RunManifest};
use crate::CliError;

pub fn run(args: &SceneArgs) -> Result<(), CliError> {
    let spec = SceneSpec::parse(&args.spec)?;
    let format = format_for_path(&args.out, args.bits)?;

    let mut manifest = RunManifest::new();
    manifest.note("scene", &args.spec);
    manifest.note("canonical", spec.to_string());
    manifest.note("maxval", args.bits.maxval());

    let img = manifest.stage("generate", || generate(&spec))?;
    manifest.stage("write", || write_image(&args.out, &img, format))?;
    manifest.output(&args.out);
    manifest.write(&manifest_path(&args.out))
}
