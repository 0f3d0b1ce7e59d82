//! Black-box tests of the installed command surface: every documented
//! example, the exit-code contract, and the determinism guarantees, all
//! through the real binary.

use std::path::Path;
use std::process::{Command, Output};

use hyperlens::metrics::MetricsReport;
use hyperlens::pipeline::interpolate_fft;
use hyperlens::scenes::{generate, SceneSpec};

use hyperlens_cli::io::{read_image, write_image, FileFormat};

fn hyperlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlens"))
        .args(args)
        .env_remove("HYPERLENS_THREADS")
        .output()
        .expect("binary spawns")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).expect("csv opens");
    reader
        .records()
        .map(|r| r.expect("csv row parses").iter().map(str::to_string).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// scene
// ---------------------------------------------------------------------------

#[test]
fn scene_writes_the_requested_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scene.pgm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "grid_lines,h=500,w=500,pitch=50,width=1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let img = read_image(&out).unwrap();
    assert_eq!(img.shape(), (1, 500, 500));
}

#[test]
fn malformed_scene_specs_are_usage_errors_naming_the_token() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.pgm");
    for (spec, token) in [
        ("grid_lines,h=500,w=500,pitch=50,pirch=1", "pirch"),
        ("grid_lines,h=500,w=500", "pitch"),
        ("blob,h=64,w=64", "blob"),
        ("grid_lines,h=64,w=64,pitch=ten", "ten"),
    ] {
        let run = hyperlens(&["scene", "--spec", spec, "--out", out.to_str().unwrap()]);
        assert_eq!(exit_code(&run), 1, "{spec}");
        assert!(
            stderr_text(&run).contains(token),
            "stderr for {spec:?} does not name {token:?}: {}",
            stderr_text(&run)
        );
        assert!(!out.exists(), "{spec}: no file on failure");
    }
}

#[test]
fn the_same_spec_writes_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = "bandlimited_noise,h=128,w=128,bandlimit=0.3,seed=42";
    let paths = ["a.pgm", "b.pgm"].map(|n| dir.path().join(n));
    for path in &paths {
        let run = hyperlens(&["scene", "--spec", spec, "--out", path.to_str().unwrap()]);
        assert_eq!(exit_code(&run), 0);
    }
    assert_eq!(
        std::fs::read(&paths[0]).unwrap(),
        std::fs::read(&paths[1]).unwrap()
    );
}

#[test]
fn bit_depth_flag_selects_the_sixteen_bit_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("deep.pgm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "edges,h=64,w=64",
        "--bits",
        "16",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P5\n64 64\n65535\n"));
}

// ---------------------------------------------------------------------------
// capture
// ---------------------------------------------------------------------------

#[test]
fn capture_decimates_the_grid_tenfold() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("wide.pgm");
    let sensed = dir.path().join("sensed.pgm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "grid_lines,h=1500,w=2000,pitch=100,width=2",
        "--out",
        scene.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let run = hyperlens(&[
        "capture",
        "--in",
        scene.to_str().unwrap(),
        "--out",
        sensed.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    assert_eq!(read_image(&sensed).unwrap().shape(), (1, 150, 200));
}

#[test]
fn identity_capture_copies_the_file_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.pfm");
    let copy = dir.path().join("copy.pfm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "circle,h=120,w=120,radius=40,stroke=2",
        "--out",
        scene.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let run = hyperlens(&[
        "capture",
        "--in",
        scene.to_str().unwrap(),
        "--psf",
        "delta",
        "--decimation",
        "1",
        "--out",
        copy.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    assert_eq!(
        std::fs::read(&scene).unwrap(),
        std::fs::read(&copy).unwrap(),
        "no blur + no decimation must be lossless in the float format"
    );
}

#[test]
fn nondivisible_dimensions_are_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("s.pgm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "edges,h=100,w=100",
        "--out",
        scene.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let run = hyperlens(&[
        "capture",
        "--in",
        scene.to_str().unwrap(),
        "--decimation",
        "7",
        "--out",
        dir.path().join("t.pgm").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 2, "{}", stderr_text(&run));
}

#[test]
fn missing_input_files_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let run = hyperlens(&[
        "capture",
        "--in",
        dir.path().join("nope.pgm").to_str().unwrap(),
        "--out",
        dir.path().join("out.pgm").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 3, "{}", stderr_text(&run));
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

/// Shared fixture: a captured corpus-style scene on disk, in float format.
fn captured_scene(dir: &Path) -> (hyperlens::ImageGrid, std::path::PathBuf) {
    let spec = SceneSpec::parse("grid_lines,h=300,w=300,pitch=30,width=1").unwrap();
    let scene = generate(&spec).unwrap();
    let captured = dir.join("captured.pfm");
    let scene_path = dir.join("scene.pfm");
    write_image(&scene_path, &scene, FileFormat::Pfm).unwrap();
    let run = hyperlens(&[
        "capture",
        "--in",
        scene_path.to_str().unwrap(),
        "--out",
        captured.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    (scene, captured)
}

#[test]
fn reconstruct_can_stop_after_interpolation() {
    let dir = tempfile::tempdir().unwrap();
    let (_, captured) = captured_scene(dir.path());
    let stopped = dir.path().join("interp.pfm");
    let run = hyperlens(&[
        "reconstruct",
        "--in",
        captured.to_str().unwrap(),
        "--stop-after-interpolation",
        "--out",
        stopped.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));

    // The flag must gate the stage exactly: the file holds the plain
    // upsampling of the captured image, nothing more.
    let expected = interpolate_fft(&read_image(&captured).unwrap(), 10).unwrap();
    let expected_path = dir.path().join("expected.pfm");
    write_image(&expected_path, &expected, FileFormat::Pfm).unwrap();
    assert_eq!(
        std::fs::read(&stopped).unwrap(),
        std::fs::read(&expected_path).unwrap()
    );
}

#[test]
fn inverting_the_blur_improves_on_interpolation_alone() {
    let dir = tempfile::tempdir().unwrap();
    let (scene, captured) = captured_scene(dir.path());
    let interp = dir.path().join("interp.pfm");
    let full = dir.path().join("full.pfm");
    for (path, extra) in [(&interp, Some("--stop-after-interpolation")), (&full, None)] {
        let mut args = vec![
            "reconstruct",
            "--in",
            captured.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ];
        args.extend(extra);
        let run = hyperlens(&args);
        assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    }

    let interp_psnr = MetricsReport::compare(&scene, &read_image(&interp).unwrap().clipped(), 1.0)
        .unwrap()
        .pooled_psnr;
    let full_psnr = MetricsReport::compare(&scene, &read_image(&full).unwrap().clipped(), 1.0)
        .unwrap()
        .pooled_psnr;
    assert!(
        full_psnr > interp_psnr,
        "inversion {full_psnr:.2} dB did not improve on interpolation {interp_psnr:.2} dB"
    );
}

#[test]
fn a_full_width_guard_flattens_the_output_to_its_mean() {
    let dir = tempfile::tempdir().unwrap();
    let (_, captured) = captured_scene(dir.path());
    let flat = dir.path().join("flat.pfm");
    let run = hyperlens(&[
        "reconstruct",
        "--in",
        captured.to_str().unwrap(),
        "--eps",
        "1",
        "--out",
        flat.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));

    let img = read_image(&flat).unwrap();
    let mean = img.channel_mean(0);
    let worst = img
        .samples()
        .iter()
        .map(|s| (s - mean).abs())
        .fold(0.0f64, f64::max);
    assert!(
        worst <= 1e-6 * mean.abs().max(1.0),
        "eps=1 should keep only the DC bin; max deviation {worst:.2e}"
    );
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

#[test]
fn compare_ranks_the_routes_and_orders_the_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("cmp");
    let run = hyperlens(&[
        "compare",
        "--scene",
        "grid_lines,h=300,w=300,pitch=30,width=1",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));

    let rows = csv_rows(&out_dir.join("metrics.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], "baseline");
    assert_eq!(rows[1][1], "hyperacuity");
    let base: f64 = rows[0][12].parse().unwrap();
    let hyper: f64 = rows[1][12].parse().unwrap();
    assert!(hyper > base, "hyperacuity {hyper} vs baseline {base}");
    assert!(out_dir.join("baseline.pgm").exists());
    assert!(out_dir.join("hyperacuity.pgm").exists());
}

#[test]
fn heavy_noise_with_a_tiny_guard_still_produces_wellformed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("noisy");
    let run = hyperlens(&[
        "compare",
        "--scene",
        "circle,h=200,w=200,radius=60,stroke=2",
        "--noise-sigma",
        "0.2",
        "--eps",
        "1e-6",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let rows = csv_rows(&out_dir.join("metrics.csv"));
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row.len(), 14);
        let mse: f64 = row[13].parse().unwrap();
        assert!(mse.is_finite() && mse >= 0.0, "mse {mse}");
        let psnr: f64 = row[12].parse().unwrap();
        assert!(!psnr.is_nan());
    }
}

#[test]
fn an_identity_chain_reports_the_infinite_psnr_sentinel() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("ident");
    let run = hyperlens(&[
        "compare",
        "--scene",
        "grid_lines,h=64,w=64,pitch=16,width=1",
        "--decimation",
        "1",
        "--upsample",
        "1",
        "--psf",
        "delta",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let rows = csv_rows(&out_dir.join("metrics.csv"));
    assert_eq!(rows.len(), 2);
    for row in &rows {
        for col in 9..=12 {
            assert_eq!(row[col], "inf", "{} should be a perfect recovery", row[1]);
        }
        assert_eq!(row[13], "0", "{} pooled MSE", row[1]);
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[test]
fn a_two_by_two_grid_yields_four_ordered_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let run = hyperlens(&[
        "sweep",
        "--out",
        out.to_str().unwrap(),
        "--scene",
        "edges,h=150,w=150",
        "--pipeline",
        "hyperacuity",
        "--psf-radius",
        "35",
        "--psf-radius",
        "20",
        "--eps",
        "1e-2",
        "--eps",
        "1e-3",
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    // Lexicographic cell order, radius-major (its column precedes eps),
    // with each axis sorted ascending regardless of flag order.
    let order: Vec<(String, String)> = rows
        .iter()
        .map(|r| (r[5].clone(), r[6].clone()))
        .collect();
    assert_eq!(
        order,
        [
            ("20".into(), "0.001".into()),
            ("20".into(), "0.01".into()),
            ("35".into(), "0.001".into()),
            ("35".into(), "0.01".into()),
        ]
    );
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        [
            "sweep",
            "--out",
            out.to_str().unwrap(),
            "--scene",
            "bandlimited_noise,h=150,w=150,bandlimit=0.3,seed=1",
            "--scene",
            "grid_lines,h=150,w=150,pitch=30,width=1",
            "--eps",
            "1e-3",
            "--eps",
            "1e-2",
            "--noise-sigma",
            "0.01",
            "--seed",
            "1",
            "--seed",
            "2",
        ]
        .map(str::to_string)
    };

    let parallel = dir.path().join("parallel.csv");
    let again = dir.path().join("again.csv");
    let serial = dir.path().join("serial.csv");
    for out in [&parallel, &again] {
        let run = hyperlens(&args(out).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    }
    let run = Command::new(env!("CARGO_BIN_EXE_hyperlens"))
        .args(args(&serial))
        .env("HYPERLENS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));

    let reference = std::fs::read(&parallel).unwrap();
    assert_eq!(std::fs::read(&again).unwrap(), reference, "repeat run differs");
    assert_eq!(
        std::fs::read(&serial).unwrap(),
        reference,
        "single-threaded run differs from parallel run"
    );
    assert_eq!(csv_rows(&parallel).len(), 16, "2 scenes × 2 pipelines × 2 eps × 2 seeds");
}

#[test]
fn an_empty_grid_writes_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let run = hyperlens(&["sweep", "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text,
        "scene,pipeline,D,U,psf_kind,psf_radius,eps,noise_sigma,seed,\
         psnr_r,psnr_g,psnr_b,psnr_pooled,mse_pooled\n"
    );
}

#[test]
fn oversized_grids_are_rejected_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("huge.csv");
    let mut args: Vec<String> = [
        "sweep",
        "--out",
        out.to_str().unwrap(),
        "--scene",
        "edges,h=100,w=100",
    ]
    .map(str::to_string)
    .to_vec();
    for seed in 0..101 {
        args.push("--seed".into());
        args.push(seed.to_string());
    }
    for eps_exp in 1..=50 {
        args.push("--eps".into());
        args.push(format!("1e-{eps_exp}"));
    }
    // 1 scene × 2 pipelines × 101 seeds × 50 eps = 10100 cells.
    let run = hyperlens(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(exit_code(&run), 2, "{}", stderr_text(&run));
    assert!(stderr_text(&run).contains("10100"), "{}", stderr_text(&run));
    assert!(!out.exists(), "nothing may be written for a rejected grid");
}

#[test]
fn the_thread_cap_must_be_a_positive_integer() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    for bad in ["abc", "0", "-2"] {
        let run = Command::new(env!("CARGO_BIN_EXE_hyperlens"))
            .args(["sweep", "--out", out.to_str().unwrap(), "--scene", "edges,h=100,w=100"])
            .env("HYPERLENS_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(exit_code(&run), 1, "HYPERLENS_THREADS={bad}");
    }
}

// ---------------------------------------------------------------------------
// radiometry & global surface
// ---------------------------------------------------------------------------

#[test]
fn radiometry_defaults_print_the_headline_numbers() {
    let run = hyperlens(&["radiometry"]);
    assert_eq!(exit_code(&run), 0, "{}", stderr_text(&run));
    let text = String::from_utf8_lossy(&run.stdout).into_owned();
    for expected in ["2.7391", "160.0000 dB", "259770"] {
        assert!(text.contains(expected), "report lacks {expected:?}:\n{text}");
    }
}

#[test]
fn a_reader_closing_the_pipe_early_is_not_an_error() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperlens"))
        .arg("radiometry")
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    // Close the read end before the report lands — what `| head` does,
    // just with the race removed: the drop beats the child's startup.
    drop(child.stdout.take());

    let mut stderr = Vec::new();
    std::io::Read::read_to_end(child.stderr.as_mut().unwrap(), &mut stderr).unwrap();
    let status = child.wait().unwrap();
    assert!(
        status.success(),
        "broken pipe must exit cleanly, got {:?}: {}",
        status.code(),
        String::from_utf8_lossy(&stderr)
    );
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(exit_code(&hyperlens(&[])), 1, "subcommand is required");
    assert_eq!(exit_code(&hyperlens(&["capture", "--bogus"])), 1);
    assert_eq!(exit_code(&hyperlens(&["--help"])), 0);
    assert_eq!(exit_code(&hyperlens(&["compare", "--help"])), 0);
    assert_eq!(exit_code(&hyperlens(&["--version"])), 0);
}

#[test]
fn unsupported_output_extensions_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let run = hyperlens(&[
        "scene",
        "--spec",
        "edges,h=64,w=64",
        "--out",
        dir.path().join("scene.png").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 1, "{}", stderr_text(&run));
}

#[test]
fn every_file_output_comes_with_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("m.pgm");
    let run = hyperlens(&[
        "scene",
        "--spec",
        "edges,h=64,w=64",
        "--out",
        scene.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let manifest = dir.path().join("m.pgm.manifest.json");
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(parsed["outputs"][0], scene.to_str().unwrap());
    assert!(parsed["resolved"]["scene"]
        .as_str()
        .unwrap()
        .starts_with("edges"));
}
