//! End-to-end runs of the `levyspline` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use levyspline_cli::RunConfig;
use tempfile::TempDir;

fn run_in(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levyspline"))
        .args(args)
        .current_dir(cwd)
        .env_remove(levyspline_cli::SEED_ENV)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SMALL: &[&str] = &["--operator", "D", "--exponent", "gaussian", "--lambda", "3", "--box", "0:10", "--step", "0.01"];

fn generate(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["generate"];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    run_in(dir, &args)
}

#[test]
fn generate_writes_impulses_realization_and_config() {
    let tmp = TempDir::new().unwrap();
    let out = generate(tmp.path(), &["--seed", "7", "--outdir", "out"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dir = tmp.path().join("out");
    let mut names: Vec<String> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["config.txt", "impulses.csv", "realization.csv"]);
    let field = levyspline::ImpulseField::from_csv(&fs::read_to_string(dir.join("impulses.csv")).unwrap()).unwrap();
    assert_eq!(field.seed(), 7);
    let s = levyspline::GridRealization::from_csv(&fs::read_to_string(dir.join("realization.csv")).unwrap()).unwrap();
    assert_eq!(s.grid().len(), 1001);
}

#[test]
fn ensembles_and_binary_format() {
    let tmp = TempDir::new().unwrap();
    let out = generate(tmp.path(), &["--ensemble", "3", "--format", "bin", "--outdir", "o"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for i in 0..3 {
        let stem = tmp.path().join(format!("o/realization_{i:04}"));
        let hdr = fs::read_to_string(stem.with_extension("hdr")).unwrap();
        let bytes = fs::read(stem.with_extension("bin")).unwrap();
        let s = levyspline::GridRealization::from_bin(&hdr, &bytes).unwrap();
        assert_eq!(s.provenance().stream(), i);
        assert!(tmp.path().join(format!("o/impulses_{i:04}.csv")).exists());
    }
}

#[test]
fn resolved_config_round_trips_and_reproduces() {
    let tmp = TempDir::new().unwrap();
    let out = generate(tmp.path(), &["--seed", "11", "--margin", "2", "--outdir", "a"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(tmp.path().join("a/config.txt")).unwrap();
    let config = RunConfig::parse(&text).unwrap();
    assert_eq!(RunConfig::parse(&config.to_text()).unwrap(), config);
    assert_eq!(config.seed, 11);
    assert_eq!(config.margin, Some(2.0));

    // the recorded config alone regenerates the run, with the outdir overridden
    let out = run_in(tmp.path(), &["generate", "--config", "a/config.txt", "--outdir", "b"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in ["impulses.csv", "realization.csv"] {
        assert_eq!(fs::read(tmp.path().join("a").join(f)).unwrap(), fs::read(tmp.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn flags_override_file_values() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("run.conf"), "command=generate\noperator=DaI alpha=0.5\nfamily=cauchy c=1\nlambda=2\nseed=3\nstep=0.1\n").unwrap();
    let out = run_in(tmp.path(), &["generate", "--config", "run.conf", "--seed", "4", "--alpha", "0.25", "--outdir", "o"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let c = RunConfig::parse(&fs::read_to_string(tmp.path().join("o/config.txt")).unwrap()).unwrap();
    assert_eq!(c.seed, 4);
    assert_eq!(c.operator, levyspline::OperatorSpec::DerivativeAlpha { alpha: 0.25 });
    assert_eq!(c.exponent, levyspline::LevyExponent::cauchy(1.0).unwrap());
}

#[test]
fn seed_falls_back_to_environment() {
    let tmp = TempDir::new().unwrap();
    let mut args = vec!["generate"];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(&["--outdir", "o"]);
    let out = Command::new(env!("CARGO_BIN_EXE_levyspline"))
        .args(&args)
        .current_dir(tmp.path())
        .env(levyspline_cli::SEED_ENV, "99")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let c = RunConfig::parse(&fs::read_to_string(tmp.path().join("o/config.txt")).unwrap()).unwrap();
    assert_eq!(c.seed, 99);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    for dir in ["x", "y"] {
        let out = run_in(
            tmp.path(),
            &["generate", "--operator", "frac_laplacian", "--gamma", "1.5", "--dim", "2", "--lambda", "2", "--box", "0:4", "--step", "0.1", "--seed", "5", "--outdir", dir],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    // config.txt differs only in the recorded outdir
    for f in ["impulses.csv", "realization.csv"] {
        assert_eq!(fs::read(tmp.path().join("x").join(f)).unwrap(), fs::read(tmp.path().join("y").join(f)).unwrap(), "{f}");
    }
    let out = run_in(
        tmp.path(),
        &["generate", "--operator", "frac_laplacian", "--gamma", "1.5", "--dim", "2", "--lambda", "2", "--box", "0:4", "--step", "0.1", "--seed", "6", "--outdir", "z"],
    );
    assert_eq!(code(&out), 0);
    assert_ne!(fs::read(tmp.path().join("x/realization.csv")).unwrap(), fs::read(tmp.path().join("z/realization.csv")).unwrap());
}

#[test]
fn nothing_is_written_outside_outdir() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&generate(tmp.path(), &["--outdir", "only"])), 0);
    assert_eq!(code(&run_in(tmp.path(), &["plotdata", "--input", "only/realization.csv", "--outdir", "only/plots"])), 0);
    assert_eq!(code(&run_in(tmp.path(), &["selftest", "--ensemble", "200", "--step", "0.01", "--outdir", "only/self"])), 0);
    let entries: Vec<_> = fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries, ["only"]);
}

#[test]
fn usage_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &[],
        &["explode"],
        &["generate", "--bogus"],
        &["generate", "--lambda", "3", "--seed", "minus-one"],
        &["generate"],
        &["generate", "--lambda", "3", "--operator", "frac_derivative"],
        &["generate", "--lambda", "3", "--operator", "DaI"],
        &["generate", "--lambda", "3", "--format", "png"],
        &["generate", "--lambda", "3", "--config", "missing.conf"],
        &["generate", "--lambda", "3", "--operator", "DaI", "--alpha", "0.1", "--margin", "1"],
        &["reference", "--operator", "DaI", "--alpha", "0.1"],
        &["verify", "--ladder", "4", "--ensemble", "100"],
        &["verify", "--ladder", "1,4,16", "--ensemble", "100", "--step", "0.05"],
        &["plotdata"],
        &["plotdata", "--input", "nope.csv"],
    ];
    for args in cases {
        let out = run_in(tmp.path(), args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_3() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["generate", "--lambda", "1e9", "--box", "0:10", "--step", "0.5", "--outdir", "o"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn plotdata_one_dimensional_columns() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&generate(tmp.path(), &["--outdir", "o"])), 0);
    let out = run_in(tmp.path(), &["plotdata", "--input", "o/realization.csv", "--outdir", "p"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dat = fs::read_to_string(tmp.path().join("p/realization.dat")).unwrap();
    let rows: Vec<&str> = dat.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1001);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 2));
    assert!(tmp.path().join("p/realization.gp").exists());
    assert!(!tmp.path().join("p/realization.pgm").exists());
}

#[test]
fn plotdata_two_dimensional_pgm() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(
        tmp.path(),
        &["generate", "--operator", "DxDy", "--lambda", "0.5", "--box", "0:10;0:5", "--step", "0.1", "--seed", "2", "--format", "bin", "--outdir", "o"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run_in(tmp.path(), &["plotdata", "--input", "o/realization.bin", "--outdir", "p"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let pgm = fs::read(tmp.path().join("p/realization.pgm")).unwrap();
    let header = b"P5 101 51 255\n";
    assert_eq!(&pgm[..header.len()], header);
    let pixels = &pgm[header.len()..];
    assert_eq!(pixels.len(), 101 * 51);
    assert_eq!(*pixels.iter().min().unwrap(), 0);
    assert_eq!(*pixels.iter().max().unwrap(), 255);
    // bottom-left pixel is the grid origin, where the pinned spline vanishes
    let s = levyspline::GridRealization::from_bin(
        &fs::read_to_string(tmp.path().join("o/realization.hdr")).unwrap(),
        &fs::read(tmp.path().join("o/realization.bin")).unwrap(),
    )
    .unwrap();
    let gray = levyspline_cli::plot::gray_levels(s.samples());
    assert_eq!(pixels[50 * 101], gray[0]);
    assert_eq!(pixels[100], gray[s.grid().index(&[100, 50])]);
    let dat = fs::read_to_string(tmp.path().join("p/realization.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| l.split_whitespace().count() == 3).count(), 101 * 51);
}

#[test]
fn plotdata_rejects_empty_input() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("empty.csv"), "").unwrap();
    let out = run_in(tmp.path(), &["plotdata", "--input", "empty.csv", "--outdir", "p"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_reports_noise_floor() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["verify", "--ladder", "100,200,400", "--ensemble", "100", "--step", "0.01", "--outdir", "v"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("NOISE_FLOOR"));
    assert!(tmp.path().join("v/cf_report.csv").exists());
    let summary = fs::read_to_string(tmp.path().join("v/cf_summary.txt")).unwrap();
    assert!(summary.contains("NOISE_FLOOR"));
}

#[test]
fn selftest_passes() {
    let tmp = TempDir::new().unwrap();
    for family in ["gaussian", "cauchy", "laplace"] {
        let out = run_in(tmp.path(), &["selftest", "--exponent", family, "--ensemble", "2000", "--step", "0.01", "--seed", "1", "--outdir", family]);
        assert_eq!(code(&out), 0, "{family}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn reference_paths_for_d() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["reference", "--exponent", "cauchy", "--c", "1", "--step", "0.01", "--ensemble", "2", "--outdir", "r"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = levyspline::GridRealization::from_csv(&fs::read_to_string(tmp.path().join("r/reference_0001.csv")).unwrap()).unwrap();
    assert!(matches!(s.provenance(), levyspline::synthesis::Provenance::Reference { .. }));
}
