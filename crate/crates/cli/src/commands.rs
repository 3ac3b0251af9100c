//! Subcommand bodies. Each returns an exit code or a library error, which
//! [`execute`] maps onto the usage/runtime codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use levyspline::kv::fmt_f64;
use levyspline::synthesis::{Generator, PoissonSpec};
use levyspline::verify::{convergence_study, self_consistency, CfRow, TestFunctionBank};
use levyspline::{Error, Grid, GridRealization, JumpLaw, OperatorSpec, Result};
use rayon::prelude::*;

use crate::config::{Command, Companion, Format, RunConfig};
use crate::{plot, EXIT_PASS, EXIT_RUNTIME, EXIT_THRESHOLD, EXIT_USAGE};

/// Slope window of a passing convergence study.
pub const SLOPE_RANGE: (f64, f64) = (-1.3, -0.7);

/// Self-test rows must sit within this many standard errors of the analytic
/// value.
pub const SELFTEST_SE: f64 = 4.0;

pub const CONFIG_FILE: &str = "config.txt";

/// Errors caused by what the user asked for, as opposed to what happened
/// while doing it.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::UnsupportedOperator(..)
            | Error::UnsupportedClosedForm(_)
            | Error::UnsupportedReference(_)
            | Error::MarginTooSmall { .. }
            | Error::GridTooCoarse { .. }
    )
}

pub fn execute(config: &RunConfig) -> i32 {
    let outcome = match config.command {
        Command::Generate => generate(config),
        Command::Reference => reference(config),
        Command::Verify => verify(config),
        Command::Plotdata => plotdata(config),
        Command::Selftest => selftest(config),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("levyspline {}: {e}", config.command);
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn prepare_outdir(config: &RunConfig) -> Result<()> {
    fs::create_dir_all(&config.outdir).map_err(|e| Error::Io(format!("{}: {e}", config.outdir.display())))?;
    write(&config.outdir.join(CONFIG_FILE), config.to_text())
}

fn grid(config: &RunConfig) -> Result<Grid> {
    Grid::on(&config.domain, config.step)
}

/// `name` for a single realization, `name_0007` inside an ensemble.
fn member_stem(name: &str, config: &RunConfig, index: u64) -> String {
    if config.ensemble == 1 {
        name.to_string()
    } else {
        format!("{name}_{index:04}")
    }
}

/// Writes `stem.csv`, or the `stem.hdr` / `stem.bin` pair.
pub fn write_realization(dir: &Path, stem: &str, s: &GridRealization, format: Format) -> Result<PathBuf> {
    match format {
        Format::Csv => {
            let path = dir.join(format!("{stem}.csv"));
            write(&path, s.to_csv())?;
            Ok(path)
        }
        Format::Bin => {
            let (header, bytes) = s.to_bin();
            let path = dir.join(format!("{stem}.hdr"));
            write(&path, header)?;
            write(&dir.join(format!("{stem}.bin")), bytes)?;
            Ok(path)
        }
    }
}

/// Rate and jump law of the noise `generate` draws.
pub fn noise_law(config: &RunConfig) -> Result<(f64, JumpLaw)> {
    if let Some(pair) = config.exponent.impulsive() {
        return Ok(pair);
    }
    let lambda = config
        .lambda
        .ok_or_else(|| Error::InvalidParameter("generate needs --lambda for a non-impulsive exponent".into()))?;
    match config.companion {
        Companion::Table => Ok(config
            .exponent
            .table_poisson(lambda)?
            .impulsive()
            .expect("table companions are compound Poisson")),
        Companion::Poissonized => Ok((lambda, config.exponent.poissonize(lambda)?.jump_law()?)),
    }
}

fn generate(config: &RunConfig) -> Result<i32> {
    let (rate, jumps) = noise_law(config)?;
    let spec = PoissonSpec {
        op: config.operator,
        grid: grid(config)?,
        rate,
        jumps,
        margin: config.margin,
    };
    // surface layout problems (margin, torus) before touching the disk
    spec.op.noise_layout(&spec.grid, spec.margin)?;
    prepare_outdir(config)?;
    (0..config.ensemble).into_par_iter().try_for_each(|i| {
        let (field, s) = spec.realize_with_field(config.seed, i)?;
        write(&config.outdir.join(format!("{}.csv", member_stem("impulses", config, i))), field.to_csv())?;
        write_realization(&config.outdir, &member_stem("realization", config, i), &s, config.format)?;
        Ok::<(), Error>(())
    })?;
    Ok(EXIT_PASS)
}

fn reference(config: &RunConfig) -> Result<i32> {
    let generator = Generator::Reference {
        family: config.exponent.clone(),
        op: config.operator,
        grid: grid(config)?,
    };
    if !matches!(config.operator, OperatorSpec::Derivative { order: 1 }) {
        return Err(Error::UnsupportedReference(config.operator.to_compact()));
    }
    prepare_outdir(config)?;
    (0..config.ensemble).into_par_iter().try_for_each(|i| {
        let s = generator.realize(config.seed, i)?;
        write_realization(&config.outdir, &member_stem("reference", config, i), &s, config.format)?;
        Ok::<(), Error>(())
    })?;
    Ok(EXIT_PASS)
}

/// The bank a study pairs against: for the first derivative, derivative
/// bumps (their left inverse stays compactly supported); otherwise plain
/// bumps.
pub fn study_bank(op: &OperatorSpec, grid: &Grid) -> Result<TestFunctionBank> {
    match op {
        OperatorSpec::Derivative { order: 1 } => TestFunctionBank::derivative_bumps(grid),
        _ => TestFunctionBank::bumps(grid),
    }
}

fn verify(config: &RunConfig) -> Result<i32> {
    let grid = grid(config)?;
    let bank = study_bank(&config.operator, &grid)?;
    let report = convergence_study(
        &config.exponent,
        &config.operator,
        &config.ladder,
        config.ensemble,
        &bank,
        config.seed,
    )?;
    prepare_outdir(config)?;
    write(&config.outdir.join("cf_report.csv"), report.to_csv())?;
    let summary = report.summary();
    write(&config.outdir.join("cf_summary.txt"), &summary)?;
    print!("{summary}");
    let monotone = report.monotone();
    match report.slope() {
        Ok(slope) if (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope) && monotone => Ok(EXIT_PASS),
        Ok(slope) => {
            eprintln!(
                "levyspline verify: FAIL slope {slope:.4} (want [{}, {}]), monotone {monotone}",
                SLOPE_RANGE.0, SLOPE_RANGE.1
            );
            Ok(EXIT_THRESHOLD)
        }
        Err(Error::NoiseFloor) => {
            eprintln!("levyspline verify: NOISE_FLOOR: fewer than two rungs have error above 3 SE; raise the ensemble or lower the ladder");
            Ok(EXIT_THRESHOLD)
        }
        Err(e) => Err(e),
    }
}

fn selftest_csv(rows: &[CfRow]) -> String {
    let mut out = String::from("phi,re_emp,im_emp,se,re_ana,im_ana,abs_err,err_over_se\n");
    for r in rows {
        let _ = writeln!(
            out,
            "\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.4}",
            r.phi,
            r.empirical.value.re,
            r.empirical.value.im,
            r.empirical.se,
            r.analytic.re,
            r.analytic.im,
            r.abs_err(),
            r.abs_err() / r.empirical.se
        );
    }
    out
}

fn selftest(config: &RunConfig) -> Result<i32> {
    if !matches!(config.operator, OperatorSpec::Derivative { order: 1 }) {
        return Err(Error::UnsupportedReference(config.operator.to_compact()));
    }
    let grid = grid(config)?;
    let bank = TestFunctionBank::derivative_bumps(&grid)?;
    let rows = self_consistency(&config.exponent, config.ensemble, &bank, config.seed)?;
    prepare_outdir(config)?;
    write(&config.outdir.join("selftest.csv"), selftest_csv(&rows))?;
    let failing: Vec<&CfRow> = rows.iter().filter(|r| r.abs_err() > SELFTEST_SE * r.empirical.se).collect();
    let mut summary = format!(
        "reference-path self-test: {} functions, M={}, seed {}, tolerance {} SE\n",
        rows.len(),
        config.ensemble,
        config.seed,
        fmt_f64(SELFTEST_SE)
    );
    for r in &rows {
        let _ = writeln!(summary, "{:<28} err/se {:>6.2}", r.phi, r.abs_err() / r.empirical.se);
    }
    let _ = writeln!(summary, "result: {}", if failing.is_empty() { "PASS" } else { "FAIL" });
    write(&config.outdir.join("selftest_summary.txt"), &summary)?;
    print!("{summary}");
    Ok(if failing.is_empty() { EXIT_PASS } else { EXIT_THRESHOLD })
}

/// Reads a `.csv` realization, or a `.hdr`/`.bin` pair given either path.
pub fn read_realization(path: &Path) -> Result<GridRealization> {
    let missing = |p: &Path, e: std::io::Error| Error::Parse { line: 0, message: format!("{}: {e}", p.display()) };
    match path.extension().and_then(|e| e.to_str()) {
        Some("hdr") | Some("bin") => {
            let hdr = path.with_extension("hdr");
            let bin = path.with_extension("bin");
            let header = fs::read_to_string(&hdr).map_err(|e| missing(&hdr, e))?;
            let bytes = fs::read(&bin).map_err(|e| missing(&bin, e))?;
            GridRealization::from_bin(&header, &bytes)
        }
        _ => GridRealization::from_csv(&fs::read_to_string(path).map_err(|e| missing(path, e))?),
    }
}

fn plotdata(config: &RunConfig) -> Result<i32> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("plotdata needs --input".into()))?;
    let s = read_realization(input)?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("realization")
        .to_string();
    prepare_outdir(config)?;
    let dat = format!("{stem}.dat");
    write(&config.outdir.join(&dat), plot::data_columns(&s))?;
    let mut image = None;
    if s.grid().dim() == 2 {
        let pgm = format!("{stem}.pgm");
        write(&config.outdir.join(&pgm), plot::pgm(&s)?)?;
        image = Some(pgm);
    }
    write(&config.outdir.join(format!("{stem}.gp")), plot::script(&s, &dat, image.as_deref()))?;
    Ok(EXIT_PASS)
}
