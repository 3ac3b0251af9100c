//! `levyspline` command-line front end.
//!
//! Every subcommand reads an optional `--config` file of `key=value` pairs,
//! lets flags override it, writes its artifacts plus the resolved
//! configuration into `--outdir`, and reports through the exit code:
//! 0 pass, 1 threshold failure, 2 usage or parse error, 3 runtime error.

pub mod commands;
pub mod config;
pub mod plot;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use levyspline::kv::KvBlock;
use levyspline::Error;

pub use config::{Command, Companion, Format, RunConfig, SEED_ENV};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_THRESHOLD: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "levyspline", version, about = "Random L-splines and their Lévy-process limits")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Draw compound-Poisson noise and synthesize the random L-spline.
    Generate(Flags),
    /// Exact Lévy path for L = D from independent increments.
    Reference(Flags),
    /// Characteristic-functional convergence study over a λ-ladder.
    Verify(Flags),
    /// gnuplot data, script stub and (2-D) PGM image from a realization.
    Plotdata(Flags),
    /// Reference paths against the analytic characteristic functional.
    Selftest(Flags),
}

/// Flags mirror the configuration keys one to one.
#[derive(Args, Debug, Default)]
struct Flags {
    /// key=value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// D, DaI, DxDy, DaIxDaIy or frac_laplacian.
    #[arg(long)]
    operator: Option<String>,
    /// Order of the derivative operator D^n.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    /// gaussian, laplace, cauchy or compound_poisson.
    #[arg(long, alias = "family")]
    exponent: Option<String>,
    #[arg(long)]
    sigma2: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    jumps: Option<String>,
    #[arg(long)]
    variance: Option<String>,
    #[arg(long)]
    scale: Option<String>,
    #[arg(long)]
    shape: Option<String>,
    /// `lo:hi` per axis, axes separated by `;`; one axis is replicated.
    #[arg(long = "box")]
    bbox: Option<String>,
    #[arg(long)]
    step: Option<String>,
    /// Noise margin per side beyond the window.
    #[arg(long)]
    margin: Option<String>,
    /// Poisson rate of the impulsive noise.
    #[arg(long)]
    lambda: Option<String>,
    /// Comma-separated ascending rates, e.g. 1,4,16,64.
    #[arg(long)]
    ladder: Option<String>,
    /// Number of realizations M.
    #[arg(long)]
    ensemble: Option<String>,
    /// Falls back to LEVYSPLINE_SEED, then 0.
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads for ensemble work.
    #[arg(long)]
    threads: Option<String>,
    /// csv or bin.
    #[arg(long)]
    format: Option<String>,
    /// table (Gauss/Laplace/Cauchy-Poisson) or poissonized.
    #[arg(long)]
    companion: Option<String>,
    #[arg(long)]
    outdir: Option<String>,
    /// Realization file for plotdata (.csv, or .hdr/.bin pair).
    #[arg(long)]
    input: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("operator", &self.operator),
            ("n", &self.n),
            ("alpha", &self.alpha),
            ("gamma", &self.gamma),
            ("dim", &self.dim),
            ("family", &self.exponent),
            ("sigma2", &self.sigma2),
            ("c", &self.c),
            ("rate", &self.rate),
            ("jumps", &self.jumps),
            ("variance", &self.variance),
            ("scale", &self.scale),
            ("shape", &self.shape),
            ("box", &self.bbox),
            ("step", &self.step),
            ("margin", &self.margin),
            ("lambda", &self.lambda),
            ("ladder", &self.ladder),
            ("ensemble", &self.ensemble),
            ("seed", &self.seed),
            ("threads", &self.threads),
            ("format", &self.format),
            ("companion", &self.companion),
            ("outdir", &self.outdir),
            ("input", &self.input),
        ]
    }
}

fn resolve(command: Command, flags: &Flags, env_seed: Option<&str>) -> levyspline::Result<RunConfig> {
    let mut kv = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })?;
            KvBlock::parse(&text)?
        }
        None => KvBlock::new(),
    };
    // a file may spell the family either way; the flag replaces both
    if flags.exponent.is_some() {
        kv.remove("exponent");
    }
    kv.set("command", command.to_string());
    for (key, value) in flags.pairs() {
        if let Some(v) = value {
            kv.set(key, v.as_str());
        }
    }
    RunConfig::from_kv(&kv, env_seed)
}

/// Parses arguments, runs the subcommand, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Generate(f) => (Command::Generate, f),
        Sub::Reference(f) => (Command::Reference, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Plotdata(f) => (Command::Plotdata, f),
        Sub::Selftest(f) => (Command::Selftest, f),
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let config = match resolve(command, flags, env_seed.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("levyspline: configuration error: {e}");
            return EXIT_USAGE;
        }
    };
    match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&config)),
            Err(e) => {
                eprintln!("levyspline: cannot start {n} worker threads: {e}");
                EXIT_RUNTIME
            }
        },
        None => commands::execute(&config),
    }
}
