//! The `relaylink` command line: `run` experiment files, `table` result CSVs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentFile;
use crate::simulator::{BerCurve, BerPoint, Simulator, Source};
use crate::Error;

/// Column header of every result CSV.
pub const CSV_HEADER: [&str; 12] = [
    "snr_db",
    "ber",
    "ci_low",
    "ci_high",
    "bit_errors",
    "bits",
    "source",
    "rule",
    "t",
    "r",
    "modulation",
    "seed",
];

pub const MANIFEST_NAME: &str = "manifest.toml";

/// Environment variable capping worker threads; 0 or unset means one per core.
pub const THREADS_ENV: &str = "RELAYLINK_THREADS";

#[derive(Debug, Parser)]
#[command(name = "relaylink", version, about = "Dual-hop DF relay-selection BER simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every experiment in a config file and write one CSV per experiment.
    Run {
        config: PathBuf,
        /// Override the seed of every experiment.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial budget of every experiment.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare result CSVs at their shared SNR points.
    Table {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Schema(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 1,
            Self::Config(_) | Self::Schema(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure { .. } | Error::DegenerateDistribution(_) => {
                Self::Numerical(e.to_string())
            }
            _ => Self::Config(e.to_string()),
        }
    }
}

/// Overrides applied on top of an experiment file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: PathBuf,
    pub csv_files: Vec<PathBuf>,
}

/// Load, override and validate an experiment file.
pub fn resolve(config: &Path, overrides: &Overrides) -> Result<ExperimentFile, CliError> {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
    let mut file = ExperimentFile::parse(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
    for cfg in file.experiment.values_mut() {
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = overrides.trials {
            cfg.trials = trials;
        }
    }
    if let Some(out) = &overrides.out {
        file.output.dir = out.clone();
    }
    file.validate()
        .map_err(|e| CliError::Config(format!("after overrides: {e}")))?;
    Ok(file)
}

/// Execute `run`: one CSV per experiment plus the resolved manifest.
pub fn run(config: &Path, overrides: &Overrides) -> Result<RunReport, CliError> {
    let file = resolve(config, overrides)?;
    let dir = &file.output.dir;
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;

    let mut csv_files = Vec::new();
    for (name, cfg) in &file.experiment {
        let curve = Simulator::new(cfg.clone())?.sweep()?;
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, curve_csv(&curve))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        csv_files.push(path);
    }

    let manifest = dir.join(MANIFEST_NAME);
    let text = format!(
        "# Resolved by relaylink {}; rerun with `relaylink run {}`.\n{}",
        env!("CARGO_PKG_VERSION"),
        MANIFEST_NAME,
        file.to_toml()
    );
    fs::write(&manifest, text).map_err(|e| CliError::Io(format!("{}: {e}", manifest.display())))?;
    Ok(RunReport {
        manifest,
        csv_files,
    })
}

/// One CSV row of the result schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub snr_db: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bit_errors: u64,
    pub bits: u64,
    pub source: Source,
    pub rule: String,
    pub t: usize,
    pub r: usize,
    pub modulation: String,
    pub seed: u64,
}

/// Render a curve as CSV: simulated rows first, then any analytic rows.
///
/// Floats use Rust's shortest round-trip formatting, so output does not depend
/// on locale; lines end in `\n`.
pub fn curve_csv(curve: &BerCurve) -> String {
    let cfg = &curve.config;
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for p in curve.simulated.iter().chain(&curve.analytic) {
        w.serialize(CsvRow {
            snr_db: p.snr_db,
            ber: p.ber,
            ci_low: p.ci_low,
            ci_high: p.ci_high,
            bit_errors: p.bit_errors,
            bits: p.bits,
            source: p.source,
            rule: cfg.rule.name().to_string(),
            t: cfg.t,
            r: cfg.r,
            modulation: cfg.modulation.name().to_string(),
            seed: cfg.seed,
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV is UTF-8")
}

fn read_csv(path: &Path) -> Result<Vec<CsvRow>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        .clone();
    if !header.iter().eq(CSV_HEADER.iter().copied()) {
        return Err(CliError::Schema(format!(
            "{}: header must be `{}`",
            path.display(),
            CSV_HEADER.join(",")
        )));
    }
    reader
        .deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

struct TableCurve {
    label: String,
    points: Vec<BerPoint>,
}

impl TableCurve {
    fn at(&self, snr: f64) -> Option<&BerPoint> {
        self.points.iter().find(|p| p.snr_db == snr)
    }
}

fn grid_text(points: &[BerPoint]) -> String {
    let v: Vec<String> = points.iter().map(|p| p.snr_db.to_string()).collect();
    format!("[{}]", v.join(", "))
}

/// Execute `table`: an aligned text comparison of the given result files.
///
/// Rows are the SNR points shared by every curve. The last column names each
/// pair of curves whose 95% intervals do not overlap at that SNR.
pub fn table(paths: &[PathBuf]) -> Result<String, CliError> {
    let mut curves = Vec::new();
    for path in paths {
        let rows = read_csv(path)?;
        if rows.is_empty() {
            return Err(CliError::Schema(format!("{}: no data rows", path.display())));
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        for source in [Source::Simulated, Source::Analytic] {
            let points: Vec<BerPoint> = rows
                .iter()
                .filter(|r| r.source == source)
                .map(|r| BerPoint {
                    snr_db: r.snr_db,
                    ber: r.ber,
                    bit_errors: r.bit_errors,
                    bits: r.bits,
                    ci_low: r.ci_low,
                    ci_high: r.ci_high,
                    source,
                })
                .collect();
            if points.is_empty() {
                continue;
            }
            let label = match source {
                Source::Simulated => stem.clone(),
                Source::Analytic => format!("{stem}:analytic"),
            };
            curves.push(TableCurve { label, points });
        }
    }

    let shared: Vec<f64> = curves[0]
        .points
        .iter()
        .map(|p| p.snr_db)
        .filter(|&snr| curves.iter().all(|c| c.at(snr).is_some()))
        .collect();
    if shared.is_empty() {
        let grids: Vec<String> = curves
            .iter()
            .map(|c| format!("{} {}", c.label, grid_text(&c.points)))
            .collect();
        return Err(CliError::Schema(format!(
            "no SNR point is shared by all inputs: {}",
            grids.join("; ")
        )));
    }

    let cells: Vec<Vec<String>> = shared
        .iter()
        .map(|&snr| {
            let mut row = vec![snr.to_string()];
            row.extend(curves.iter().map(|c| {
                let p = c.at(snr).expect("shared point");
                format!("{:.3e} [{:.3e}, {:.3e}]", p.ber, p.ci_low, p.ci_high)
            }));
            let mut flags = Vec::new();
            for i in 0..curves.len() {
                for j in i + 1..curves.len() {
                    let (a, b) = (curves[i].at(snr).unwrap(), curves[j].at(snr).unwrap());
                    if !a.overlaps(b) {
                        flags.push(format!("{}≠{}", curves[i].label, curves[j].label));
                    }
                }
            }
            row.push(flags.join(" "));
            row
        })
        .collect();

    let mut header = vec!["snr_db".to_string()];
    header.extend(curves.iter().map(|c| c.label.clone()));
    header.push("non-overlapping".to_string());
    let widths: Vec<usize> = (0..header.len())
        .map(|k| {
            cells
                .iter()
                .map(|r| r[k].chars().count())
                .chain([header[k].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out = String::new();
    for row in std::iter::once(&header).chain(&cells) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end()).expect("writing to a String");
    }
    Ok(out)
}

/// Worker count from [`THREADS_ENV`]; `None` means automatic.
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Config(format!(
                "{THREADS_ENV} must be a nonnegative integer, got '{v}'"
            ))),
        },
    }
}

/// Dispatch a parsed command line, returning the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            out,
        } => thread_limit().and_then(|threads| {
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = threads {
                pool = pool.num_threads(n);
            }
            let pool = pool
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            let overrides = Overrides { seed, trials, out };
            let report = pool.install(|| run(&config, &overrides))?;
            for f in &report.csv_files {
                println!("{}", f.display());
            }
            println!("{}", report.manifest.display());
            Ok(())
        }),
        Command::Table { csv } => table(&csv).map(|text| print!("{text}")),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
