//! `spamkit` command-line pipeline: corpus generation, feature extraction,
//! training, prediction, cross-validation, the category benchmark and
//! wrapper feature selection.

pub mod formats;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use spamkit_core::corpus::{generate, GenSpec};
use spamkit_core::evaluation::{benchmark_grid, cross_validate, PROTOCOL};
use spamkit_core::features::CategoryMask;
use spamkit_core::selection::{best_first_forward, SearchParams};
use spamkit_core::{Algorithm, TrainConfig};

use formats::{discover, extract_items, read_dataset, read_feature_csv, write_feature_csv, ModelFile, MODEL_FORMAT_VERSION};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<spamkit_core::Error> for CliError {
    fn from(e: spamkit_core::Error) -> Self {
        match e {
            spamkit_core::Error::InvalidParameter(_) | spamkit_core::Error::InvalidSpec(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "spamkit", version, about = "Behavioral-feature spam classification toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mask(s: &str) -> Result<CategoryMask, String> {
    s.parse().map_err(|e: spamkit_core::Error| e.to_string())
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: spamkit_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic corpus (spam/, ham/, manifest.csv).
    GenCorpus {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        spam_ratio: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the 21 features from a labeled corpus into CSV.
    Extract {
        /// spam/ham directory, manifest CSV, or mbox file.
        #[arg(long)]
        input: PathBuf,
        /// Manifest for an mbox input or to cross-check a directory.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a model on a feature CSV.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long, value_parser = parse_mask, default_value = "all")]
        mask: CategoryMask,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        min_leaf: usize,
        #[arg(long, default_value_t = 1.0)]
        svm_c: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify raw messages with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
    },
    /// Cross-validate one algorithm on one category mask.
    Evaluate {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long, value_parser = parse_mask, default_value = "all")]
        mask: CategoryMask,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Cross-validate every category combination with every algorithm.
    Benchmark {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Directory receiving benchmark.csv and benchmark.md.
        #[arg(long)]
        out: PathBuf,
    },
    /// Best-first forward feature selection with a CV wrapper.
    Select {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        stale_limit: usize,
        /// Directory receiving selection.txt and selection_trace.csv.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                1
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::GenCorpus { n, spam_ratio, seed, out: dir } => {
            let manifest = generate(&GenSpec::new(n, spam_ratio, seed), &dir)?;
            let spam = manifest.rows.iter().filter(|r| r.label == spamkit_core::Label::Spam).count();
            emit(out, &format!(
                "wrote {} messages ({spam} spam, {} ham) to {}\n",
                manifest.rows.len(),
                manifest.rows.len() - spam,
                dir.display()
            ))
        }
        Command::Extract { input, manifest, out: dest } => {
            let items = discover(&input, manifest.as_deref())?;
            let csv = write_feature_csv(&extract_items(&items)?)?;
            match dest {
                Some(path) => write_file(&path, &csv),
                None => emit(out, &csv),
            }
        }
        Command::Train { features, algo, mask, seed, min_leaf, svm_c, out: dest } => {
            let data = read_dataset(&features)?;
            let projected = data.select_columns(&mask.feature_indices()?)?;
            let mut config = TrainConfig { min_leaf, ..TrainConfig::default() }.with_seed(seed);
            config.svm.c = svm_c;
            let model = algo.train(&projected, &config)?;
            let file = ModelFile {
                format_version: MODEL_FORMAT_VERSION,
                toolkit_version: VERSION.to_string(),
                algorithm: algo,
                mask,
                feature_names: projected.feature_names().to_vec(),
                seed,
                model,
            };
            write_file(&dest, &file.to_json()?)?;
            emit(out, &format!("trained {algo} on {} rows ({mask}) -> {}\n", projected.len(), dest.display()))
        }
        Command::Predict { model, input } => {
            let file = ModelFile::load(&model)?;
            let columns = file.mask.feature_indices()?;
            for path in input {
                let bytes = fs::read(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                let msg = spamkit_core::parse_eml(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                let v = spamkit_core::extract(&msg);
                let row: Vec<f64> = columns.iter().map(|&c| v.values[c]).collect();
                let p = file.model.predict(&row)?;
                emit(out, &format!("{}\t{}\t{:.6}\n", path.display(), p.label, p.score))?;
            }
            Ok(())
        }
        Command::Evaluate { features, algo, mask, folds, seed } => {
            let data = read_dataset(&features)?;
            let r = cross_validate(&data, algo, mask, folds, seed, &TrainConfig::default())?;
            let (m, cm) = (&r.metrics, &r.matrix);
            emit(out, &format!(
                "# spamkit {VERSION}; protocol: {PROTOCOL}; folds: {folds}; seed: {seed}; positive class: spam\n\
                 algorithm: {algo}\nmask: {mask}\naccuracy: {:.6}\nprecision: {:.6}\nrecall: {:.6}\n\
                 spam precision: {:.6}\nspam recall: {:.6}\nham precision: {:.6}\nham recall: {:.6}\n\
                 tp: {} fp: {} fn: {} tn: {}\n",
                m.accuracy, m.precision, m.recall, m.spam.precision, m.spam.recall, m.ham.precision, m.ham.recall,
                cm.tp, cm.fp, cm.fn_, cm.tn
            ))
        }
        Command::Benchmark { features, folds, seed, out: dir } => {
            let data = read_dataset(&features)?;
            let report = benchmark_grid(&data, folds, seed, &TrainConfig::default())?;
            let md = report.to_markdown(VERSION);
            write_file(&dir.join("benchmark.csv"), &report.to_csv(VERSION))?;
            write_file(&dir.join("benchmark.md"), &md)?;
            emit(out, &md)
        }
        Command::Select { features, algo, folds, seed, stale_limit, out: dir } => {
            let vectors = read_feature_csv(&features)?;
            let data = spamkit_core::Dataset::from_vectors(&vectors)?;
            let params = SearchParams { folds, seed, stale_limit, ..SearchParams::new(algo) };
            let outcome = best_first_forward(&data, &params)?;
            let summary = outcome.best.summary_line();
            let header = format!(
                "# spamkit {VERSION}; best-first forward selection; algorithm: {algo}; folds: {folds}; seed: {seed}; stale limit: {stale_limit}\n"
            );
            write_file(&dir.join("selection.txt"), &format!("{header}{summary}\n"))?;
            write_file(&dir.join("selection_trace.csv"), &format!("{header}{}", outcome.trace_csv()))?;
            emit(out, &format!("{summary}\n"))
        }
    }
}
