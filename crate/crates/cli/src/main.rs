//! `seisclass`: batch front end for the seismic damage classification pipeline.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::commands::{ExtractInputs, Outcome};
use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "seisclass", version, about = "Seismic damage classification pipeline")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command; they override values from `--config`.
#[derive(Debug, Args)]
struct Common {
    /// Seed for data generation, fold assignment and PPS folds [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory receiving report files [default: .]
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core [default: 0]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cross-validation folds [default: 10]
    #[arg(long, global = true)]
    folds: Option<usize>,
    /// Stratify folds by class [default: true]
    #[arg(long, global = true, action = ArgAction::Set, value_name = "BOOL")]
    stratify: Option<bool>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a labeled synthetic feature table
    Synth {
        /// Number of rows
        #[arg(short = 'n', long = "rows")]
        rows: Option<usize>,
        /// Class proportions, slight,moderate,heavy
        #[arg(long, value_delimiter = ',', num_args = 3)]
        mix: Option<Vec<f64>>,
        /// Output table [default: <out-dir>/synthetic.csv]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute intensity measures of records and build a feature table
    Extract {
        /// Record files or directories of record files
        #[arg(required = true)]
        records: Vec<PathBuf>,
        /// Sidecar with columns id,Htot,nvx,nvy,e0
        #[arg(long)]
        structural: PathBuf,
        /// Sidecar with columns id,MIDR
        #[arg(long)]
        midr: Option<PathBuf>,
        /// Record layout: two-column or npts
        #[arg(long)]
        format: Option<String>,
        /// Acceleration unit of the records: g or mps2
        #[arg(long)]
        unit: Option<String>,
        /// Dataset tag stored in the table
        #[arg(long, default_value = "extracted")]
        tag: String,
        /// Output table [default: <out-dir>/features.csv]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write normalization, outlier, PCA scree and PPS reports for a table
    Preprocess {
        table: PathBuf,
        /// Also write normalized.csv
        #[arg(long)]
        write_normalized: bool,
    },
    /// Train an SVM on the whole table and save it
    Train {
        table: PathBuf,
        /// svm-polynomial, svm-rbf or svm-gaussian
        #[arg(long, default_value = "svm-gaussian")]
        model: String,
        /// Model file [default: <out-dir>/model.txt]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify the rows of a table with a saved model
    Predict {
        model: PathBuf,
        table: PathBuf,
        /// Predictions file [default: <out-dir>/predictions.csv]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-validate several models and write the comparison report
    Compare {
        table: PathBuf,
        /// Comma-separated model names
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
    },
    /// Print the effective configuration as TOML
    Config,
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(path) => {
            commands::require_exists(&[path])?;
            RunConfig::load(path)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &c.out_dir {
        cfg.out_dir.clone_from(dir);
    }
    if let Some(w) = c.workers {
        cfg.workers = w;
    }
    if let Some(k) = c.folds {
        cfg.cv.folds = k;
    }
    if let Some(s) = c.stratify {
        cfg.cv.stratify = s;
    }
    match &cli.command {
        Command::Synth { rows, mix, .. } => {
            if let Some(n) = rows {
                cfg.synth.n = *n;
            }
            if let Some(m) = mix {
                cfg.synth.mix = [m[0], m[1], m[2]];
            }
        }
        Command::Extract { format, unit, .. } => {
            if let Some(f) = format {
                cfg.im.format.clone_from(f);
            }
            if let Some(u) = unit {
                cfg.im.unit.clone_from(u);
            }
        }
        Command::Preprocess { write_normalized, .. } => {
            cfg.preprocess.write_normalized |= *write_normalized;
        }
        Command::Compare { models: Some(m), .. } => {
            cfg.models.list.clone_from(m);
        }
        _ => {}
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = effective_config(cli)?;
    let or_default = |p: &Option<PathBuf>, name: &str| p.clone().unwrap_or_else(|| cfg.out_dir.join(name));
    match &cli.command {
        Command::Synth { output, .. } => commands::synth(&cfg, &or_default(output, "synthetic.csv")),
        Command::Extract {
            records,
            structural,
            midr,
            tag,
            output,
            ..
        } => commands::extract(
            &cfg,
            &ExtractInputs {
                records,
                structural,
                midr: midr.as_deref(),
                tag,
                output: &or_default(output, "features.csv"),
            },
        ),
        Command::Preprocess { table, .. } => commands::preprocess(&cfg, table),
        Command::Train { table, model, output } => {
            commands::train(&cfg, table, model, &or_default(output, "model.txt"))
        }
        Command::Predict { model, table, output } => {
            commands::predict(model, table, &or_default(output, "predictions.csv"))
        }
        Command::Compare { table, .. } => commands::compare(&cfg, table),
        Command::Config => Ok(Outcome {
            files: output::Staged::new(),
            summary: cfg.to_toml()?,
            warnings: Vec::new(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        let written = outcome.files.commit()?;
        Ok((outcome.summary, outcome.warnings, written))
    });
    match result {
        Ok((summary, warnings, written)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            print!("{summary}");
            for path in written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(&e);
            ExitCode::FAILURE
        }
    }
}

fn report(e: &CliError) {
    eprintln!("error: kind={} message={:?}", e.kind(), e.to_string());
}
