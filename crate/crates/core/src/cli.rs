//! Command-line front end: train, predict, evaluate, inspect.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataset::{
    build_selector_dictionary, encode_examples, load_table, LoadOptions, RawTable,
};
use crate::error::{Error, Result};
use crate::eval::{cross_validate, FoldPlan};
use crate::learner::{train, LearnerConfig, Variant};
use crate::persistence::{load_model, save_model};
use crate::ppc_tree::build_tree;

#[derive(Debug, Parser)]
#[command(name = "lord", version, about = "Learn one locally optimal rule per training example")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a model from a labeled table and write it to a file.
    Train {
        /// Training table with a header row.
        input: PathBuf,
        /// Model file to write.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        learner: LearnerArgs,
    },
    /// Print one predicted label per input row.
    Predict {
        /// Model file written by `train`.
        #[arg(short, long)]
        model: PathBuf,
        /// Table to classify; the class column may be absent.
        input: PathBuf,
        /// Append the rule that decided each prediction.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Cross-validate on a labeled table.
    Evaluate {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Seed of the row shuffle.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tab-separated output instead of an aligned table.
        #[arg(long)]
        tsv: bool,
        /// Include learning and classification wall times.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        learner: LearnerArgs,
    },
    /// Dump a model's rules, or the prefix tree of a training table.
    Inspect {
        /// Model file whose rules are printed, best first.
        #[arg(short, long, required_unless_present = "tree")]
        model: Option<PathBuf>,
        /// Training table whose prefix tree is printed.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        data: DataArgs,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Class column name. Defaults to the last column.
    #[arg(long)]
    pub class_column: Option<String>,
    /// Token marking a missing cell; repeat for several. Defaults to `?` and the empty cell.
    #[arg(long = "missing-token")]
    pub missing_tokens: Vec<String>,
    /// Field delimiter: a single character, or `tab`.
    #[arg(long, default_value = ",")]
    pub delimiter: String,
}

#[derive(Debug, Args)]
pub struct LearnerArgs {
    /// m of the m-estimate.
    #[arg(long, default_value_t = 0.1)]
    pub m: f64,
    /// lord, lord_star or overlord.
    #[arg(long, default_value = "lord")]
    pub variant: String,
    /// Worker threads for rule search. Defaults to the available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Longest rule body.
    #[arg(long)]
    pub max_rule_length: Option<usize>,
}

impl DataArgs {
    fn delimiter(&self) -> Result<u8> {
        match self.delimiter.as_str() {
            "tab" | "\\t" | "\t" => Ok(b'\t'),
            d if d.len() == 1 => Ok(d.as_bytes()[0]),
            d => Err(Error::usage(format!("delimiter must be one ASCII character, got `{d}`"))),
        }
    }

    fn options(&self) -> Result<LoadOptions> {
        let mut opts = LoadOptions {
            class_column: self.class_column.clone(),
            delimiter: self.delimiter()?,
            ..LoadOptions::default()
        };
        if !self.missing_tokens.is_empty() {
            opts.missing_tokens = self.missing_tokens.clone();
        }
        Ok(opts)
    }
}

impl LearnerArgs {
    fn config(&self) -> Result<LearnerConfig> {
        let worker_count = match self.threads {
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let cfg = LearnerConfig {
            m: self.m,
            variant: self.variant.parse::<Variant>()?,
            max_rule_length: self.max_rule_length,
            worker_count,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Usage(format!("cannot open {}: {e}", path.display())))
}

fn read_table(path: &Path, opts: &LoadOptions) -> Result<RawTable> {
    load_table(open(path)?, opts)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Train { input, output, data, learner } => {
            let cfg = learner.config()?;
            let table = read_table(&input, &data.options()?)?;
            let model = train(&table, &cfg)?;
            let file = File::create(&output)
                .map_err(|e| Error::Usage(format!("cannot create {}: {e}", output.display())))?;
            save_model(&model, BufWriter::new(file))?;
            let (count, length) = model.rule_stats();
            log::info!("wrote {count} rules (mean length {length:.3}) to {}", output.display());
        }
        Command::Predict { model, input, explain, data } => {
            let model = load_model(open(&model)?)?;
            let mut opts = data.options()?;
            opts.require_class = false;
            opts.class_column = Some(
                opts.class_column.unwrap_or_else(|| model.dictionary.class_attribute().name.clone()),
            );
            // columns without cut points are read as text, as during training
            opts.categorical_columns = model
                .dictionary
                .predictive_attributes()
                .iter()
                .filter(|a| !model.cuts.iter().any(|c| c.column_name == a.name))
                .map(|a| a.name.clone())
                .collect();
            let table = read_table(&input, &opts)?;
            for rule in model.predict_table(&table)? {
                if explain {
                    writeln!(out, "{}\t{}", model.class_label(rule), model.format_rule(rule))?;
                } else {
                    writeln!(out, "{}", model.class_label(rule))?;
                }
            }
        }
        Command::Evaluate { input, folds, seed, tsv, timings, data, learner } => {
            let cfg = learner.config()?;
            let table = read_table(&input, &data.options()?)?;
            let plan = FoldPlan::new(table.row_count(), folds, seed)?;
            let report = cross_validate(&table, &plan, &cfg)?;
            let text = if tsv { report.render_tsv(timings) } else { report.render_text(timings) };
            out.write_all(text.as_bytes())?;
        }
        Command::Inspect { model, tree, data } => {
            if let Some(path) = model {
                let model = load_model(open(&path)?)?;
                for line in model.rule_dump() {
                    writeln!(out, "{line}")?;
                }
            }
            if let Some(path) = tree {
                let table = read_table(&path, &data.options()?)?;
                let cuts = crate::dataset::fit_all(&table)?;
                let table = crate::dataset::apply_discretizer(&table, &cuts)?;
                let dict = build_selector_dictionary(&table)?;
                let encoded = encode_examples(&table, &dict)?;
                out.write_all(build_tree(&encoded.examples).dump(&dict).as_bytes())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parse arguments, run, and map the outcome to an exit code:
/// 0 on success, 1 for usage and configuration errors, 2 for data errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "lord: {e}");
            e.exit_code()
        }
    }
}
