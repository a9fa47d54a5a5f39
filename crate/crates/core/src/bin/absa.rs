use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use absa_core::corpus_io::{read_corpus, read_records, read_seeds, write_predictions, write_seeds};
use absa_core::evaluation::{evaluate, format_table, MetricsReport};
use absa_core::numerics::ClusterKind;
use absa_core::pipeline::{
    class_reps, random_baseline, run, run_on, select_seeds, with_threads, Inputs, Mode,
    PipelineConfig,
};
use absa_core::multilabel::PairPolicy;
use absa_core::representation::{build_vocabulary, document_reps, EntryOrigin};
use absa_core::seed_selection::OccurrenceMeasure;
use absa_core::synthetic::{generate, SyntheticConfig};
use absa_core::{Error, Result};

/// Seed-word guided aspect category sentiment analysis.
#[derive(Parser)]
#[command(name = "absa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the static vocabulary and write a per-word summary.
    Vocab {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pick corpus-specific seed words for every class.
    SelectSeeds {
        #[command(flatten)]
        model: ModelArgs,
        /// Selected seeds, same format as the input seeds file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute class vectors and class-guided sentence vectors.
    Represent {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Align sentences to classes and write one tuple per sentence.
    Cluster {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
        /// Fitted PCA and clustering models as JSON.
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Label the corpus without scoring.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label the corpus, write every configured output and score against gold.
    Pipeline {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        gold: Option<PathBuf>,
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// One uniformly random tuple per sentence.
    BaselineRandom {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score prediction files against gold.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        /// `NAME=PATH` or `PATH`; repeatable.
        #[arg(long = "pred", required = true)]
        preds: Vec<String>,
        #[arg(long, default_value = "table", value_parser = ["table", "json"])]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded synthetic corpus, embeddings, seeds and gold.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 300)]
        sentences: usize,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 0.3)]
        multi_fraction: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn serde_enum<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Inputs and hyperparameters. Flags override values from `--config`.
#[derive(Args)]
struct ModelArgs {
    /// JSON file with any pipeline settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Vectors for seed words absent from the corpus.
    #[arg(long)]
    standalone: Option<PathBuf>,
    /// single or multi.
    #[arg(long, value_parser = serde_enum::<Mode>)]
    mode: Option<Mode>,
    #[arg(long)]
    auto_seeds: bool,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    pca_dim: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    top_t: Option<usize>,
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long)]
    max_expansion: Option<usize>,
    /// mini-batch-kmeans, kmeans or gmm.
    #[arg(long, value_parser = serde_enum::<ClusterKind>)]
    acd_algorithm: Option<ClusterKind>,
    #[arg(long, value_parser = serde_enum::<ClusterKind>)]
    sentiment_algorithm: Option<ClusterKind>,
    /// noun_dependent or any_noun_endpoint.
    #[arg(long, value_parser = serde_enum::<PairPolicy>)]
    pair_policy: Option<PairPolicy>,
    #[arg(long)]
    use_single_fppair: bool,
    /// tokens or sentences.
    #[arg(long, value_parser = serde_enum::<OccurrenceMeasure>)]
    occurrence: Option<OccurrenceMeasure>,
    /// Seed-selection trace (with --auto-seeds).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Per-sentence pair records (multi mode).
    #[arg(long)]
    debug: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(p) => PipelineConfig::from_json_file(p)?,
            None => PipelineConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = &self.$field { c.$target = v.clone().into(); })*
            };
        }
        set!(
            corpus => corpus,
            embeddings => embeddings,
            seeds => seeds,
            standalone => standalone,
            trace => trace,
            debug => debug,
            mode => mode,
            threshold => threshold,
            pca_dim => pca_dim,
            batch => batch_size,
            seed => rng_seed,
            top_t => top_t,
            min_count => min_count,
            max_expansion => max_expansion,
            acd_algorithm => acd_algorithm,
            sentiment_algorithm => sentiment_algorithm,
            pair_policy => pair_policy,
            occurrence => occurrence,
            threads => threads,
        );
        c.auto_seeds |= self.auto_seeds;
        c.use_single_fppair |= self.use_single_fppair;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Serialize)]
struct VocabRow<'a> {
    word: &'a str,
    count: usize,
    sentence_freq: usize,
    pos: &'a str,
    origin: EntryOrigin,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Vocab { model, out } => {
            let config = model.resolve()?;
            with_threads(config.threads, || {
                let inputs = Inputs::load(&config)?;
                let vocab = build_vocabulary(
                    &inputs.corpus,
                    &inputs.embeddings,
                    config.min_count,
                    &inputs.seeds,
                    &inputs.standalone,
                )?;
                let rows: Vec<VocabRow> = vocab
                    .iter()
                    .map(|(word, e)| VocabRow {
                        word,
                        count: e.count(),
                        sentence_freq: e.sentence_freq,
                        pos: &e.pos,
                        origin: e.origin,
                    })
                    .collect();
                write_json(&out, &rows)
            })?
        }
        Command::SelectSeeds { model, out } => {
            let config = model.resolve()?;
            with_threads(config.threads, || {
                let inputs = Inputs::load(&config)?;
                let vocab = build_vocabulary(
                    &inputs.corpus,
                    &inputs.embeddings,
                    config.min_count,
                    &inputs.seeds,
                    &inputs.standalone,
                )?;
                let (selected, seed_trace) = select_seeds(&vocab, &inputs.seeds, &config)?;
                write_seeds(&out, &selected)?;
                if let Some(path) = &config.trace {
                    write_json(path, &seed_trace)?;
                }
                Ok(())
            })?
        }
        Command::Represent { model, out } => {
            let config = model.resolve()?;
            with_threads(config.threads, || {
                let inputs = Inputs::load(&config)?;
                let vocab = build_vocabulary(
                    &inputs.corpus,
                    &inputs.embeddings,
                    config.min_count,
                    &inputs.seeds,
                    &inputs.standalone,
                )?;
                let seeds = if config.auto_seeds {
                    select_seeds(&vocab, &inputs.seeds, &config)?.0
                } else {
                    inputs.seeds.clone()
                };
                let reps = class_reps(&vocab, &seeds, config.max_expansion)?;
                let temp = config.attention_temperature;
                let acd_docs = document_reps(&inputs.corpus, &inputs.embeddings, &reps.aspects, temp)?;
                let sentiment_docs =
                    document_reps(&inputs.corpus, &inputs.embeddings, &reps.sentiments, temp)?;
                write_json(
                    &out,
                    &serde_json::json!({
                        "classes": reps,
                        "acd_documents": acd_docs,
                        "sentiment_documents": sentiment_docs,
                    }),
                )
            })?
        }
        Command::Cluster { model, out, models } => {
            let mut config = model.resolve()?;
            config.mode = Mode::Single;
            with_threads(config.threads, || {
                let inputs = Inputs::load(&config)?;
                let output = run_on(&inputs, &config)?;
                write_predictions(&out, &output.single_labels)?;
                if let Some(path) = models {
                    write_json(
                        &path,
                        &serde_json::json!({ "acd": output.acd, "sentiment": output.sentiment }),
                    )?;
                }
                Ok(())
            })?
        }
        Command::Predict { model, out } => {
            let mut config = model.resolve()?;
            if out.is_some() {
                config.output = out;
            }
            config.gold = None;
            run(&config).map(|_| ())
        }
        Command::Pipeline {
            model,
            out,
            gold,
            metrics,
        } => {
            let mut config = model.resolve()?;
            if out.is_some() {
                config.output = out;
            }
            if gold.is_some() {
                config.gold = gold;
            }
            if metrics.is_some() {
                config.metrics = metrics;
            }
            let (output, report) = run(&config)?;
            if let Some(r) = report {
                eprint!("{}", format_table(&[(output.variant.name().to_string(), r)]));
            }
            Ok(())
        }
        Command::BaselineRandom {
            corpus,
            seeds,
            seed,
            out,
        } => {
            let corpus = read_corpus(corpus)?;
            let seeds = read_seeds(seeds)?;
            write_predictions(out, &random_baseline(&corpus, &seeds, seed))
        }
        Command::Evaluate {
            gold,
            preds,
            format,
            out,
        } => {
            let gold = read_records(gold)?;
            let mut rows: Vec<(String, MetricsReport)> = Vec::new();
            for spec in preds {
                let (name, path) = match spec.split_once('=') {
                    Some((n, p)) => (n.to_string(), PathBuf::from(p)),
                    None => (spec.clone(), PathBuf::from(&spec)),
                };
                let pred = read_records(&path)?;
                rows.push((name, evaluate(&gold, &pred)?));
            }
            let text = if format == "json" {
                let map: serde_json::Map<String, serde_json::Value> = rows
                    .into_iter()
                    .map(|(n, r)| Ok((n, serde_json::to_value(r)?)))
                    .collect::<Result<_>>()?;
                let mut t = serde_json::to_string_pretty(&map)?;
                t.push('\n');
                t
            } else {
                format_table(&rows)
            };
            match out {
                Some(path) => fs::write(&path, text).map_err(|source| Error::Io { path, source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Synth {
            out,
            sentences,
            dim,
            multi_fraction,
            seed,
        } => generate(&SyntheticConfig {
            n_sentences: sentences,
            dim,
            multi_fraction,
            seed,
            ..SyntheticConfig::default()
        })?
        .write_to(out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
