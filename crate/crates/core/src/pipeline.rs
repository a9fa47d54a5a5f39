//! End-to-end orchestration of the four model variants.
//!
//! | mode   | auto seeds | variant  |
//! |--------|------------|----------|
//! | single | no         | X-SABSA  |
//! | single | yes        | AX-SABSA |
//! | multi  | no         | X-MABSA  |
//! | multi  | yes        | AX-MABSA |

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus_io::{
    read_corpus, read_embeddings, read_records, read_seeds, read_standalone_vectors,
    write_predictions, LabelTuple, PredictionRecord, SeedConfig, StandaloneVectors,
    TokenEmbeddingStore, TokenizedSentence, UniqueMap,
};
use crate::error::{Error, Result, StageExt};
use crate::evaluation::{evaluate, MetricsReport};
use crate::multilabel::{fallback_label, label_sentence, GeneratorConfig, PairPolicy, SentenceDebug};
use crate::numerics::{align, AlignConfig, Alignment, ClusterKind, Task};
use crate::representation::{build_vocabulary, document_reps, expand_classes, ClassRep, DocRep, Vocabulary};
use crate::seed_selection::{acssa_select, AcssaInput, AcssaTrace, OccurrenceMeasure};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One (aspect, sentiment) tuple per sentence from clustering.
    Single,
    /// Dependency-pair labels with clustering as fallback.
    #[default]
    Multi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    #[serde(rename = "X-SABSA")]
    XSabsa,
    #[serde(rename = "AX-SABSA")]
    AxSabsa,
    #[serde(rename = "X-MABSA")]
    XMabsa,
    #[serde(rename = "AX-MABSA")]
    AxMabsa,
}

impl Variant {
    pub fn new(mode: Mode, auto_seeds: bool) -> Self {
        match (mode, auto_seeds) {
            (Mode::Single, false) => Variant::XSabsa,
            (Mode::Single, true) => Variant::AxSabsa,
            (Mode::Multi, false) => Variant::XMabsa,
            (Mode::Multi, true) => Variant::AxMabsa,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::XSabsa => "X-SABSA",
            Variant::AxSabsa => "AX-SABSA",
            Variant::XMabsa => "X-MABSA",
            Variant::AxMabsa => "AX-MABSA",
        }
    }
}

/// Every knob of a run. Mirrors the CLI flags; see `absa --help`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    /// Standalone vectors for seed words missing from the corpus.
    pub standalone: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    /// Per-sentence pair/label records (multi mode).
    pub debug: Option<PathBuf>,

    pub mode: Mode,
    pub auto_seeds: bool,
    pub threshold: f64,
    pub use_single_fppair: bool,
    pub pair_policy: PairPolicy,
    pub pca_dim: usize,
    #[serde(rename = "batch")]
    pub batch_size: usize,
    #[serde(rename = "seed")]
    pub rng_seed: u64,
    pub top_t: usize,
    pub min_count: usize,
    pub max_expansion: usize,
    pub attention_temperature: f64,
    pub occurrence: OccurrenceMeasure,
    pub acd_algorithm: ClusterKind,
    pub sentiment_algorithm: ClusterKind,
    pub max_iters: usize,
    pub tol: f64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let align = AlignConfig::default();
        PipelineConfig {
            corpus: None,
            embeddings: None,
            seeds: None,
            standalone: None,
            gold: None,
            output: None,
            metrics: None,
            trace: None,
            debug: None,
            mode: Mode::Multi,
            auto_seeds: false,
            threshold: crate::multilabel::DEFAULT_THRESHOLD,
            use_single_fppair: false,
            pair_policy: PairPolicy::NounDependent,
            pca_dim: align.pca_dim,
            batch_size: align.batch_size,
            rng_seed: align.seed,
            top_t: crate::seed_selection::DEFAULT_TOP_T,
            min_count: 3,
            max_expansion: 100,
            attention_temperature: 1.0,
            occurrence: OccurrenceMeasure::Tokens,
            acd_algorithm: align.acd_algorithm,
            sentiment_algorithm: align.sentiment_algorithm,
            max_iters: align.max_iters,
            tol: align.tol,
            threads: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    pub fn variant(&self) -> Variant {
        Variant::new(self.mode, self.auto_seeds)
    }

    pub fn align_config(&self) -> AlignConfig {
        AlignConfig {
            acd_algorithm: self.acd_algorithm,
            sentiment_algorithm: self.sentiment_algorithm,
            pca_dim: self.pca_dim,
            batch_size: self.batch_size,
            seed: self.rng_seed,
            max_iters: self.max_iters,
            tol: self.tol,
            ..AlignConfig::default()
        }
    }

    pub fn generator_config(&self) -> GeneratorConfig {
        GeneratorConfig {
            threshold: self.threshold,
            use_single_fppair: self.use_single_fppair,
            pair_policy: self.pair_policy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.pca_dim == 0 {
            return bad("pca_dim must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch must be at least 1");
        }
        if self.top_t == 0 {
            return bad("top_t must be at least 1");
        }
        if self.min_count == 0 {
            return bad("min_count must be at least 1");
        }
        if self.max_expansion == 0 {
            return bad("max_expansion must be at least 1");
        }
        if !self.threshold.is_finite() {
            return bad("threshold must be finite");
        }
        if !(self.attention_temperature > 0.0) {
            return bad("attention_temperature must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        Ok(())
    }

    fn require<'a>(&self, path: &'a Option<PathBuf>, name: &str) -> Result<&'a Path> {
        path.as_deref()
            .ok_or_else(|| Error::InvalidArgument(format!("missing required path: {name}")))
    }
}

/// Loaded, validated inputs.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub corpus: Vec<TokenizedSentence>,
    pub embeddings: TokenEmbeddingStore,
    pub seeds: SeedConfig,
    pub standalone: StandaloneVectors,
}

impl Inputs {
    pub fn load(config: &PipelineConfig) -> Result<Self> {
        let corpus = read_corpus(config.require(&config.corpus, "corpus")?)?;
        let embeddings = read_embeddings(config.require(&config.embeddings, "embeddings")?, &corpus)?;
        let seeds = read_seeds(config.require(&config.seeds, "seeds")?)?;
        let standalone = match &config.standalone {
            Some(p) => read_standalone_vectors(p)?,
            None => StandaloneVectors::new(),
        };
        Ok(Inputs {
            corpus,
            embeddings,
            seeds,
            standalone,
        })
    }
}

/// Selection traces for both label spaces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedTrace {
    pub aspects: AcssaTrace,
    pub sentiments: AcssaTrace,
}

/// Runs automatic seed selection for aspects (nouns) and sentiments (adjectives).
pub fn select_seeds(
    vocab: &Vocabulary,
    seeds: &SeedConfig,
    config: &PipelineConfig,
) -> Result<(SeedConfig, SeedTrace)> {
    let run = |pos: &str, map: &UniqueMap<String>| {
        let classes: Vec<(String, String)> =
            map.0.iter().map(|(c, w)| (c.clone(), w.clone())).collect();
        acssa_select(&AcssaInput {
            target_pos: pos,
            vocab,
            classes: &classes,
            top_t: config.top_t,
            occurrence: config.occurrence,
        })
    };
    let (aspects, aspect_trace) = run("NOUN", &seeds.aspects)?;
    let (sentiments, sentiment_trace) = run("ADJ", &seeds.sentiments)?;
    Ok((
        SeedConfig {
            aspects: UniqueMap(aspects),
            sentiments: UniqueMap(sentiments),
        },
        SeedTrace {
            aspects: aspect_trace,
            sentiments: sentiment_trace,
        },
    ))
}

/// Class representations for both label spaces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReps {
    pub aspects: Vec<ClassRep>,
    pub sentiments: Vec<ClassRep>,
}

pub fn class_reps(vocab: &Vocabulary, seeds: &SeedConfig, max_expansion: usize) -> Result<ClassReps> {
    let pairs = |m: &UniqueMap<String>| -> Vec<(String, String)> {
        m.0.iter().map(|(c, w)| (c.clone(), w.clone())).collect()
    };
    let all = seeds.all_seed_words();
    Ok(ClassReps {
        aspects: expand_classes(&pairs(&seeds.aspects), vocab, &all, max_expansion)?,
        sentiments: expand_classes(&pairs(&seeds.sentiments), vocab, &all, max_expansion)?,
    })
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub variant: Variant,
    pub vocabulary: Vocabulary,
    pub seeds_used: SeedConfig,
    pub seed_trace: Option<SeedTrace>,
    pub class_reps: ClassReps,
    pub acd_docs: Vec<DocRep>,
    pub sentiment_docs: Vec<DocRep>,
    pub acd: Alignment,
    pub sentiment: Alignment,
    /// Clustering tuple per sentence.
    pub single_labels: Vec<PredictionRecord>,
    pub predictions: Vec<PredictionRecord>,
    /// Multi mode only.
    pub debug: Vec<SentenceDebug>,
}

/// Runs the model on loaded inputs, without touching the filesystem.
pub fn run_on(inputs: &Inputs, config: &PipelineConfig) -> Result<PipelineOutput> {
    config.validate()?;
    let vocabulary = build_vocabulary(
        &inputs.corpus,
        &inputs.embeddings,
        config.min_count,
        &inputs.seeds,
        &inputs.standalone,
    )
    .stage("vocabulary")?;

    let (seeds_used, seed_trace) = if config.auto_seeds {
        let (s, t) = select_seeds(&vocabulary, &inputs.seeds, config).stage("seed-selection")?;
        (s, Some(t))
    } else {
        (inputs.seeds.clone(), None)
    };

    let reps = class_reps(&vocabulary, &seeds_used, config.max_expansion).stage("class-representation")?;
    let acd_docs = document_reps(
        &inputs.corpus,
        &inputs.embeddings,
        &reps.aspects,
        config.attention_temperature,
    )
    .stage("document-representation")?;
    let sentiment_docs = document_reps(
        &inputs.corpus,
        &inputs.embeddings,
        &reps.sentiments,
        config.attention_temperature,
    )
    .stage("document-representation")?;

    let align_config = config.align_config();
    let acd = align(&acd_docs, &reps.aspects, Task::Acd, &align_config).stage("alignment")?;
    let sentiment =
        align(&sentiment_docs, &reps.sentiments, Task::Sentiment, &align_config).stage("alignment")?;

    let aspect_names: Vec<String> = inputs.seeds.aspect_classes().map(str::to_string).collect();
    let sentiment_names: Vec<String> = inputs.seeds.sentiment_classes().map(str::to_string).collect();
    let single_labels: Vec<PredictionRecord> = inputs
        .corpus
        .iter()
        .enumerate()
        .map(|(k, s)| {
            PredictionRecord::single(
                &s.id,
                fallback_label(k, &acd.assignment, &sentiment.assignment, &aspect_names, &sentiment_names),
            )
        })
        .collect();

    let (predictions, debug) = match config.mode {
        Mode::Single => (single_labels.clone(), Vec::new()),
        Mode::Multi => {
            let generator = config.generator_config();
            let debug: Vec<SentenceDebug> = inputs
                .corpus
                .par_iter()
                .enumerate()
                .map(|(k, sentence)| {
                    let fallback = single_labels[k].labels.first().unwrap();
                    label_sentence(
                        sentence,
                        Some(inputs.embeddings.sentence(k)),
                        &vocabulary,
                        &reps.aspects,
                        &reps.sentiments,
                        &generator,
                        fallback,
                    )
                })
                .collect();
            let predictions = debug
                .iter()
                .map(|d| PredictionRecord::new(&d.id, d.decision.labels.iter().cloned()))
                .collect();
            (predictions, debug)
        }
    };
    for record in &predictions {
        record.check_against(&inputs.seeds)?;
    }

    Ok(PipelineOutput {
        variant: config.variant(),
        vocabulary,
        seeds_used,
        seed_trace,
        class_reps: reps,
        acd_docs,
        sentiment_docs,
        acd,
        sentiment,
        single_labels,
        predictions,
        debug,
    })
}

/// Metrics file contents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsFile {
    pub variant: Variant,
    #[serde(flatten)]
    pub report: MetricsReport,
}

/// Runs `f` on a dedicated pool when a thread count is configured.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_jsonl<T: Serialize>(path: &Path, values: &[T]) -> Result<()> {
    let mut text = String::new();
    for v in values {
        text.push_str(&serde_json::to_string(v)?);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loads inputs, runs the model, writes every configured output file, and
/// scores against gold when a gold file is configured.
pub fn run(config: &PipelineConfig) -> Result<(PipelineOutput, Option<MetricsReport>)> {
    config.validate()?;
    with_threads(config.threads, || {
        let inputs = Inputs::load(config).stage("load")?;
        let output = run_on(&inputs, config)?;
        write_outputs(config, &output)?;
        let metrics = match &config.gold {
            Some(gold_path) => {
                let gold = read_records(gold_path).stage("evaluation")?;
                let report = evaluate(&gold, &output.predictions).stage("evaluation")?;
                if let Some(path) = &config.metrics {
                    write_json(
                        path,
                        &MetricsFile {
                            variant: output.variant,
                            report: report.clone(),
                        },
                    )
                    .stage("write")?;
                }
                Some(report)
            }
            None => None,
        };
        Ok((output, metrics))
    })?
}

fn write_outputs(config: &PipelineConfig, output: &PipelineOutput) -> Result<()> {
    let result = (|| {
        if let Some(path) = &config.output {
            write_predictions(path, &output.predictions)?;
        }
        if let (Some(path), Some(trace)) = (&config.trace, &output.seed_trace) {
            write_json(path, trace)?;
        }
        if let Some(path) = &config.debug {
            write_jsonl(path, &output.debug)?;
        }
        Ok(())
    })();
    result.stage("write")
}

/// One uniformly drawn (aspect, sentiment) tuple per sentence.
pub fn random_baseline(
    corpus: &[TokenizedSentence],
    seeds: &SeedConfig,
    rng_seed: u64,
) -> Vec<PredictionRecord> {
    let aspects: Vec<&str> = seeds.aspect_classes().collect();
    let sentiments: Vec<&str> = seeds.sentiment_classes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    corpus
        .iter()
        .map(|s| {
            let a = aspects[rng.random_range(0..aspects.len())];
            let p = sentiments[rng.random_range(0..sentiments.len())];
            PredictionRecord::single(&s.id, LabelTuple::new(a, p))
        })
        .collect()
}
