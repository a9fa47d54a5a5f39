use std::path::PathBuf;

/// Errors raised anywhere in the pipeline.
///
/// Variants split into two families: input validation failures (bad files,
/// violated invariants, inconsistent arguments) and runtime failures (I/O,
/// numerical breakdown). [`Error::is_validation`] tells them apart so the CLI
/// can map them to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: line {line}: malformed record: {message}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("sentence {id:?}: {message}")]
    InvalidSentence { id: String, message: String },

    #[error("duplicate sentence id {0:?}")]
    DuplicateId(String),

    #[error("unrecognized format: {0}")]
    UnrecognizedFormat(String),

    #[error("embedding file: {0}")]
    InvalidEmbeddings(String),

    #[error("embedding row-count mismatch at sentence {index} ({id:?}): corpus has {expected} tokens, embeddings have {found}")]
    RowCountMismatch {
        index: usize,
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid seeds: {0}")]
    InvalidSeeds(String),

    #[error("invalid labels for {id:?}: {message}")]
    InvalidLabels { id: String, message: String },

    #[error("seed word {0:?} does not occur in the corpus and no standalone vector was supplied")]
    MissingSeedVector(String),

    #[error("word {0:?} is not in the vocabulary")]
    NotInVocabulary(String),

    #[error("no vocabulary word has dominant part of speech {0}")]
    EmptyPosFilter(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("prediction and gold ids differ; only in gold: {only_gold:?}; only in predictions: {only_pred:?}")]
    IdMismatch {
        only_gold: Vec<String>,
        only_pred: Vec<String>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad inputs rather than by the environment.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_validation(),
            Error::Io { .. } | Error::Numerical(_) => false,
            _ => true,
        }
    }
}

/// Attaches a stage name to errors coming out of one pipeline stage.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
