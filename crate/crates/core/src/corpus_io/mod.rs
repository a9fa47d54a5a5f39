//! File formats consumed and produced by the pipeline.
//!
//! * corpus: JSONL, one [`TokenizedSentence`] per line
//! * embeddings: AXEB v1 binary, one block of token vectors per corpus line
//! * seeds: JSON with `aspects` and `sentiments` objects
//! * gold / predictions: JSONL `{"id": .., "labels": [[aspect, sentiment], ..]}`
//!
//! Line `k` of the corpus always corresponds to block `k` of the embeddings.

mod corpus;
mod embeddings;
mod labels;
mod seeds;

pub use corpus::{is_ud_tag, read_corpus, validate_corpus, write_corpus, Token, TokenizedSentence, UD_TAGS};
pub use embeddings::{
    decode_embeddings, encode_embeddings, read_embeddings, write_embeddings, SentenceMatrix,
    TokenEmbeddingStore, AXEB_MAGIC, AXEB_VERSION,
};
pub use labels::{read_records, write_predictions, write_records, LabelTuple, PredictionRecord};
pub use seeds::{
    parse_seeds, read_seeds, read_standalone_vectors, write_seeds, SeedConfig, StandaloneVector,
    StandaloneVectors, UniqueMap,
};
