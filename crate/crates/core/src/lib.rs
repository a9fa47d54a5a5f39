//! Label-free aspect category sentiment analysis driven by seed words.
//!
//! Given a parsed corpus, per-token contextual embeddings, and one seed word
//! per aspect and sentiment class, the pipeline builds static word vectors,
//! expands the seeds into class vectors, embeds each sentence with
//! class-guided attention, and aligns sentences to classes with seeded
//! clustering. Multi-label mode adds per-pair labels read off the dependency
//! parse.

pub mod corpus_io;
pub mod error;
pub mod evaluation;
pub mod multilabel;
pub mod numerics;
pub mod pipeline;
pub mod representation;
pub mod seed_selection;
pub mod synthetic;

pub use error::{Error, Result};
