use rayon::prelude::*;
use serde::Serialize;

use crate::corpus_io::{TokenEmbeddingStore, TokenizedSentence};
use crate::error::{Error, Result};
use crate::representation::similarity::{dot, unit};
use crate::representation::ClassRep;

/// Class-guided sentence vector: an attention-weighted sum of token vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DocRep {
    pub sentence_id: String,
    pub vector: Vec<f64>,
    /// Attention weight per token; non-negative, sums to 1.
    pub weights: Vec<f64>,
}

/// Numerically stable softmax of `scores / temperature`.
pub fn softmax(scores: &[f64], temperature: f64) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores
        .iter()
        .map(|s| ((s - max) / temperature).exp())
        .collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Computes one [`DocRep`] per sentence.
///
/// Each token is scored by its best cosine against any class vector; the
/// softmax of those scores over the sentence (at `temperature`) weights the
/// token vectors.
pub fn document_reps(
    corpus: &[TokenizedSentence],
    embeddings: &TokenEmbeddingStore,
    class_reps: &[ClassRep],
    temperature: f64,
) -> Result<Vec<DocRep>> {
    if class_reps.is_empty() {
        return Err(Error::InvalidArgument("at least one class representation is required".into()));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "attention temperature must be positive, got {temperature}"
        )));
    }
    embeddings.check_alignment(corpus)?;
    let dim = embeddings.dim();
    for c in class_reps {
        if c.vector.len() != dim {
            return Err(Error::DimensionMismatch(dim, c.vector.len()));
        }
    }
    let class_units: Vec<Vec<f64>> = class_reps.iter().map(|c| unit(&c.vector)).collect();

    Ok(corpus
        .par_iter()
        .zip(embeddings.sentences().par_iter())
        .map(|(sentence, matrix)| {
            let scores: Vec<f64> = matrix
                .iter_rows()
                .map(|row| {
                    let u = unit(row);
                    class_units
                        .iter()
                        .map(|c| dot(&u, c).clamp(-1.0, 1.0))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect();
            let weights = softmax(&scores, temperature);
            let mut vector = vec![0.0; dim];
            for (w, row) in weights.iter().zip(matrix.iter_rows()) {
                for (acc, x) in vector.iter_mut().zip(row) {
                    *acc += w * x;
                }
            }
            DocRep {
                sentence_id: sentence.id.clone(),
                vector,
                weights,
            }
        })
        .collect())
}
