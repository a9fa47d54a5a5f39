//! Multi-label generation from dependency pairs.
//!
//! Candidate (aspect word, sentiment word) pairs come from dependency edges
//! that touch a noun. Each pair's aspect word is scored against the aspect
//! classes and its sentiment word against the sentiment classes by cosine.
//! Pairs whose best aspect score clears the threshold become labels. When at
//! most one pair survives, the sentence keeps its clustering label instead.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus_io::{LabelTuple, SentenceMatrix, TokenizedSentence};
use crate::numerics::Assignment;
use crate::representation::{cosine_unchecked, ClassRep, Vocabulary};

pub const DEFAULT_THRESHOLD: f64 = 0.45;

/// Which dependency edges yield candidate pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairPolicy {
    /// Every noun paired with its governor: `(noun, governor)`.
    #[default]
    NounDependent,
    /// Every non-root edge with a noun at either end, oriented
    /// `(noun end, other end)`, or `(dependent, governor)` when both are nouns.
    AnyNounEndpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPair {
    /// Zero-based token index of the aspect-side word.
    pub aspect_index: usize,
    pub aspect_word: String,
    /// Zero-based token index of the sentiment-side word.
    pub sentiment_index: usize,
    pub sentiment_word: String,
}

fn is_noun(upos: &str) -> bool {
    upos == "NOUN"
}

/// Candidate pairs of a parsed sentence, in token order, without repeats.
pub fn extract_ppairs(sentence: &TokenizedSentence, policy: PairPolicy) -> Vec<PPair> {
    let mut pairs: Vec<PPair> = Vec::new();
    for (dep, tok) in sentence.tokens.iter().enumerate() {
        let Some(gov) = sentence.governor(dep) else {
            continue;
        };
        let gov_tok = &sentence.tokens[gov];
        let oriented = match (is_noun(&tok.upos), is_noun(&gov_tok.upos), policy) {
            (true, _, _) => Some((dep, gov)),
            (false, true, PairPolicy::AnyNounEndpoint) => Some((gov, dep)),
            _ => None,
        };
        if let Some((a, s)) = oriented {
            let pair = PPair {
                aspect_index: a,
                aspect_word: sentence.tokens[a].form.clone(),
                sentiment_index: s,
                sentiment_word: sentence.tokens[s].form.clone(),
            };
            if !pairs.contains(&pair) {
                pairs.push(pair);
            }
        }
    }
    pairs
}

/// Cosine of each word (row) against each class (column).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    pub rows: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    /// Best class and its score for row `i`; the lowest index wins ties.
    pub fn best(&self, i: usize) -> (usize, f64) {
        let row = &self.rows[i];
        let mut best = (0, row[0]);
        for (j, &s) in row.iter().enumerate().skip(1) {
            if s > best.1 {
                best = (j, s);
            }
        }
        best
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PairScores {
    pub aspect: SimilarityMatrix,
    pub sentiment: SimilarityMatrix,
}

/// Scores each pair's aspect word against aspect classes and its sentiment
/// word against sentiment classes.
///
/// Words are looked up by static vector; out-of-vocabulary words fall back to
/// their contextual token vector when `tokens` is given, and to a zero vector
/// (all scores 0) otherwise.
pub fn score_words(
    pairs: &[PPair],
    tokens: Option<&SentenceMatrix>,
    vocab: &Vocabulary,
    aspect_reps: &[ClassRep],
    sentiment_reps: &[ClassRep],
) -> PairScores {
    let lookup = |word: &str, index: usize| -> Vec<f64> {
        match (vocab.get(word), tokens) {
            (Some(e), _) => e.vector().to_vec(),
            (None, Some(m)) => m.row(index).to_vec(),
            (None, None) => vec![0.0; vocab.dim()],
        }
    };
    let score = |v: &[f64], reps: &[ClassRep]| -> Vec<f64> {
        reps.iter().map(|c| cosine_unchecked(v, &c.vector)).collect()
    };
    let mut scores = PairScores::default();
    for p in pairs {
        let a = lookup(&p.aspect_word, p.aspect_index);
        let s = lookup(&p.sentiment_word, p.sentiment_index);
        scores.aspect.rows.push(score(&a, aspect_reps));
        scores.sentiment.rows.push(score(&s, sentiment_reps));
    }
    scores
}

/// A pair that survived the aspect threshold, with its resolved classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FPPair {
    pub ppair: PPair,
    pub aspect_class: String,
    pub aspect_score: f64,
    pub sentiment_class: String,
    pub sentiment_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelDecision {
    pub labels: BTreeSet<LabelTuple>,
    pub fppairs: Vec<FPPair>,
    pub used_fallback: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub threshold: f64,
    /// Emit the label of a lone surviving pair instead of falling back.
    pub use_single_fppair: bool,
    pub pair_policy: PairPolicy,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            threshold: DEFAULT_THRESHOLD,
            use_single_fppair: false,
            pair_policy: PairPolicy::NounDependent,
        }
    }
}

/// Turns scored pairs into a label set.
///
/// A pair survives when its best aspect score is strictly above `threshold`.
/// Fewer than two survivors (fewer than one with `use_single_fppair`) yield
/// `{fallback}`.
pub fn generate_labels(
    ppairs: &[PPair],
    scores: &PairScores,
    aspect_classes: &[String],
    sentiment_classes: &[String],
    config: &GeneratorConfig,
    fallback: &LabelTuple,
) -> LabelDecision {
    let mut fppairs = Vec::new();
    if !aspect_classes.is_empty() && !sentiment_classes.is_empty() {
        for (i, p) in ppairs.iter().enumerate() {
            let (a, a_score) = scores.aspect.best(i);
            if a_score > config.threshold {
                let (s, s_score) = scores.sentiment.best(i);
                fppairs.push(FPPair {
                    ppair: p.clone(),
                    aspect_class: aspect_classes[a].clone(),
                    aspect_score: a_score,
                    sentiment_class: sentiment_classes[s].clone(),
                    sentiment_score: s_score,
                });
            }
        }
    }
    let needed = if config.use_single_fppair { 1 } else { 2 };
    if fppairs.len() < needed {
        return LabelDecision {
            labels: BTreeSet::from([fallback.clone()]),
            fppairs,
            used_fallback: true,
        };
    }
    LabelDecision {
        labels: fppairs
            .iter()
            .map(|f| LabelTuple::new(&f.aspect_class, &f.sentiment_class))
            .collect(),
        fppairs,
        used_fallback: false,
    }
}

/// Per-sentence debug output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SentenceDebug {
    pub id: String,
    pub ppairs: Vec<PPair>,
    pub fallback: LabelTuple,
    #[serde(flatten)]
    pub decision: LabelDecision,
}

/// Runs extraction, scoring and label generation for one sentence.
pub fn label_sentence(
    sentence: &TokenizedSentence,
    tokens: Option<&SentenceMatrix>,
    vocab: &Vocabulary,
    aspect_reps: &[ClassRep],
    sentiment_reps: &[ClassRep],
    config: &GeneratorConfig,
    fallback: &LabelTuple,
) -> SentenceDebug {
    let ppairs = extract_ppairs(sentence, config.pair_policy);
    let scores = score_words(&ppairs, tokens, vocab, aspect_reps, sentiment_reps);
    let names = |reps: &[ClassRep]| reps.iter().map(|c| c.class_name.clone()).collect::<Vec<_>>();
    let decision = generate_labels(
        &ppairs,
        &scores,
        &names(aspect_reps),
        &names(sentiment_reps),
        config,
        fallback,
    );
    SentenceDebug {
        id: sentence.id.clone(),
        ppairs,
        fallback: fallback.clone(),
        decision,
    }
}

/// The clustering label of sentence `k`: (aspect cluster, sentiment cluster).
pub fn fallback_label(
    k: usize,
    acd: &Assignment,
    sentiment: &Assignment,
    aspect_classes: &[String],
    sentiment_classes: &[String],
) -> LabelTuple {
    LabelTuple::new(
        &aspect_classes[acd.labels[k]],
        &sentiment_classes[sentiment.labels[k]],
    )
}
