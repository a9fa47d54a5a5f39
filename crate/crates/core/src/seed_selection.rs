//! Automatic class-representative word selection.
//!
//! Replaces each class's seed word with a frequent, corpus-grounded word of a
//! given part of speech that is close to the class and to no other class.
//!
//! For every class `i`:
//!
//! 1. `uV` holds the vocabulary words whose dominant tag is the target tag;
//! 2. each class ranks all of `uV` by cosine against its class vector;
//! 3. `sourceL` is class `i`'s top-T, `targetL` the union of every other
//!    class's top-T, and `interL = sourceL \ targetL` in rank order;
//! 4. `goalL` is `interL` sorted by occurrence count (descending; ties go to
//!    the higher cosine, then to the lexicographically smaller word);
//! 5. the first `goalL` word is selected. An empty `interL` keeps the
//!    original seed word and flags the class.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus_io::TokenizedSentence;
use crate::error::{Error, Result};
use crate::representation::{cosine_unchecked, Vocabulary};

pub const DEFAULT_TOP_T: usize = 10;

fn tag_priority(tag: &str) -> u8 {
    match tag {
        "NOUN" => 0,
        "VERB" => 1,
        "ADJ" => 2,
        _ => 3,
    }
}

/// Majority tag from a tag histogram.
///
/// Ties prefer NOUN, then VERB, then ADJ, then the alphabetically first tag.
pub fn dominant_tag(counts: &BTreeMap<String, usize>) -> Option<&str> {
    counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .min_by(|(ta, na), (tb, nb)| {
            nb.cmp(na)
                .then_with(|| tag_priority(ta).cmp(&tag_priority(tb)))
                .then_with(|| ta.cmp(tb))
        })
        .map(|(t, _)| t.as_str())
}

/// Dominant UPOS of `word` (case-folded) over its corpus occurrences.
pub fn dominant_pos(word: &str, corpus: &[TokenizedSentence]) -> Option<String> {
    let word = word.to_lowercase();
    let mut counts = BTreeMap::new();
    for tok in corpus.iter().flat_map(|s| &s.tokens) {
        if tok.form.to_lowercase() == word {
            *counts.entry(tok.upos.clone()).or_insert(0) += 1;
        }
    }
    dominant_tag(&counts).map(str::to_string)
}

/// Which occurrence figure ranks the candidate list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccurrenceMeasure {
    /// Total token occurrences.
    #[default]
    Tokens,
    /// Number of sentences containing the word.
    Sentences,
}

pub struct AcssaInput<'a> {
    /// UPOS the selected words must carry (NOUN for aspects, ADJ for sentiments).
    pub target_pos: &'a str,
    pub vocab: &'a Vocabulary,
    /// `(class name, current seed word)` in class order.
    pub classes: &'a [(String, String)],
    pub top_t: usize,
    pub occurrence: OccurrenceMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedWord {
    pub word: String,
    pub cosine: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassTrace {
    pub class: String,
    pub original: String,
    pub uv_size: usize,
    pub source: Vec<RankedWord>,
    pub target: Vec<String>,
    pub inter: Vec<String>,
    pub goal: Vec<RankedWord>,
    pub selected: String,
    pub fell_back: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcssaTrace {
    pub target_pos: String,
    pub top_t: usize,
    pub occurrence: OccurrenceMeasure,
    pub classes: Vec<ClassTrace>,
}

/// A candidate word with its occurrence figure.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub word: String,
    pub count: usize,
}

/// Runs the selection on the vocabulary.
///
/// Injected words (absent from the corpus) never enter the candidate list.
pub fn acssa_select(input: &AcssaInput<'_>) -> Result<(IndexMap<String, String>, AcssaTrace)> {
    if input.top_t == 0 {
        return Err(Error::InvalidArgument("top_t must be at least 1".into()));
    }
    let class_vectors: Vec<&[f64]> = input
        .classes
        .iter()
        .map(|(_, seed)| input.vocab.vector(seed))
        .collect::<Result<_>>()?;

    let (candidates, vectors): (Vec<Candidate>, Vec<&[f64]>) = input
        .vocab
        .iter()
        .filter(|(_, e)| e.pos == input.target_pos && !e.is_injected())
        .map(|(w, e)| {
            let count = match input.occurrence {
                OccurrenceMeasure::Tokens => e.count(),
                OccurrenceMeasure::Sentences => e.sentence_freq,
            };
            (
                Candidate {
                    word: w.to_string(),
                    count,
                },
                e.vector(),
            )
        })
        .unzip();
    if candidates.is_empty() {
        return Err(Error::EmptyPosFilter(input.target_pos.to_string()));
    }

    let similarities: Vec<Vec<f64>> = class_vectors
        .iter()
        .map(|c| vectors.iter().map(|v| cosine_unchecked(c, v)).collect())
        .collect();

    let (selected, classes) =
        select_from_similarities(input.classes, &candidates, &similarities, input.top_t);
    Ok((
        selected,
        AcssaTrace {
            target_pos: input.target_pos.to_string(),
            top_t: input.top_t,
            occurrence: input.occurrence,
            classes,
        },
    ))
}

/// Selection core over precomputed similarities.
///
/// `similarities[i][k]` is the cosine between class `i` and `candidates[k]`.
pub fn select_from_similarities(
    classes: &[(String, String)],
    candidates: &[Candidate],
    similarities: &[Vec<f64>],
    top_t: usize,
) -> (IndexMap<String, String>, Vec<ClassTrace>) {
    // Every class's full ranking is built before any class is processed.
    let ranked: Vec<Vec<usize>> = similarities
        .iter()
        .map(|sims| {
            let mut order: Vec<usize> = (0..candidates.len()).collect();
            order.sort_by(|&a, &b| {
                sims[b]
                    .partial_cmp(&sims[a])
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| candidates[a].word.cmp(&candidates[b].word))
            });
            order.truncate(top_t);
            order
        })
        .collect();

    let mut selected = IndexMap::new();
    let mut traces = Vec::with_capacity(classes.len());
    for (i, (class, original)) in classes.iter().enumerate() {
        let sims = &similarities[i];
        let ranked_word = |k: usize| RankedWord {
            word: candidates[k].word.clone(),
            cosine: sims[k],
            count: candidates[k].count,
        };

        let mut target_idx: Vec<usize> = Vec::new();
        for (j, top) in ranked.iter().enumerate() {
            if j != i {
                for &k in top {
                    if !target_idx.contains(&k) {
                        target_idx.push(k);
                    }
                }
            }
        }
        let target_set: HashSet<usize> = target_idx.iter().copied().collect();
        let inter: Vec<usize> = ranked[i]
            .iter()
            .copied()
            .filter(|k| !target_set.contains(k))
            .collect();

        let mut goal = inter.clone();
        goal.sort_by(|&a, &b| {
            candidates[b]
                .count
                .cmp(&candidates[a].count)
                .then_with(|| sims[b].partial_cmp(&sims[a]).unwrap_or(Ordering::Equal))
                .then_with(|| candidates[a].word.cmp(&candidates[b].word))
        });

        let (word, fell_back) = match goal.first() {
            Some(&k) => (candidates[k].word.clone(), false),
            None => (original.clone(), true),
        };
        selected.insert(class.clone(), word.clone());
        traces.push(ClassTrace {
            class: class.clone(),
            original: original.clone(),
            uv_size: candidates.len(),
            source: ranked[i].iter().map(|&k| ranked_word(k)).collect(),
            target: target_idx
                .iter()
                .map(|&k| candidates[k].word.clone())
                .collect(),
            inter: inter.iter().map(|&k| candidates[k].word.clone()).collect(),
            goal: goal.iter().map(|&k| ranked_word(k)).collect(),
            selected: word,
            fell_back,
        });
    }
    (selected, traces)
}
