use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::corpus_io::{SeedConfig, StandaloneVectors, TokenEmbeddingStore, TokenizedSentence};
use crate::error::{Error, Result};
use crate::seed_selection::dominant_tag;

/// Mean of a word's contextual vectors over all of its corpus occurrences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StaticWordRep {
    pub vector: Vec<f64>,
    pub occurrence_count: usize,
}

/// Where a vocabulary entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryOrigin {
    /// Occurs at least `min_count` times.
    Corpus,
    /// A seed word that occurs in the corpus but fewer than `min_count` times.
    RetainedSeed,
    /// A seed word absent from the corpus, represented by a standalone vector.
    Injected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VocabEntry {
    pub rep: StaticWordRep,
    /// Number of sentences containing the word.
    pub sentence_freq: usize,
    /// UPOS tag counts over the word's occurrences.
    pub pos_counts: BTreeMap<String, usize>,
    /// Majority tag, see [`dominant_tag`].
    pub pos: String,
    pub origin: EntryOrigin,
}

impl VocabEntry {
    /// An entry for a word seen `count` times, all tagged `pos`.
    pub fn new(vector: Vec<f64>, count: usize, pos: &str) -> Self {
        VocabEntry {
            rep: StaticWordRep {
                vector,
                occurrence_count: count,
            },
            sentence_freq: count,
            pos_counts: BTreeMap::from([(pos.to_string(), count)]),
            pos: pos.to_string(),
            origin: EntryOrigin::Corpus,
        }
    }

    pub fn count(&self) -> usize {
        self.rep.occurrence_count
    }

    pub fn vector(&self) -> &[f64] {
        &self.rep.vector
    }

    pub fn is_injected(&self) -> bool {
        self.origin == EntryOrigin::Injected
    }
}

/// Case-folded word → static representation, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vocabulary {
    dim: usize,
    min_count: usize,
    entries: BTreeMap<String, VocabEntry>,
}

impl Vocabulary {
    /// Assembles a vocabulary from ready-made entries. Keys are lowercased.
    pub fn from_entries(
        dim: usize,
        min_count: usize,
        entries: impl IntoIterator<Item = (String, VocabEntry)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (word, entry) in entries {
            if entry.rep.vector.len() != dim {
                return Err(Error::DimensionMismatch(dim, entry.rep.vector.len()));
            }
            map.insert(word.to_lowercase(), entry);
        }
        Ok(Vocabulary {
            dim,
            min_count,
            entries: map,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&VocabEntry> {
        match self.entries.get(word) {
            Some(e) => Some(e),
            None => self.entries.get(&word.to_lowercase()),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    /// Static vector of `word`, or an error naming it.
    pub fn vector(&self, word: &str) -> Result<&[f64]> {
        self.get(word)
            .map(VocabEntry::vector)
            .ok_or_else(|| Error::NotInVocabulary(word.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &VocabEntry)> {
        self.entries.iter().map(|(w, e)| (w.as_str(), e))
    }
}

struct Accumulator {
    sum: Vec<f64>,
    count: usize,
    sentence_freq: usize,
    last_sentence: usize,
    pos_counts: BTreeMap<String, usize>,
}

/// Builds static word representations from token embeddings.
///
/// Every word's vector is the plain mean of its contextual vectors, summed in
/// corpus order so the result does not depend on scheduling. Words seen fewer
/// than `min_count` times are dropped unless they are seeds. Seeds that never
/// occur are injected from `standalone` with an occurrence count of 0.
pub fn build_vocabulary(
    corpus: &[TokenizedSentence],
    embeddings: &TokenEmbeddingStore,
    min_count: usize,
    seeds: &SeedConfig,
    standalone: &StandaloneVectors,
) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidArgument("min_count must be at least 1".into()));
    }
    embeddings.check_alignment(corpus)?;
    let dim = embeddings.dim();

    let mut acc: BTreeMap<String, Accumulator> = BTreeMap::new();
    for (k, (sentence, matrix)) in corpus.iter().zip(embeddings.sentences()).enumerate() {
        for (token, row) in sentence.tokens.iter().zip(matrix.iter_rows()) {
            let key = token.form.to_lowercase();
            let a = acc.entry(key).or_insert_with(|| Accumulator {
                sum: vec![0.0; dim],
                count: 0,
                sentence_freq: 0,
                last_sentence: usize::MAX,
                pos_counts: BTreeMap::new(),
            });
            for (s, x) in a.sum.iter_mut().zip(row) {
                *s += x;
            }
            a.count += 1;
            if a.last_sentence != k {
                a.sentence_freq += 1;
                a.last_sentence = k;
            }
            *a.pos_counts.entry(token.upos.clone()).or_insert(0) += 1;
        }
    }

    let seed_words: HashSet<String> = seeds.all_seed_words().into_iter().collect();
    let mut entries = BTreeMap::new();
    for (word, a) in acc {
        let is_seed = seed_words.contains(&word);
        if a.count < min_count && !is_seed {
            continue;
        }
        let origin = if a.count >= min_count {
            EntryOrigin::Corpus
        } else {
            EntryOrigin::RetainedSeed
        };
        let n = a.count as f64;
        let vector = a.sum.into_iter().map(|s| s / n).collect();
        let pos = dominant_tag(&a.pos_counts).unwrap_or("X").to_string();
        entries.insert(
            word,
            VocabEntry {
                rep: StaticWordRep {
                    vector,
                    occurrence_count: a.count,
                },
                sentence_freq: a.sentence_freq,
                pos_counts: a.pos_counts,
                pos,
                origin,
            },
        );
    }

    for seed in seeds.all_seed_words() {
        if entries.contains_key(&seed) {
            continue;
        }
        let standalone = standalone
            .get(&seed)
            .ok_or_else(|| Error::MissingSeedVector(seed.clone()))?;
        if standalone.vector.len() != dim {
            return Err(Error::DimensionMismatch(dim, standalone.vector.len()));
        }
        let pos = standalone.upos.clone().unwrap_or_else(|| "X".to_string());
        entries.insert(
            seed,
            VocabEntry {
                rep: StaticWordRep {
                    vector: standalone.vector.clone(),
                    occurrence_count: 0,
                },
                sentence_freq: 0,
                pos_counts: BTreeMap::new(),
                pos,
                origin: EntryOrigin::Injected,
            },
        );
    }

    Ok(Vocabulary {
        dim,
        min_count,
        entries,
    })
}
