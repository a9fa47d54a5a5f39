use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::representation::similarity::{cosine_unchecked, dot, mean_of, unit};
use crate::representation::Vocabulary;

/// Vector anchoring one aspect or sentiment class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRep {
    pub class_name: String,
    pub seed_word: String,
    /// Words averaged into `vector`; the seed comes first.
    pub expansion: Vec<String>,
    pub vector: Vec<f64>,
}

/// Unit-normalized copy of the vocabulary for repeated nearest-word scans.
pub(crate) struct UnitVocab<'a> {
    pub words: Vec<&'a str>,
    pub unit: Vec<Vec<f64>>,
}

impl<'a> UnitVocab<'a> {
    pub fn new(vocab: &'a Vocabulary) -> Self {
        let (words, unit) = vocab.iter().map(|(w, e)| (w, unit(e.vector()))).unzip();
        UnitVocab { words, unit }
    }

    /// Index of the word most similar to `query` among those not `excluded`.
    /// Equal scores resolve to the lexicographically smallest word.
    fn nearest(&self, query: &[f64], excluded: &[usize]) -> Option<(usize, f64)> {
        let q = unit(query);
        (0..self.words.len())
            .into_par_iter()
            .filter(|i| !excluded.contains(i))
            .map(|i| (i, dot(&self.unit[i], &q)))
            .reduce_with(|a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            })
    }
}

/// Expands one class from its seed word.
///
/// Starting from the seed's static vector, the word closest to the current
/// class vector is appended and the vector recomputed as the mean of all
/// expansion words. Growth stops at `max_expansion` words, or as soon as the
/// best candidate is at least as close to a rival class as to this one.
/// Rival classes are represented by the static vectors of the other seeds.
pub fn expand_class(
    class_name: &str,
    seed: &str,
    vocab: &Vocabulary,
    all_seeds: &[String],
    max_expansion: usize,
) -> Result<ClassRep> {
    let rivals: Vec<&[f64]> = all_seeds
        .iter()
        .filter(|s| s.as_str() != seed)
        .map(|s| vocab.vector(s))
        .collect::<Result<_>>()?;
    expand_with_rivals(class_name, seed, vocab, &UnitVocab::new(vocab), &rivals, max_expansion)
}

/// Expands every `(class, seed)` pair. The rivals of a class are all words of
/// `all_seeds` other than its own seed, so passing the seeds of both label
/// spaces keeps aspect classes from absorbing sentiment words and vice versa.
pub fn expand_classes(
    classes: &[(String, String)],
    vocab: &Vocabulary,
    all_seeds: &[String],
    max_expansion: usize,
) -> Result<Vec<ClassRep>> {
    let mut rival_words: Vec<String> = classes.iter().map(|(_, s)| s.to_lowercase()).collect();
    for s in all_seeds {
        let s = s.to_lowercase();
        if !rival_words.contains(&s) {
            rival_words.push(s);
        }
    }
    let seed_vectors: Vec<(&str, &[f64])> = rival_words
        .iter()
        .map(|w| Ok((w.as_str(), vocab.vector(w)?)))
        .collect::<Result<_>>()?;
    let unit_vocab = UnitVocab::new(vocab);
    classes
        .iter()
        .enumerate()
        .map(|(i, (name, seed))| {
            let rivals: Vec<&[f64]> = seed_vectors
                .iter()
                .enumerate()
                .filter(|(j, (w, _))| *j != i && *w != rival_words[i])
                .map(|(_, (_, v))| *v)
                .collect();
            expand_with_rivals(name, seed, vocab, &unit_vocab, &rivals, max_expansion)
        })
        .collect()
}

fn expand_with_rivals(
    class_name: &str,
    seed: &str,
    vocab: &Vocabulary,
    unit_vocab: &UnitVocab<'_>,
    rivals: &[&[f64]],
    max_expansion: usize,
) -> Result<ClassRep> {
    if max_expansion == 0 {
        return Err(Error::InvalidArgument("max_expansion must be at least 1".into()));
    }
    let seed = seed.to_lowercase();
    let seed_idx = unit_vocab
        .words
        .iter()
        .position(|w| *w == seed)
        .ok_or_else(|| Error::NotInVocabulary(seed.clone()))?;
    let dim = vocab.dim();
    let mut members = vec![seed_idx];
    let mut current = vocab.vector(&seed)?.to_vec();

    while members.len() < max_expansion {
        let Some((best, score)) = unit_vocab.nearest(&current, &members) else {
            break;
        };
        let candidate = vocab.vector(unit_vocab.words[best])?;
        let rival_best = rivals
            .iter()
            .map(|r| cosine_unchecked(candidate, r))
            .fold(f64::NEG_INFINITY, f64::max);
        if rival_best >= score {
            break;
        }
        members.push(best);
        current = mean_of(
            members
                .iter()
                .map(|&i| vocab.vector(unit_vocab.words[i]).unwrap()),
            dim,
        );
    }

    Ok(ClassRep {
        class_name: class_name.to_string(),
        seed_word: seed,
        expansion: members
            .iter()
            .map(|&i| unit_vocab.words[i].to_string())
            .collect(),
        vector: current,
    })
}
