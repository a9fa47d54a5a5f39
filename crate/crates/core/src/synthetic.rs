//! Seeded synthetic restaurant-review fixtures.
//!
//! Sentences follow two parsed templates:
//!
//! * `the <noun> was <adj>`
//! * `the <noun> was <adj> and the <noun> was <adj>`
//!
//! Every aspect class and every sentiment class owns one basis direction of the
//! embedding space; words sit near their class direction and each token adds
//! isotropic noise. Gold labels follow the words that were drawn.

use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::corpus_io::{
    write_corpus, write_embeddings, write_records, write_seeds, LabelTuple, PredictionRecord,
    SeedConfig, Token, TokenEmbeddingStore, TokenizedSentence,
};
use crate::error::{Error, Result};

/// `(class, seed word, member words)`.
pub const ASPECTS: [(&str, &str, [&str; 4]); 3] = [
    ("food", "food", ["pizza", "pasta", "sushi", "dessert"]),
    ("service", "service", ["waiter", "staff", "waitress", "host"]),
    ("price", "price", ["bill", "cost", "check", "deal"]),
];

pub const SENTIMENTS: [(&str, &str, [&str; 4]); 2] = [
    ("positive", "good", ["great", "excellent", "lovely", "fine"]),
    ("negative", "bad", ["awful", "terrible", "rude", "poor"]),
];

const FUNCTION_WORDS: [&str; 3] = ["the", "was", "and"];

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub n_sentences: usize,
    /// Share of sentences using the two-clause template.
    pub multi_fraction: f64,
    pub dim: usize,
    /// Spread of each word around its class direction.
    pub word_spread: f64,
    /// Per-token noise standard deviation.
    pub token_noise: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_sentences: 300,
            multi_fraction: 0.3,
            dim: 16,
            word_spread: 0.3,
            token_noise: 0.1,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticData {
    pub corpus: Vec<TokenizedSentence>,
    pub embeddings: TokenEmbeddingStore,
    pub seeds: SeedConfig,
    pub gold: Vec<PredictionRecord>,
}

fn basis(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize, sd: f64) -> Vec<f64> {
    (0..dim).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

struct Lexicon {
    words: Vec<(String, Vec<f64>)>,
}

impl Lexicon {
    fn vector(&self, word: &str) -> &[f64] {
        &self.words.iter().find(|(w, _)| w == word).unwrap().1
    }
}

pub fn generate(config: &SyntheticConfig) -> Result<SyntheticData> {
    let directions = ASPECTS.len() + SENTIMENTS.len() + 1;
    if config.dim < directions {
        return Err(Error::InvalidArgument(format!(
            "synthetic data needs dim >= {directions}, got {}",
            config.dim
        )));
    }
    if config.n_sentences == 0 {
        return Err(Error::InvalidArgument("n_sentences must be positive".into()));
    }
    let dim = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut words = Vec::new();
    let mut add = |rng: &mut ChaCha8Rng, word: &str, axis: usize| {
        let offset = gaussian(rng, dim, config.word_spread / (dim as f64).sqrt());
        let v: Vec<f64> = basis(dim, axis).iter().zip(&offset).map(|(b, o)| b + o).collect();
        words.push((word.to_string(), v));
    };
    for (i, (_, seed, members)) in ASPECTS.iter().enumerate() {
        for w in std::iter::once(seed).chain(members) {
            add(&mut rng, w, i);
        }
    }
    for (j, (_, seed, members)) in SENTIMENTS.iter().enumerate() {
        for w in std::iter::once(seed).chain(members) {
            add(&mut rng, w, ASPECTS.len() + j);
        }
    }
    for w in FUNCTION_WORDS {
        add(&mut rng, w, directions - 1);
    }
    let lexicon = Lexicon { words };

    let mut corpus = Vec::with_capacity(config.n_sentences);
    let mut vectors = Vec::with_capacity(config.n_sentences);
    let mut gold = Vec::with_capacity(config.n_sentences);
    for k in 0..config.n_sentences {
        let clauses = if rng.random::<f64>() < config.multi_fraction { 2 } else { 1 };
        let mut tokens = Vec::new();
        let mut labels = Vec::new();
        let mut first_adj = 0;
        for c in 0..clauses {
            let (aspect, aseed, amembers) = ASPECTS.choose(&mut rng).unwrap();
            let (polarity, sseed, smembers) = SENTIMENTS.choose(&mut rng).unwrap();
            let noun = *std::iter::once(aseed).chain(amembers).collect::<Vec<_>>().choose(&mut rng).unwrap();
            let adj = *std::iter::once(sseed).chain(smembers).collect::<Vec<_>>().choose(&mut rng).unwrap();
            labels.push(LabelTuple::new(*aspect, *polarity));

            let base = tokens.len();
            if c == 1 {
                tokens.push(Token::new("and", "CCONJ", base + 5));
            }
            let start = tokens.len();
            // heads are one-based; the adjective of the first clause is the root
            let adj_pos = start + 4;
            tokens.push(Token::new("the", "DET", start + 2));
            tokens.push(Token::new(*noun, "NOUN", adj_pos));
            tokens.push(Token::new("was", "AUX", adj_pos));
            let head = if c == 0 { 0 } else { first_adj };
            tokens.push(Token::new(*adj, "ADJ", head));
            if c == 0 {
                first_adj = adj_pos;
            }
        }
        let text = tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" ");
        let rows: Vec<Vec<f64>> = tokens
            .iter()
            .map(|t| {
                lexicon
                    .vector(&t.form)
                    .iter()
                    .zip(gaussian(&mut rng, dim, config.token_noise / (dim as f64).sqrt()))
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        let sentence = TokenizedSentence {
            id: format!("syn-{k:05}"),
            text,
            tokens,
        };
        sentence.validate()?;
        corpus.push(sentence);
        vectors.push(rows);
        gold.push(PredictionRecord::new(format!("syn-{k:05}"), labels));
    }

    let seeds = SeedConfig::new(
        ASPECTS.iter().map(|(c, s, _)| (c.to_string(), s.to_string())),
        SENTIMENTS.iter().map(|(c, s, _)| (c.to_string(), s.to_string())),
    );
    Ok(SyntheticData {
        corpus,
        embeddings: TokenEmbeddingStore::from_nested(dim, &vectors)?,
        seeds,
        gold,
    })
}

impl SyntheticData {
    /// Writes `corpus.jsonl`, `embeddings.axeb`, `seeds.json` and `gold.jsonl`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_corpus(dir.join("corpus.jsonl"), &self.corpus)?;
        write_embeddings(dir.join("embeddings.axeb"), &self.embeddings)?;
        write_seeds(dir.join("seeds.json"), &self.seeds)?;
        write_records(dir.join("gold.jsonl"), &self.gold)
    }
}
