//! Oracles and fixtures shared by the integration tests and the acceptance suite.
//! Oracles are deliberately naive re-derivations, not calls into the library.
#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use absa_core::corpus_io::{LabelTuple, PredictionRecord, Token, TokenEmbeddingStore, TokenizedSentence};
use absa_core::representation::{ClassRep, VocabEntry, Vocabulary};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const WORDS: [&str; 10] = [
    "food", "pizza", "service", "waiter", "good", "bad", "wait", "the", "was", "price",
];
const TAGS: [&str; 4] = ["NOUN", "ADJ", "VERB", "DET"];

/// A random parsed corpus with random token vectors. Forms vary in case so
/// that case folding is exercised.
pub fn random_corpus(
    rng: &mut ChaCha8Rng,
    n_sentences: usize,
    dim: usize,
) -> (Vec<TokenizedSentence>, TokenEmbeddingStore) {
    let mut corpus = Vec::new();
    let mut vectors = Vec::new();
    for k in 0..n_sentences {
        let len = rng.random_range(1..8);
        let tokens: Vec<Token> = (0..len)
            .map(|i| {
                let mut form = WORDS.choose(rng).unwrap().to_string();
                if rng.random_bool(0.2) {
                    form = form.to_uppercase();
                }
                let head = if i == 0 { 0 } else { 1 };
                Token::new(form, *TAGS.choose(rng).unwrap(), head)
            })
            .collect();
        let rows: Vec<Vec<f64>> = (0..len)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        corpus.push(TokenizedSentence {
            id: format!("r{k}"),
            text: String::new(),
            tokens,
        });
        vectors.push(rows);
    }
    let store = TokenEmbeddingStore::from_nested(dim, &vectors).unwrap();
    (corpus, store)
}

/// Brute force: for every distinct case-folded word, rescan the whole corpus
/// and average its occurrence vectors.
pub fn oracle_static_reps(
    corpus: &[TokenizedSentence],
    store: &TokenEmbeddingStore,
) -> BTreeMap<String, (Vec<f64>, usize)> {
    let words: BTreeSet<String> = corpus
        .iter()
        .flat_map(|s| s.tokens.iter().map(|t| t.form.to_lowercase()))
        .collect();
    let mut out = BTreeMap::new();
    for w in words {
        let mut sum = vec![0.0; store.dim()];
        let mut n = 0usize;
        for (k, s) in corpus.iter().enumerate() {
            for (i, t) in s.tokens.iter().enumerate() {
                if t.form.to_lowercase() == w {
                    for (d, x) in sum.iter_mut().enumerate() {
                        *x += store.sentence(k).row(i)[d];
                    }
                    n += 1;
                }
            }
        }
        let mean = sum.iter().map(|x| x / n as f64).collect();
        out.insert(w, (mean, n));
    }
    out
}

pub fn basis(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn combo(dim: usize, parts: &[(usize, f64)]) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &(i, a) in parts {
        v[i] += a;
    }
    v
}

/// "The food was good, but it's not worth the wait or the lousy service",
/// parsed with food→good, wait→worth, service→wait among its edges.
pub fn example_sentence() -> TokenizedSentence {
    let t = |f: &str, u: &str, h: usize| Token::new(f, u, h);
    TokenizedSentence {
        id: "example".into(),
        text: "The food was good, but it's not worth the wait or the lousy service".into(),
        tokens: vec![
            t("The", "DET", 2),
            t("food", "NOUN", 4),
            t("was", "AUX", 4),
            t("good", "ADJ", 0),
            t(",", "PUNCT", 10),
            t("but", "CCONJ", 10),
            t("it", "PRON", 10),
            t("'s", "AUX", 10),
            t("not", "PART", 10),
            t("worth", "ADJ", 4),
            t("the", "DET", 12),
            t("wait", "NOUN", 10),
            t("or", "CCONJ", 16),
            t("the", "DET", 16),
            t("lousy", "ADJ", 16),
            t("service", "NOUN", 12),
        ],
    }
}

/// Engineered static vectors in 8 dimensions. Axes: 0 food, 1 service,
/// 2 positive, 3 negative, 4 price, 5-7 filler. Cosines to the class axes:
/// food→food .9, service→service .8, wait→service .3 and wait→negative .5,
/// good→positive .95, worth→positive .7.
pub fn example_model() -> (Vocabulary, Vec<ClassRep>, Vec<ClassRep>) {
    const D: usize = 8;
    let fill = |a: f64| (1.0 - a * a).sqrt();
    let words: Vec<(&str, Vec<f64>, &str)> = vec![
        ("food", combo(D, &[(0, 0.9), (5, fill(0.9))]), "NOUN"),
        ("service", combo(D, &[(1, 0.8), (5, fill(0.8))]), "NOUN"),
        (
            "wait",
            combo(D, &[(1, 0.3), (3, 0.5), (7, (1.0f64 - 0.09 - 0.25).sqrt())]),
            "NOUN",
        ),
        ("good", combo(D, &[(2, 0.95), (6, fill(0.95))]), "ADJ"),
        ("worth", combo(D, &[(2, 0.7), (6, fill(0.7))]), "ADJ"),
        ("lousy", combo(D, &[(3, 0.9), (6, fill(0.9))]), "ADJ"),
    ];
    let vocab = Vocabulary::from_entries(
        D,
        1,
        words
            .into_iter()
            .map(|(w, v, pos)| (w.to_string(), VocabEntry::new(v, 3, pos))),
    )
    .unwrap();
    let rep = |name: &str, axis: usize| ClassRep {
        class_name: name.into(),
        seed_word: name.into(),
        expansion: vec![name.into()],
        vector: basis(D, axis),
    };
    (
        vocab,
        vec![rep("food", 0), rep("service", 1), rep("price", 4)],
        vec![rep("positive", 2), rep("negative", 3)],
    )
}

pub fn random_records(
    rng: &mut ChaCha8Rng,
    n: usize,
    aspects: &[&str],
    polarities: &[&str],
) -> Vec<PredictionRecord> {
    (0..n)
        .map(|k| {
            let m = rng.random_range(1..4);
            let labels: Vec<LabelTuple> = (0..m)
                .map(|_| {
                    LabelTuple::new(*aspects.choose(rng).unwrap(), *polarities.choose(rng).unwrap())
                })
                .collect();
            PredictionRecord::new(format!("s{k}"), labels)
        })
        .collect()
}

/// (tp, fp, fn) for one class, by literally checking every sentence.
fn confusion<F: Fn(&PredictionRecord) -> bool>(
    gold: &[PredictionRecord],
    pred: &[PredictionRecord],
    has: F,
) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for g in gold {
        let p = pred.iter().find(|p| p.id == g.id).unwrap();
        match (has(g), has(p)) {
            (true, true) => c.0 += 1,
            (false, true) => c.1 += 1,
            (true, false) => c.2 += 1,
            (false, false) => {}
        }
    }
    c
}

fn f1_of((tp, fp, fn_): (usize, usize, usize)) -> f64 {
    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub struct OracleScores {
    pub acd: BTreeMap<String, (usize, usize, usize)>,
    pub acsa: BTreeMap<LabelTuple, (usize, usize, usize)>,
    pub acd_macro: f64,
    pub acsa_macro: f64,
}

/// ACD: every aspect class in gold or predictions. ACSA: every
/// (aspect, positive|negative) tuple that occurs in gold.
pub fn oracle_scores(gold: &[PredictionRecord], pred: &[PredictionRecord]) -> OracleScores {
    let all = gold.iter().chain(pred);
    let aspects: BTreeSet<String> = all
        .clone()
        .flat_map(|r| r.labels.iter().map(|l| l.0.clone()))
        .collect();
    let pn = |l: &LabelTuple| l.1 == "positive" || l.1 == "negative";
    let gold_tuples: BTreeSet<LabelTuple> = gold
        .iter()
        .flat_map(|r| r.labels.iter().filter(|l| pn(l)).cloned())
        .collect();

    let mut acd = BTreeMap::new();
    for a in &aspects {
        acd.insert(a.clone(), confusion(gold, pred, |r| r.labels.iter().any(|l| &l.0 == a)));
    }
    let mut acsa = BTreeMap::new();
    for t in &gold_tuples {
        acsa.insert(t.clone(), confusion(gold, pred, |r| r.labels.contains(t)));
    }
    let mean = |xs: Vec<f64>| {
        if xs.is_empty() {
            0.0
        } else {
            xs.iter().sum::<f64>() / xs.len() as f64
        }
    };
    OracleScores {
        acd_macro: mean(acd.values().map(|&c| f1_of(c)).collect()),
        acsa_macro: mean(acsa.values().map(|&c| f1_of(c)).collect()),
        acd,
        acsa,
    }
}

/// Two-sided p-value of Student's t by composite Simpson integration of the
/// density from |t| outwards, with the tail mapped onto a finite interval by
/// x = |t| + u / (1 - u).
pub fn student_t_p_value(t: f64, df: f64) -> f64 {
    let ln_gamma = |x: f64| -> f64 {
        // Lanczos, g = 7
        const C: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let x = x - 1.0;
        let mut a = C[0];
        let tt = x + 7.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * tt.ln() - tt + a.ln()
    };
    let log_norm = ln_gamma((df + 1.0) / 2.0)
        - ln_gamma(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln();
    let density = |x: f64| (log_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp();
    let a = t.abs();
    let g = |u: f64| {
        if u >= 1.0 {
            // the density times x^2 tends to norm * df for df = 1 and to 0 above
            if df == 1.0 {
                log_norm.exp()
            } else {
                0.0
            }
        } else {
            let x = a + u / (1.0 - u);
            density(x) / ((1.0 - u) * (1.0 - u))
        }
    };
    let n = 200_000;
    let h = 1.0 / n as f64;
    let mut s = g(0.0) + g(1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(i as f64 * h);
    }
    2.0 * s * h / 3.0
}
