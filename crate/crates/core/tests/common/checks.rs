//! One randomized trial per function. Each returns `Err` with a description on
//! the first violated property; callers decide how many trials to run.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use absa_core::corpus_io::{LabelTuple, SeedConfig, StandaloneVector, StandaloneVectors};
use absa_core::evaluation::evaluate;
use absa_core::multilabel::{generate_labels, GeneratorConfig, PPair, PairScores, SimilarityMatrix};
use absa_core::numerics::{gmm_fit, kmeans_fit, GmmParams, PcaModel};
use absa_core::representation::{build_vocabulary, EntryOrigin, VocabEntry, Vocabulary};
use absa_core::seed_selection::{acssa_select, AcssaInput, OccurrenceMeasure};

use super::{oracle_scores, oracle_static_reps, random_corpus, random_records};

type Check = Result<(), String>;

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize, k: usize) -> Vec<Vec<f64>> {
    let centers: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let spread = rng.random_range(0.2..3.0);
    let noise = Normal::new(0.0, spread).unwrap();
    (0..n)
        .map(|_| {
            let c = centers.choose(rng).unwrap();
            c.iter().map(|x| x + noise.sample(rng)).collect()
        })
        .collect()
}

fn random_init(rng: &mut ChaCha8Rng, data: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    data.choose_multiple(rng, k).cloned().collect()
}

/// Largest absolute deviation of a static vector from the brute-force mean.
pub fn static_rep_trial(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let dim = rng.random_range(1..6);
    let n = rng.random_range(1..12);
    let (corpus, store) = random_corpus(rng, n, dim);
    let seeds = SeedConfig::new(
        [("food".to_string(), "food".to_string())],
        [("positive".to_string(), "good".to_string())],
    );
    let standalone: StandaloneVectors = ["food", "good"]
        .iter()
        .map(|w| {
            (
                w.to_string(),
                StandaloneVector {
                    upos: None,
                    vector: vec![0.5; dim],
                },
            )
        })
        .collect();
    let vocab = build_vocabulary(&corpus, &store, 1, &seeds, &standalone).map_err(|e| e.to_string())?;
    let oracle = oracle_static_reps(&corpus, &store);
    let from_corpus: BTreeSet<&str> = vocab
        .iter()
        .filter(|(_, e)| e.origin != EntryOrigin::Injected)
        .map(|(w, _)| w)
        .collect();
    let expected: BTreeSet<&str> = oracle.keys().map(String::as_str).collect();
    if from_corpus != expected {
        return Err(format!("vocabulary {from_corpus:?} != oracle words {expected:?}"));
    }
    let mut worst: f64 = 0.0;
    for (w, (mean, count)) in &oracle {
        let e = vocab.get(w).unwrap();
        if e.count() != *count {
            return Err(format!("{w}: count {} != {count}", e.count()));
        }
        for (a, b) in e.vector().iter().zip(mean) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// EM log-likelihood never drops by more than `1e-9` relative.
pub fn gmm_monotone_trial(rng: &mut ChaCha8Rng) -> Check {
    let d = rng.random_range(1..6);
    let k = rng.random_range(1..5);
    let n = rng.random_range(k.max(10)..200);
    let data = random_points(rng, n, d, k);
    let init = random_init(rng, &data, k);
    let (model, _) = gmm_fit(&data, &init, &GmmParams::default()).map_err(|e| e.to_string())?;
    for w in model.objective_trace.windows(2) {
        if w[1] < w[0] - 1e-9 * w[0].abs().max(1.0) {
            return Err(format!("log-likelihood fell from {} to {} (n={n}, d={d}, k={k})", w[0], w[1]));
        }
    }
    Ok(())
}

/// Full-batch k-means inertia never increases between Lloyd steps.
pub fn lloyd_monotone_trial(rng: &mut ChaCha8Rng) -> Check {
    let d = rng.random_range(1..6);
    let k = rng.random_range(1..6);
    let n = rng.random_range(k.max(5)..200);
    let data = random_points(rng, n, d, k);
    let init = random_init(rng, &data, k);
    let (model, _) = kmeans_fit(&data, &init, 0, 100).map_err(|e| e.to_string())?;
    for w in model.objective_trace.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-12) + 1e-12 {
            return Err(format!("inertia rose from {} to {}", w[0], w[1]));
        }
    }
    Ok(())
}

/// Returns (orthonormality error, pairwise distance error) at full dimension.
pub fn pca_trial(rng: &mut ChaCha8Rng) -> Result<(f64, f64), String> {
    let d = rng.random_range(1..10);
    let n = rng.random_range(2..40);
    let data: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let model = PcaModel::fit(&data, d).map_err(|e| e.to_string())?;
    let c = &model.components;
    let mut orth: f64 = 0.0;
    for i in 0..c.len() {
        for j in 0..c.len() {
            let dot: f64 = c[i].iter().zip(&c[j]).map(|(a, b)| a * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((dot - target).abs());
        }
    }
    let reduced = model.transform(&data).map_err(|e| e.to_string())?;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((dist(&data[i], &data[j]) - dist(&reduced[i], &reduced[j])).abs());
        }
    }
    Ok((orth, worst))
}

fn cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Seed selection on a random vocabulary; the trace is checked against a
/// cosine oracle and the selection rules.
pub fn acssa_trial(rng: &mut ChaCha8Rng) -> Check {
    let dim = rng.random_range(2..6);
    let n_words = rng.random_range(3..40);
    let tags = ["NOUN", "NOUN", "ADJ", "VERB"];
    let mut entries: Vec<(String, VocabEntry)> = (0..n_words)
        .map(|i| {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let e = VocabEntry::new(v, rng.random_range(1..30), tags.choose(rng).unwrap());
            (format!("w{i:02}"), e)
        })
        .collect();
    entries[0].1.pos = "NOUN".into();
    entries[0].1.pos_counts = BTreeMap::from([("NOUN".to_string(), entries[0].1.count())]);
    let vocab = Vocabulary::from_entries(dim, 1, entries.clone()).map_err(|e| e.to_string())?;

    let n_classes = rng.random_range(1..5);
    let mut words: Vec<&String> = entries.iter().map(|(w, _)| w).collect();
    words.shuffle(rng);
    let classes: Vec<(String, String)> = (0..n_classes)
        .map(|i| (format!("c{i}"), words[i % words.len()].clone()))
        .collect();
    let top_t = rng.random_range(1..8);
    let (selected, trace) = acssa_select(&AcssaInput {
        target_pos: "NOUN",
        vocab: &vocab,
        classes: &classes,
        top_t,
        occurrence: OccurrenceMeasure::Tokens,
    })
    .map_err(|e| e.to_string())?;

    let nouns: Vec<(&str, &VocabEntry)> = vocab.iter().filter(|(_, e)| e.pos == "NOUN").collect();
    for (i, ct) in trace.classes.iter().enumerate() {
        let class_vec = vocab.get(&classes[i].1).unwrap().vector();
        // source is a genuine top-T by cosine
        if ct.source.len() != top_t.min(nouns.len()) {
            return Err(format!("{}: source has {} words", ct.class, ct.source.len()));
        }
        let floor = ct.source.iter().map(|r| r.cosine).fold(f64::INFINITY, f64::min);
        for (w, e) in &nouns {
            let in_source = ct.source.iter().any(|r| r.word == *w);
            if !in_source && cos(class_vec, e.vector()) > floor + 1e-12 {
                return Err(format!("{}: {w} outranks the source list", ct.class));
            }
        }
        // target is the union of the other classes' sources
        let others: BTreeSet<&str> = trace
            .classes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, o)| o.source.iter().map(|r| r.word.as_str()))
            .collect();
        let target: BTreeSet<&str> = ct.target.iter().map(String::as_str).collect();
        if target != others {
            return Err(format!("{}: target {target:?} != union {others:?}", ct.class));
        }
        if ct.inter.is_empty() {
            if !ct.fell_back || ct.selected != ct.original {
                return Err(format!("{}: empty inter without fallback", ct.class));
            }
        } else {
            if ct.fell_back || !ct.inter.contains(&ct.selected) {
                return Err(format!("{}: selected {} not in inter", ct.class, ct.selected));
            }
            if others.contains(ct.selected.as_str()) {
                return Err(format!("{}: selected {} in another top-T", ct.class, ct.selected));
            }
            let e = vocab.get(&ct.selected).unwrap();
            if e.pos != "NOUN" {
                return Err(format!("{}: selected {} is {}", ct.class, ct.selected, e.pos));
            }
            let top_count = ct.inter.iter().map(|w| vocab.get(w).unwrap().count()).max().unwrap();
            if e.count() != top_count {
                return Err(format!("{}: selected count {} < {top_count}", ct.class, e.count()));
            }
        }
        if selected[&ct.class] != ct.selected {
            return Err(format!("{}: map and trace disagree", ct.class));
        }
    }
    Ok(())
}

fn random_scores(rng: &mut ChaCha8Rng, n: usize, k: usize) -> SimilarityMatrix {
    SimilarityMatrix {
        rows: (0..n)
            .map(|_| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect(),
    }
}

struct LabelFixture {
    ppairs: Vec<PPair>,
    scores: PairScores,
    aspects: Vec<String>,
    sentiments: Vec<String>,
    fallback: LabelTuple,
}

fn label_fixture(rng: &mut ChaCha8Rng) -> LabelFixture {
    let n = rng.random_range(0..7);
    let a = rng.random_range(1..5);
    let s = rng.random_range(1..4);
    let aspects: Vec<String> = (0..a).map(|i| format!("a{i}")).collect();
    let sentiments: Vec<String> = (0..s).map(|i| format!("s{i}")).collect();
    let ppairs = (0..n)
        .map(|i| PPair {
            aspect_index: 2 * i,
            aspect_word: format!("n{i}"),
            sentiment_index: 2 * i + 1,
            sentiment_word: format!("j{i}"),
        })
        .collect();
    let scores = PairScores {
        aspect: random_scores(rng, n, a),
        sentiment: random_scores(rng, n, s),
    };
    let fallback = LabelTuple::new(aspects.choose(rng).unwrap(), sentiments.choose(rng).unwrap());
    LabelFixture {
        ppairs,
        scores,
        aspects,
        sentiments,
        fallback,
    }
}

/// Raising the threshold yields a subset of the labels, or the fallback.
pub fn threshold_monotone_trial(rng: &mut ChaCha8Rng) -> Check {
    let f = label_fixture(rng);
    let mut t = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    t.sort_by(f64::total_cmp);
    let run = |threshold: f64| {
        let config = GeneratorConfig {
            threshold,
            ..GeneratorConfig::default()
        };
        generate_labels(&f.ppairs, &f.scores, &f.aspects, &f.sentiments, &config, &f.fallback)
    };
    let low = run(t[0]);
    let high = run(t[1]);
    let only_fallback = high.labels.len() == 1 && high.labels.contains(&f.fallback);
    if !(high.labels.is_subset(&low.labels) || only_fallback) {
        return Err(format!(
            "threshold {} gave {:?}, threshold {} gave {:?}",
            t[0], low.labels, t[1], high.labels
        ));
    }
    Ok(())
}

/// At most one surviving pair means the clustering label; two or more never do.
pub fn fallback_trial(rng: &mut ChaCha8Rng) -> Check {
    let f = label_fixture(rng);
    let config = GeneratorConfig {
        threshold: rng.random_range(-1.0..1.0),
        ..GeneratorConfig::default()
    };
    let d = generate_labels(&f.ppairs, &f.scores, &f.aspects, &f.sentiments, &config, &f.fallback);
    let survivors = (0..f.ppairs.len())
        .filter(|&i| f.scores.aspect.rows[i].iter().cloned().fold(f64::NEG_INFINITY, f64::max) > config.threshold)
        .count();
    if d.fppairs.len() != survivors {
        return Err(format!("{} fppairs, oracle counts {survivors}", d.fppairs.len()));
    }
    if survivors <= 1 {
        if !d.used_fallback || d.labels != BTreeSet::from([f.fallback.clone()]) {
            return Err(format!("{survivors} survivors but labels {:?}", d.labels));
        }
    } else if d.used_fallback {
        return Err(format!("{survivors} survivors but fell back"));
    }
    Ok(())
}

/// Library metrics equal the brute-force confusion oracle exactly.
pub fn metrics_trial(rng: &mut ChaCha8Rng) -> Check {
    let aspects = ["ambience", "food", "price", "service"];
    let polarities = ["positive", "negative", "neutral"];
    let n = rng.random_range(1..12);
    let a = rng.random_range(1..=aspects.len());
    let gold = random_records(rng, n, &aspects[..a], &polarities);
    let pred = random_records(rng, n, &aspects, &polarities);
    let report = evaluate(&gold, &pred).map_err(|e| e.to_string())?;
    let oracle = oracle_scores(&gold, &pred);

    let acd: BTreeMap<String, (usize, usize, usize)> = report
        .acd_classes
        .iter()
        .map(|c| (c.class.clone(), (c.tp, c.fp, c.fn_)))
        .collect();
    if acd != oracle.acd {
        return Err(format!("ACD counts {acd:?} != {:?}", oracle.acd));
    }
    let acsa: BTreeMap<String, (usize, usize, usize)> = report
        .acsa_classes
        .iter()
        .filter(|c| c.in_macro)
        .map(|c| (c.class.clone(), (c.tp, c.fp, c.fn_)))
        .collect();
    let oracle_acsa: BTreeMap<String, (usize, usize, usize)> = oracle
        .acsa
        .iter()
        .map(|(t, c)| (format!("{}#{}", t.0, t.1), *c))
        .collect();
    if acsa != oracle_acsa {
        return Err(format!("ACSA counts {acsa:?} != {oracle_acsa:?}"));
    }
    if report.acd_f1_macro != oracle.acd_macro || report.acsa_f1_pn_macro != oracle.acsa_macro {
        return Err(format!(
            "macros ({}, {}) != oracle ({}, {})",
            report.acd_f1_macro, report.acsa_f1_pn_macro, oracle.acd_macro, oracle.acsa_macro
        ));
    }
    Ok(())
}
