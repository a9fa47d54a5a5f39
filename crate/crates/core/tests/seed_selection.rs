mod common;

use proptest::prelude::*;

use absa_core::representation::{VocabEntry, Vocabulary};
use absa_core::seed_selection::{
    acssa_select, select_from_similarities, AcssaInput, Candidate, OccurrenceMeasure,
};

use common::{checks, rng};

fn toy() -> (Vec<(String, String)>, Vec<Candidate>, Vec<Vec<f64>>) {
    let classes = vec![
        ("food".to_string(), "food".to_string()),
        ("service".to_string(), "service".to_string()),
    ];
    let candidates = [("pizza", 12), ("waiter", 8), ("table", 5)]
        .iter()
        .map(|(w, c)| Candidate {
            word: w.to_string(),
            count: *c,
        })
        .collect();
    // columns follow the candidate order: pizza, waiter, table
    let sims = vec![vec![0.9, 0.2, 0.4], vec![0.1, 0.85, 0.5]];
    (classes, candidates, sims)
}

#[test]
fn pizza_waiter_toy() {
    let (classes, candidates, sims) = toy();
    let (selected, trace) = select_from_similarities(&classes, &candidates, &sims, 2);
    assert_eq!(selected["food"], "pizza");
    assert_eq!(selected["service"], "waiter");
    let food = &trace[0];
    let source: Vec<&str> = food.source.iter().map(|r| r.word.as_str()).collect();
    assert_eq!(source, ["pizza", "table"]);
    assert_eq!(food.target, ["waiter", "table"]);
    assert_eq!(food.inter, ["pizza"]);
}

#[test]
fn single_class_takes_its_most_frequent_neighbour() {
    let (classes, candidates, sims) = toy();
    let (selected, trace) = select_from_similarities(&classes[..1], &candidates, &sims[..1], 2);
    assert!(trace[0].target.is_empty());
    assert_eq!(selected["food"], "pizza");
    let (selected, _) = select_from_similarities(&classes[..1], &candidates, &sims[..1], 3);
    assert_eq!(selected["food"], "pizza");
}

#[test]
fn empty_noun_filter_is_an_error() {
    let vocab = Vocabulary::from_entries(
        2,
        1,
        [("good".to_string(), VocabEntry::new(vec![1.0, 0.0], 3, "ADJ"))],
    )
    .unwrap();
    let classes = vec![("food".to_string(), "good".to_string())];
    let err = acssa_select(&AcssaInput {
        target_pos: "NOUN",
        vocab: &vocab,
        classes: &classes,
        top_t: 10,
        occurrence: OccurrenceMeasure::Tokens,
    })
    .unwrap_err();
    assert!(err.to_string().contains("NOUN"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_invariants(seed in any::<u64>()) {
        checks::acssa_trial(&mut rng(seed)).unwrap();
    }
}
