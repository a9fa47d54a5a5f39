use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus_io::{LabelTuple, PredictionRecord};
use crate::error::{Error, Result};

/// Polarities scored by the PN macro average.
pub const PN_POLARITIES: [&str; 2] = ["positive", "negative"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub class: String,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Whether this class enters the macro average.
    pub in_macro: bool,
}

impl ClassScores {
    fn from_counts(class: String, tp: usize, fp: usize, fn_: usize, in_macro: bool) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassScores {
            class,
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
            in_macro,
        }
    }
}

/// End-to-end scores for one prediction file against gold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n_sentences: usize,
    /// Macro F1 over every aspect class seen in gold or predictions.
    pub acd_f1_macro: f64,
    /// Macro F1 over the (aspect, positive|negative) tuples present in gold.
    pub acsa_f1_pn_macro: f64,
    pub acd_classes: Vec<ClassScores>,
    /// Tuple classes are keyed `"aspect#polarity"`.
    pub acsa_classes: Vec<ClassScores>,
}

#[derive(Default)]
struct Counts {
    tp: usize,
    fp: usize,
    fn_: usize,
}

fn tally<T: Ord + Clone>(counts: &mut BTreeMap<T, Counts>, gold: &BTreeSet<T>, pred: &BTreeSet<T>) {
    for c in gold.union(pred) {
        let e = counts.entry(c.clone()).or_default();
        match (gold.contains(c), pred.contains(c)) {
            (true, true) => e.tp += 1,
            (false, true) => e.fp += 1,
            (true, false) => e.fn_ += 1,
            (false, false) => unreachable!(),
        }
    }
}

fn macro_f1(classes: &[ClassScores]) -> f64 {
    let used: Vec<f64> = classes.iter().filter(|c| c.in_macro).map(|c| c.f1).collect();
    if used.is_empty() {
        0.0
    } else {
        used.iter().sum::<f64>() / used.len() as f64
    }
}

fn is_pn(label: &LabelTuple) -> bool {
    PN_POLARITIES.contains(&label.sentiment())
}

/// Scores predictions against gold with set-based per-class counting.
///
/// For each sentence and class, a class in both label sets is a true positive,
/// one only predicted a false positive, one only in gold a false negative.
/// ACD looks at aspect sets; ACSA looks at exact tuples restricted to
/// positive/negative polarity, so neutral gold tuples are ignored.
pub fn evaluate(gold: &[PredictionRecord], pred: &[PredictionRecord]) -> Result<MetricsReport> {
    fn index(records: &[PredictionRecord]) -> Result<HashMap<&str, &PredictionRecord>> {
        let mut map = HashMap::with_capacity(records.len());
        for r in records {
            if map.insert(r.id.as_str(), r).is_some() {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(map)
    }
    let gold_by_id = index(gold)?;
    let pred_by_id = index(pred)?;
    let mut only_gold: Vec<String> = gold_by_id
        .keys()
        .filter(|id| !pred_by_id.contains_key(*id))
        .map(|s| s.to_string())
        .collect();
    let mut only_pred: Vec<String> = pred_by_id
        .keys()
        .filter(|id| !gold_by_id.contains_key(*id))
        .map(|s| s.to_string())
        .collect();
    if !only_gold.is_empty() || !only_pred.is_empty() {
        only_gold.sort();
        only_pred.sort();
        return Err(Error::IdMismatch {
            only_gold,
            only_pred,
        });
    }

    let mut acd: BTreeMap<String, Counts> = BTreeMap::new();
    let mut acsa: BTreeMap<LabelTuple, Counts> = BTreeMap::new();
    let mut gold_tuples: BTreeSet<LabelTuple> = BTreeSet::new();
    for g in gold {
        let p = pred_by_id[g.id.as_str()];
        if p.labels.is_empty() {
            return Err(Error::InvalidLabels {
                id: p.id.clone(),
                message: "prediction has no labels".into(),
            });
        }
        let aspects = |r: &PredictionRecord| -> BTreeSet<String> {
            r.labels.iter().map(|l| l.aspect().to_string()).collect()
        };
        tally(&mut acd, &aspects(g), &aspects(p));

        let pn = |r: &PredictionRecord| -> BTreeSet<LabelTuple> {
            r.labels.iter().filter(|l| is_pn(l)).cloned().collect()
        };
        let gold_pn = pn(g);
        gold_tuples.extend(gold_pn.iter().cloned());
        tally(&mut acsa, &gold_pn, &pn(p));
    }

    let acd_classes: Vec<ClassScores> = acd
        .into_iter()
        .map(|(c, n)| ClassScores::from_counts(c, n.tp, n.fp, n.fn_, true))
        .collect();
    let acsa_classes: Vec<ClassScores> = acsa
        .into_iter()
        .map(|(t, n)| {
            let in_gold = gold_tuples.contains(&t);
            ClassScores::from_counts(
                format!("{}#{}", t.aspect(), t.sentiment()),
                n.tp,
                n.fp,
                n.fn_,
                in_gold,
            )
        })
        .collect();

    Ok(MetricsReport {
        n_sentences: gold.len(),
        acd_f1_macro: macro_f1(&acd_classes),
        acsa_f1_pn_macro: macro_f1(&acsa_classes),
        acd_classes,
        acsa_classes,
    })
}

/// Renders a comparison grid, one row per named report, scores in percent.
pub fn format_table(rows: &[(String, MetricsReport)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<width$} | {:>8} | {:>8}\n", "method", "ACD", "ACSA");
    out.push_str(&format!("{}-+-{}-+-{}\n", "-".repeat(width), "-".repeat(8), "-".repeat(8)));
    for (name, r) in rows {
        out.push_str(&format!(
            "{:<width$} | {:>8.2} | {:>8.2}\n",
            name,
            100.0 * r.acd_f1_macro,
            100.0 * r.acsa_f1_pn_macro
        ));
    }
    out
}
