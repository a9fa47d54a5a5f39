//! End-to-end scoring: ACD macro F1, ACSA positive/negative macro F1, and a
//! paired t-test for comparing systems across datasets.

mod metrics;
mod ttest;

pub use metrics::{evaluate, format_table, ClassScores, MetricsReport, PN_POLARITIES};
pub use ttest::{paired_t_test, TTestResult};
