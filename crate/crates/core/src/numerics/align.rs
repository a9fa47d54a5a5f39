use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    gmm_fit, kmeans_fit, minibatch_kmeans, pca_fit_transform, Assignment, ClusterKind,
    ClusterModel, GmmParams, MiniBatchParams, PcaModel,
};
use crate::representation::{ClassRep, DocRep};

pub const DEFAULT_PCA_DIM: usize = 64;
pub const DEFAULT_BATCH_SIZE: usize = 400;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Aspect category detection.
    Acd,
    /// Sentiment polarity.
    Sentiment,
}

/// Settings for document-class alignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlignConfig {
    pub acd_algorithm: ClusterKind,
    pub sentiment_algorithm: ClusterKind,
    pub pca_dim: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
    pub reg_covar: f64,
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig {
            acd_algorithm: ClusterKind::MiniBatchKmeans,
            sentiment_algorithm: ClusterKind::Gmm,
            pca_dim: DEFAULT_PCA_DIM,
            batch_size: DEFAULT_BATCH_SIZE,
            seed: DEFAULT_SEED,
            max_iters: 100,
            tol: 1e-6,
            reg_covar: 1e-6,
        }
    }
}

impl AlignConfig {
    pub fn algorithm(&self, task: Task) -> ClusterKind {
        match task {
            Task::Acd => self.acd_algorithm,
            Task::Sentiment => self.sentiment_algorithm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alignment {
    pub pca: PcaModel,
    pub model: ClusterModel,
    pub assignment: Assignment,
}

/// Reduces document vectors with PCA, projects the class vectors with the same
/// basis, and clusters the documents starting from the projected class vectors.
pub fn align_vectors(
    docs: &[Vec<f64>],
    classes: &[Vec<f64>],
    task: Task,
    config: &AlignConfig,
) -> Result<Alignment> {
    if docs.is_empty() {
        return Err(Error::EmptyInput("no document vectors to align".into()));
    }
    if classes.is_empty() {
        return Err(Error::EmptyInput("no class vectors to align with".into()));
    }
    let target = config.pca_dim.min(docs.len()).min(docs[0].len());
    let (pca, reduced, reduced_classes) = pca_fit_transform(docs, classes, target.max(1))?;
    let (model, assignment) = match config.algorithm(task) {
        ClusterKind::MiniBatchKmeans => minibatch_kmeans(
            &reduced,
            &reduced_classes,
            &MiniBatchParams {
                batch_size: config.batch_size,
                seed: config.seed,
                max_iters: config.max_iters,
            },
        )?,
        ClusterKind::Kmeans => kmeans_fit(&reduced, &reduced_classes, config.seed, config.max_iters)?,
        ClusterKind::Gmm => gmm_fit(
            &reduced,
            &reduced_classes,
            &GmmParams {
                seed: config.seed,
                max_iters: config.max_iters,
                tol: config.tol,
                reg_covar: config.reg_covar,
            },
        )?,
    };
    Ok(Alignment {
        pca,
        model,
        assignment,
    })
}

/// [`align_vectors`] over document and class representations.
pub fn align(
    doc_reps: &[DocRep],
    class_reps: &[ClassRep],
    task: Task,
    config: &AlignConfig,
) -> Result<Alignment> {
    let docs: Vec<Vec<f64>> = doc_reps.iter().map(|d| d.vector.clone()).collect();
    let classes: Vec<Vec<f64>> = class_reps.iter().map(|c| c.vector.clone()).collect();
    align_vectors(&docs, &classes, task, config)
}
