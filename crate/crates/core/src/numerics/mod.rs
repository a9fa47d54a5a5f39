//! PCA and seeded clustering used to align documents with classes.
//!
//! All randomness comes from ChaCha8 seeded through `seed_from_u64`, and
//! equal distances or posteriors resolve to the lowest class index.

mod align;
mod gmm;
mod kmeans;
mod pca;

pub use align::{
    align, align_vectors, AlignConfig, Alignment, Task, DEFAULT_BATCH_SIZE, DEFAULT_PCA_DIM,
    DEFAULT_SEED,
};
pub use gmm::{gmm_fit, GmmParams};
pub use kmeans::{
    assign_nearest, inertia, kmeans_fit, minibatch_kmeans, Assignment, ClusterKind, ClusterModel,
    MiniBatchParams,
};
pub use pca::{pca_fit_transform, PcaModel};
