use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterKind {
    MiniBatchKmeans,
    Kmeans,
    Gmm,
}

/// A fitted seeded clustering. Row `k` belongs to class `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterModel {
    pub kind: ClusterKind,
    pub centroids: Vec<Vec<f64>>,
    /// Diagonal variances per class (GMM only).
    pub covariances: Option<Vec<Vec<f64>>>,
    /// Mixture priors (GMM only).
    pub weights: Option<Vec<f64>>,
    pub rng_seed: u64,
    pub iterations: usize,
    /// Per-iteration objective: inertia for k-means variants, total
    /// log-likelihood for GMM.
    pub objective_trace: Vec<f64>,
}

/// Hard class per point plus the vector it was derived from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment {
    pub labels: Vec<usize>,
    /// Squared distances to every centroid (k-means) or posteriors (GMM).
    pub scores: Vec<Vec<f64>>,
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the smallest value; the lowest index wins ties.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Nearest-centroid assignment of every point.
pub fn assign_nearest(data: &[Vec<f64>], centroids: &[Vec<f64>]) -> Assignment {
    let scores: Vec<Vec<f64>> = data
        .par_iter()
        .map(|x| centroids.iter().map(|c| squared_distance(x, c)).collect())
        .collect();
    let labels = scores.iter().map(|s: &Vec<f64>| argmin(s)).collect();
    Assignment { labels, scores }
}

/// Sum of squared distances from each point to its assigned centroid.
pub fn inertia(data: &[Vec<f64>], centroids: &[Vec<f64>], labels: &[usize]) -> f64 {
    data.iter()
        .zip(labels)
        .map(|(x, &k)| squared_distance(x, &centroids[k]))
        .sum()
}

pub(crate) fn check_inputs(data: &[Vec<f64>], init: &[Vec<f64>]) -> Result<usize> {
    if data.is_empty() {
        return Err(Error::EmptyInput("clustering needs at least one point".into()));
    }
    if init.is_empty() {
        return Err(Error::EmptyInput("clustering needs at least one initial centroid".into()));
    }
    let d = init[0].len();
    for row in data.iter().chain(init) {
        if row.len() != d {
            return Err(Error::DimensionMismatch(d, row.len()));
        }
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct MiniBatchParams {
    pub batch_size: usize,
    pub seed: u64,
    /// Number of mini-batch steps.
    pub max_iters: usize,
}

impl Default for MiniBatchParams {
    fn default() -> Self {
        MiniBatchParams {
            batch_size: 400,
            seed: 42,
            max_iters: 100,
        }
    }
}

/// Seeded mini-batch k-means.
///
/// Each epoch visits the points in a fresh ChaCha8 shuffle, cut into batches
/// of `batch_size`. Within a batch, points are first assigned to the centroids
/// as they stood at the start of the batch, then each centroid moves toward
/// its points with learning rate `1 / (points assigned to it so far)`. The
/// returned assignment is one full nearest-centroid pass.
pub fn minibatch_kmeans(
    data: &[Vec<f64>],
    init_centroids: &[Vec<f64>],
    params: &MiniBatchParams,
) -> Result<(ClusterModel, Assignment)> {
    check_inputs(data, init_centroids)?;
    if params.batch_size == 0 {
        return Err(Error::InvalidArgument("batch size must be at least 1".into()));
    }
    let n = data.len();
    let batch_size = params.batch_size.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut centroids = init_centroids.to_vec();
    let mut counts = vec![0usize; centroids.len()];
    let mut order: Vec<usize> = (0..n).collect();
    let mut trace = Vec::with_capacity(params.max_iters);

    let mut step = 0;
    'epochs: while step < params.max_iters {
        order.shuffle(&mut rng);
        for batch in order.chunks(batch_size) {
            if step == params.max_iters {
                break 'epochs;
            }
            let cached: Vec<(usize, f64)> = batch
                .par_iter()
                .map(|&i| nearest(&data[i], &centroids))
                .collect();
            trace.push(cached.iter().map(|(_, d)| d).sum());
            for (&i, &(k, _)) in batch.iter().zip(&cached) {
                counts[k] += 1;
                let eta = 1.0 / counts[k] as f64;
                for (c, x) in centroids[k].iter_mut().zip(&data[i]) {
                    *c += eta * (x - *c);
                }
            }
            step += 1;
        }
    }

    let assignment = assign_nearest(data, &centroids);
    Ok((
        ClusterModel {
            kind: ClusterKind::MiniBatchKmeans,
            centroids,
            covariances: None,
            weights: None,
            rng_seed: params.seed,
            iterations: step,
            objective_trace: trace,
        },
        assignment,
    ))
}

/// Seeded full-batch (Lloyd) k-means.
///
/// `objective_trace[t]` is the inertia right after assignment step `t`.
/// Clusters that lose all points keep their previous centroid.
pub fn kmeans_fit(
    data: &[Vec<f64>],
    init_centroids: &[Vec<f64>],
    seed: u64,
    max_iters: usize,
) -> Result<(ClusterModel, Assignment)> {
    let d = check_inputs(data, init_centroids)?;
    let k = init_centroids.len();
    let mut centroids = init_centroids.to_vec();
    let mut assignment = assign_nearest(data, &centroids);
    let mut trace = vec![inertia(data, &centroids, &assignment.labels)];
    let mut iterations = 0;

    while iterations < max_iters {
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (x, &c) in data.iter().zip(&assignment.labels) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(x) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        iterations += 1;
        let next = assign_nearest(data, &centroids);
        trace.push(inertia(data, &centroids, &next.labels));
        let converged = next.labels == assignment.labels;
        assignment = next;
        if converged {
            break;
        }
    }

    Ok((
        ClusterModel {
            kind: ClusterKind::Kmeans,
            centroids,
            covariances: None,
            weights: None,
            rng_seed: seed,
            iterations,
            objective_trace: trace,
        },
        assignment,
    ))
}
