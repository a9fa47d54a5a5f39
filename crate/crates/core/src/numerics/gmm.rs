use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::kmeans::{argmax, check_inputs, Assignment, ClusterKind, ClusterModel};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmmParams {
    pub seed: u64,
    pub max_iters: usize,
    /// EM stops once the relative log-likelihood gain drops below this.
    pub tol: f64,
    /// Added to every variance after each M-step.
    pub reg_covar: f64,
}

impl Default for GmmParams {
    fn default() -> Self {
        GmmParams {
            seed: 42,
            max_iters: 100,
            tol: 1e-6,
            reg_covar: 1e-6,
        }
    }
}

struct Mixture {
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Mixture {
    fn log_joint(&self, x: &[f64]) -> Vec<f64> {
        self.means
            .iter()
            .zip(&self.variances)
            .zip(&self.weights)
            .map(|((mu, var), w)| {
                let quad: f64 = x
                    .iter()
                    .zip(mu)
                    .zip(var)
                    .map(|((xi, mi), vi)| (xi - mi) * (xi - mi) / vi + (LN_2PI + vi.ln()))
                    .sum();
                w.ln() - 0.5 * quad
            })
            .collect()
    }

    /// Responsibilities per point and the total log-likelihood.
    fn e_step(&self, data: &[Vec<f64>]) -> (Vec<Vec<f64>>, f64) {
        let rows: Vec<(Vec<f64>, f64)> = data
            .par_iter()
            .map(|x| {
                let lj = self.log_joint(x);
                let max = lj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + lj.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                (lj.iter().map(|v| (v - lse).exp()).collect(), lse)
            })
            .collect();
        // summed sequentially so the total does not depend on thread count
        let ll = rows.iter().map(|(_, l)| l).sum();
        (rows.into_iter().map(|(r, _)| r).collect(), ll)
    }

    fn m_step(&mut self, data: &[Vec<f64>], resp: &[Vec<f64>], reg: f64) {
        let n = data.len() as f64;
        let d = data[0].len();
        for k in 0..self.means.len() {
            let nk: f64 = resp.iter().map(|r| r[k]).sum();
            self.weights[k] = nk / n;
            if nk < 1e-12 {
                continue;
            }
            let mut mean = vec![0.0; d];
            for (x, r) in data.iter().zip(resp) {
                for (m, xi) in mean.iter_mut().zip(x) {
                    *m += r[k] * xi;
                }
            }
            for m in &mut mean {
                *m /= nk;
            }
            let mut var = vec![0.0; d];
            for (x, r) in data.iter().zip(resp) {
                for ((v, xi), mi) in var.iter_mut().zip(x).zip(&mean) {
                    *v += r[k] * (xi - mi) * (xi - mi);
                }
            }
            for v in &mut var {
                *v = *v / nk + reg;
            }
            self.means[k] = mean;
            self.variances[k] = var;
        }
    }
}

/// Diagonal-covariance Gaussian mixture fitted by EM from seeded means.
///
/// Every component starts with the per-dimension data variance and a uniform
/// prior. `objective_trace` holds the log-likelihood evaluated at each E-step,
/// the last entry belonging to the returned parameters.
pub fn gmm_fit(
    data: &[Vec<f64>],
    init_means: &[Vec<f64>],
    params: &GmmParams,
) -> Result<(ClusterModel, Assignment)> {
    let d = check_inputs(data, init_means)?;
    if !(params.reg_covar > 0.0) {
        return Err(Error::InvalidArgument("covariance floor must be positive".into()));
    }
    let n = data.len() as f64;
    let k = init_means.len();
    let mut mean = vec![0.0; d];
    for x in data {
        for (m, xi) in mean.iter_mut().zip(x) {
            *m += xi;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut var = vec![0.0; d];
    for x in data {
        for ((v, xi), mi) in var.iter_mut().zip(x).zip(&mean) {
            *v += (xi - mi) * (xi - mi);
        }
    }
    for v in &mut var {
        *v = *v / n + params.reg_covar;
    }

    let mut mixture = Mixture {
        means: init_means.to_vec(),
        variances: vec![var; k],
        weights: vec![1.0 / k as f64; k],
    };

    let (mut resp, mut ll) = mixture.e_step(data);
    if !ll.is_finite() {
        return Err(Error::Numerical("non-finite initial log-likelihood".into()));
    }
    let mut trace = vec![ll];
    let mut iterations = 0;
    while iterations < params.max_iters {
        mixture.m_step(data, &resp, params.reg_covar);
        iterations += 1;
        let (next_resp, next_ll) = mixture.e_step(data);
        if !next_ll.is_finite() {
            return Err(Error::Numerical(format!(
                "log-likelihood became non-finite at EM iteration {iterations}"
            )));
        }
        trace.push(next_ll);
        let gain = next_ll - ll;
        resp = next_resp;
        ll = next_ll;
        if gain.abs() < params.tol * ll.abs().max(1.0) {
            break;
        }
    }

    let labels = resp.iter().map(|r| argmax(r)).collect();
    Ok((
        ClusterModel {
            kind: ClusterKind::Gmm,
            centroids: mixture.means,
            covariances: Some(mixture.variances),
            weights: Some(mixture.weights),
            rng_seed: params.seed,
            iterations,
            objective_trace: trace,
        },
        Assignment {
            labels,
            scores: resp,
        },
    ))
}
