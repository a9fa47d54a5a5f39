use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-10;

/// Principal component basis fitted on a set of rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// One principal direction per row, orthonormal.
    pub components: Vec<Vec<f64>>,
    /// Sample-covariance eigenvalue of each component, non-increasing.
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    /// Fits a basis of at most `target_dim` directions.
    ///
    /// Fewer directions are kept when the centered data has lower rank; a
    /// warning is logged in that case. Directions are sign-normalized so that
    /// their largest-magnitude entry is positive.
    pub fn fit(data: &[Vec<f64>], target_dim: usize) -> Result<Self> {
        let n = data.len();
        if n == 0 {
            return Err(Error::EmptyInput("PCA needs at least one row".into()));
        }
        if target_dim == 0 {
            return Err(Error::InvalidArgument("PCA target dimension must be positive".into()));
        }
        let d = data[0].len();
        if let Some(bad) = data.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(d, bad.len()));
        }

        let mut mean = vec![0.0; d];
        for row in data {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let centered = DMatrix::from_fn(n, d, |i, j| data[i][j] - mean[j]);
        let denom = (n.max(2) - 1) as f64;

        // Eigen-decompose whichever of the covariance (d x d) or the Gram
        // matrix (n x n) is smaller; both share the nonzero spectrum.
        let (values, mut directions) = if d <= n {
            let cov = centered.transpose() * &centered / denom;
            let eig = SymmetricEigen::new(cov);
            let dirs: Vec<Vec<f64>> = (0..d)
                .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
                .collect();
            (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), dirs)
        } else {
            let gram = &centered * centered.transpose() / denom;
            let eig = SymmetricEigen::new(gram);
            let dirs: Vec<Vec<f64>> = (0..n)
                .map(|k| {
                    let u = eig.eigenvectors.column(k);
                    (centered.transpose() * u).iter().copied().collect()
                })
                .collect();
            (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), dirs)
        };

        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let max_value = values[order[0]].max(0.0);
        let rank = order
            .iter()
            .take_while(|&&k| max_value > 0.0 && values[k] > max_value * RANK_TOLERANCE)
            .count();
        let keep = target_dim.min(rank);
        if keep < target_dim {
            log::warn!(
                "PCA target dimension {target_dim} exceeds the data rank; keeping {keep} components"
            );
        }

        let mut components: Vec<Vec<f64>> = Vec::with_capacity(keep);
        let mut explained_variance = Vec::with_capacity(keep);
        for &k in order.iter().take(keep) {
            let mut v = std::mem::take(&mut directions[k]);
            // Two rounds of Gram-Schmidt against the accepted directions.
            for _ in 0..2 {
                for c in &components {
                    let proj: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    for (x, y) in v.iter_mut().zip(c) {
                        *x -= proj * y;
                    }
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::Numerical("degenerate principal direction".into()));
                }
                for x in &mut v {
                    *x /= norm;
                }
            }
            let pivot = v
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, x)| {
                    if x.abs() > best.1.abs() {
                        (i, *x)
                    } else {
                        best
                    }
                })
                .1;
            if pivot < 0.0 {
                for x in &mut v {
                    *x = -*x;
                }
            }
            components.push(v);
            explained_variance.push(values[k]);
        }

        Ok(PcaModel {
            mean,
            components,
            explained_variance,
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(row.iter().zip(&self.mean))
                    .map(|(ci, (x, m))| ci * (x - m))
                    .sum()
            })
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rows.iter()
            .map(|r| {
                if r.len() != self.mean.len() {
                    Err(Error::DimensionMismatch(self.mean.len(), r.len()))
                } else {
                    Ok(self.transform_row(r))
                }
            })
            .collect()
    }

    /// Maps reduced coordinates back into the input space.
    pub fn inverse_transform_row(&self, reduced: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (c, z) in self.components.iter().zip(reduced) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += z * ci;
            }
        }
        out
    }
}

/// Fits PCA on `data` and projects both `data` and `class_vectors` with it.
pub fn pca_fit_transform(
    data: &[Vec<f64>],
    class_vectors: &[Vec<f64>],
    target_dim: usize,
) -> Result<(PcaModel, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let model = PcaModel::fit(data, target_dim)?;
    let reduced = model.transform(data)?;
    let reduced_classes = model.transform(class_vectors)?;
    Ok((model, reduced, reduced_classes))
}
