use crate::error::{Error, Result};

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// Cosine similarity, clamped to `[-1, 1]`. A zero vector has similarity 0
/// with everything.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(cosine_unchecked(u, v))
}

pub(crate) fn cosine_unchecked(u: &[f64], v: &[f64]) -> f64 {
    let denom = norm(u) * norm(v);
    if denom == 0.0 {
        return 0.0;
    }
    (dot(u, v) / denom).clamp(-1.0, 1.0)
}

/// `u / |u|`, or the zero vector when `u` is zero.
pub(crate) fn unit(u: &[f64]) -> Vec<f64> {
    let n = norm(u);
    if n == 0.0 {
        vec![0.0; u.len()]
    } else {
        u.iter().map(|x| x / n).collect()
    }
}

/// Element-wise mean of equally sized vectors, summed in input order.
pub(crate) fn mean_of<'a>(vectors: impl IntoIterator<Item = &'a [f64]>, dim: usize) -> Vec<f64> {
    let mut sum = vec![0.0; dim];
    let mut n = 0usize;
    for v in vectors {
        for (s, x) in sum.iter_mut().zip(v) {
            *s += x;
        }
        n += 1;
    }
    if n > 0 {
        for s in &mut sum {
            *s /= n as f64;
        }
    }
    sum
}
