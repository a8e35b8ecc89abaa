//! Largest singular value of a real matrix.

use crate::{RMatrix, RVector};
use nalgebra::SymmetricEigen;

/// Matrices with more rows than this go through [`lanczos_top_singular_value`].
pub const DENSE_SVD_LIMIT: usize = 256;

pub fn top_singular_value(m: &RMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows().max(m.ncols()) <= DENSE_SVD_LIMIT {
        dense_top_singular_value(m)
    } else {
        lanczos_top_singular_value(m)
    }
}

pub fn dense_top_singular_value(m: &RMatrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Lanczos with full reorthogonalization on `MᵀM`, never forming it.
pub fn lanczos_top_singular_value(m: &RMatrix) -> f64 {
    let n = m.ncols();
    let mt = m.transpose();
    let apply = |v: &RVector| -> RVector { &mt * (m * v) };

    // fixed, generic start vector; deterministic across runs
    let mut q = RVector::from_fn(n, |i, _| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_75).sin());
    q /= q.norm();

    let mut basis: Vec<RVector> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut theta = 0.0;
    let scale = m.iter().map(|x| x * x).sum::<f64>();
    if scale == 0.0 {
        return 0.0;
    }

    for k in 0..n {
        let mut w = apply(&q);
        let alpha = q.dot(&w);
        basis.push(q.clone());
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let beta = w.norm();

        let size = k + 1;
        let mut tri = RMatrix::zeros(size, size);
        for i in 0..size {
            tri[(i, i)] = alphas[i];
            if i + 1 < size {
                tri[(i, i + 1)] = betas[i];
                tri[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(tri);
        let (top, val) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        theta = val;
        let residual = beta * eig.eigenvectors[(size - 1, top)].abs();
        if residual <= 1e-14 * scale || beta <= 1e-14 * scale {
            break;
        }
        betas.push(beta);
        q = w / beta;
    }
    theta.max(0.0).sqrt()
}
