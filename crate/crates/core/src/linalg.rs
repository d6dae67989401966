//! Dense symmetric eigendecomposition (cyclic Jacobi) and orthonormal-frame
//! utilities for the PCA and Rademacher machinery. Matrices are row-major
//! flat slices; the problems here are small (tens of dimensions), where
//! Jacobi is simple and accurate to near machine precision.

use alloc::vec::Vec;

use crate::fmath::{abs, sqrt};
use crate::rng::StreamRng;

/// Eigenvalues (descending) and eigenvectors (row-major, eigenvector `j` in
/// column `j`) of a symmetric matrix.
pub fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = alloc::vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |s, &x| s.max(abs(x))).max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(abs(m[p * n + q]));
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if abs(apq) <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = alloc::vec![0.0f64; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new_j] = v[k * n + old_j];
        }
    }
    (eigenvalues, vectors)
}

/// Max absolute asymmetry `|A - A^T|`.
pub fn asymmetry(a: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max(abs(a[i * n + j] - a[j * n + i]));
        }
    }
    worst
}

/// `tr(P M)` for the rank-`d` projection onto the span of `frame`
/// (row-major `m x d`, orthonormal columns): `sum_j v_j^T M v_j`.
pub fn projection_inner_product(frame: &[f64], m_matrix: &[f64], m: usize, d: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..d {
        for r in 0..m {
            let mut mv = 0.0;
            for c in 0..m {
                mv += m_matrix[r * m + c] * frame[c * d + j];
            }
            acc += frame[r * d + j] * mv;
        }
    }
    acc
}

/// Random orthonormal `m x d` frame: Gaussian entries followed by two passes
/// of modified Gram-Schmidt (the second pass restores orthogonality lost to
/// rounding, keeping `|v_i . v_j|` at machine level).
pub fn random_orthonormal_frame(m: usize, d: usize, rng: &mut StreamRng) -> Vec<f64> {
    debug_assert!(d <= m);
    let mut cols: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..m).map(|_| rng.normal()).collect())
        .collect();
    for _pass in 0..2 {
        for j in 0..d {
            for i in 0..j {
                let dot: f64 = (0..m).map(|r| cols[j][r] * cols[i][r]).sum();
                let (head, tail) = cols.split_at_mut(j);
                for (cj, ci) in tail[0].iter_mut().zip(&head[i]) {
                    *cj -= dot * ci;
                }
            }
            let norm = sqrt(cols[j].iter().map(|c| c * c).sum::<f64>());
            for c in cols[j].iter_mut() {
                *c /= norm;
            }
        }
    }
    let mut frame = alloc::vec![0.0f64; m * d];
    for j in 0..d {
        for r in 0..m {
            frame[r * d + j] = cols[j][r];
        }
    }
    frame
}
