//! Singular value decomposition by one-sided (Hestenes) Jacobi, and a
//! Householder QR used for Haar sampling.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{inner, vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

/// `m = U · diag(s) · V†` with `s` non-negative and descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let sigma = ComplexMatrix::diag_real(&self.s);
        &(&self.u * &sigma) * &self.v.dagger()
    }
}

/// Thin SVD; for square input `U` and `V` are unitary.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let Svd { u, s, v } = svd_tall(&m.dagger())?;
        return Ok(Svd { u: v, s, v: u });
    }
    svd_tall(m)
}

fn svd_tall(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..cols).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();

    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let threshold = f64::EPSILON * (rows.max(1) as f64);
    let mut converged = cols <= 1;
    for _ in 0..tol::JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let a_pq = -phase.conj() * s;
                let a_qp = phase * s;
                for cols_set in [&mut w, &mut v] {
                    let (left, right) = cols_set.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = xp * c + yq * a_pq;
                        *y = xp * a_qp + yq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { solver: "svd", iterations: tol::JACOBI_SWEEPS });
    }

    let norms: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let s: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let cutoff = s.first().copied().unwrap_or(0.0) * f64::EPSILON * (rows.max(1) as f64);

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut pending = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        if norms[i] > cutoff && norms[i] > 0.0 {
            u_cols.push(w[i].iter().map(|z| z / norms[i]).collect());
        } else {
            u_cols.push(vec![C64::zero(); rows]);
            pending.push(k);
        }
    }
    complete_orthonormal(&mut u_cols, &pending, rows);

    let u = ComplexMatrix::from_fn(rows, cols, |i, k| u_cols[k][i]);
    let v = ComplexMatrix::from_fn(cols, cols, |i, k| v[order[k]][i]);
    Ok(Svd { u, s, v })
}

/// Fills the columns listed in `pending` with unit vectors orthogonal to all
/// other columns, drawing candidates from the standard basis.
fn complete_orthonormal(columns: &mut [Vec<C64>], pending: &[usize], dim: usize) {
    let mut candidate = 0usize;
    for &slot in pending {
        while candidate < dim {
            let mut e = vec![C64::zero(); dim];
            e[candidate] = C64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for (k, col) in columns.iter().enumerate() {
                    if k == slot || (pending.contains(&k) && col.iter().all(|z| z.is_zero())) {
                        continue;
                    }
                    let proj = inner(col, &e);
                    for (ei, ci) in e.iter_mut().zip(col) {
                        *ei -= proj * ci;
                    }
                }
            }
            let nrm = vec_norm(&e);
            if nrm > 0.5 {
                columns[slot] = e.into_iter().map(|z| z / nrm).collect();
                break;
            }
        }
    }
}

/// Householder QR of a square matrix: `a = q · r`, `q` unitary, `r` upper
/// triangular.
pub fn qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.require_square()?;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let x: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        let norm = vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = vec_norm(&v);
        if vn == 0.0 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= vn;
        }
        for j in 0..n {
            let w: C64 = (0..v.len()).map(|i| v[i].conj() * r[(k + i, j)]).sum();
            for i in 0..v.len() {
                r[(k + i, j)] -= v[i] * w * 2.0;
            }
        }
        for i in 0..n {
            let w: C64 = (0..v.len()).map(|l| q[(i, k + l)] * v[l]).sum();
            for l in 0..v.len() {
                q[(i, k + l)] -= w * v[l].conj() * 2.0;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = C64::zero();
        }
    }
    Ok((q, r))
}

/// Orthonormal basis (as columns) of the `k`-dimensional approximate null
/// space of a square matrix, taken from its smallest singular directions.
pub fn null_space(m: &ComplexMatrix, k: usize) -> Result<(ComplexMatrix, Vec<f64>)> {
    let n = m.require_square()?;
    let k = k.min(n);
    let Svd { s, v, .. } = svd(m)?;
    let basis = ComplexMatrix::from_fn(n, k, |i, j| v[(i, n - k + j)]);
    Ok((basis, s[n - k..].to_vec()))
}
