//! Eigensolvers: cyclic Jacobi for Hermitian matrices, and Hessenberg
//! reduction followed by shifted complex QR (Schur form) for general ones.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<C64>,
    /// Column `k` pairs with `eigenvalues[k]`; columns have unit 2-norm.
    pub eigenvectors: ComplexMatrix,
    /// `‖A v_k − λ_k v_k‖₂` per pair.
    pub vector_residuals: Vec<f64>,
    /// Largest entry of `vector_residuals`.
    pub residual: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Real parts of the eigenvalues (meaningful for Hermitian input).
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }
}

fn residuals(m: &ComplexMatrix, values: &[C64], vectors: &ComplexMatrix) -> Vec<f64> {
    (0..values.len())
        .map(|k| {
            let v = vectors.column(k);
            let av = m.matvec(&v);
            let diff: Vec<C64> = av.iter().zip(&v).map(|(a, x)| a - values[k] * x).collect();
            vec_norm(&diff)
        })
        .collect()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` first. Eigenvalues come back real
/// and ascending with an orthonormal eigenvector basis.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    let n = m.require_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol::HERMITICITY * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let sym = m.hermitian_part();
    let mut a = sym.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = n <= 1;
    for _ in 0..tol::JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        let scale = a.frobenius_norm();
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        // one last look: a sweep cap hit with a numerically diagonal matrix is fine
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() > 1e2 * f64::EPSILON * a.frobenius_norm() {
            return Err(Error::NoConvergence { solver: "hermitian_eig", iterations: tol::JACOBI_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<C64> = order.iter().map(|&i| C64::new(a[(i, i)].re, 0.0)).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    let vector_residuals = residuals(&sym, &eigenvalues, &eigenvectors);
    let residual = vector_residuals.iter().copied().fold(0.0, f64::max);
    Ok(EigenSystem { eigenvalues, eigenvectors, vector_residuals, residual })
}

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= f64::MIN_POSITIVE {
        return;
    }
    let n = a.rows();
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = diag(1, e^{-iφ}) · real rotation on (p, q)
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * jpp + y * jqp;
        a[(k, q)] = x * jpq + y * jqq;
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
        a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
    }
    a[(p, q)] = C64::zero();
    a[(q, p)] = C64::zero();
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * jpp + y * jqp;
        v[(k, q)] = x * jpq + y * jqq;
    }
}

/// Complex Schur decomposition `m = Z T Z†`, `T` upper triangular, `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub z: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// similarity into `z`.
fn hessenberg(h: &mut ComplexMatrix, z: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
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
        let m = v.len();
        // left: (I - 2vv†) H
        for j in 0..n {
            let w: C64 = (0..m).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            if w.is_zero() {
                continue;
            }
            for i in 0..m {
                h[(k + 1 + i, j)] -= v[i] * w * 2.0;
            }
        }
        // right: H (I - 2vv†), and the same on Z
        for target in [&mut *h, &mut *z] {
            for i in 0..n {
                let w: C64 = (0..m).map(|l| target[(i, k + 1 + l)] * v[l]).sum();
                if w.is_zero() {
                    continue;
                }
                for l in 0..m {
                    target[(i, k + 1 + l)] -= w * v[l].conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::zero();
        }
    }
}

/// Givens pair `(c, s)` with `c` real such that
/// `[[c, s], [-s̄, c]] · [a, b]ᵀ = [r, 0]ᵀ`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b.is_zero() {
        return (1.0, C64::zero());
    }
    if a.is_zero() {
        return (0.0, C64::new(1.0, 0.0) * (b.conj() / b.norm()));
    }
    let r = a.norm().hypot(b.norm());
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

/// Schur decomposition by Hessenberg reduction and single-shift complex QR
/// with Wilkinson shifts and deflation.
pub fn schur(m: &ComplexMatrix) -> Result<Schur> {
    let n = m.require_square()?;
    let mut h = m.clone();
    let mut z = ComplexMatrix::identity(n);
    if n == 0 {
        return Ok(Schur { z, t: h });
    }
    hessenberg(&mut h, &mut z);

    let norm_h = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let cap = tol::QR_ITERATIONS_PER_EIGENVALUE * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = norm_h;
            }
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > cap {
            return Err(Error::NoConvergence { solver: "schur", iterations: total });
        }

        let shift = if its % 10 == 0 {
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let mid = (a + d) * 0.5;
            let (m1, m2) = (mid + disc, mid - disc);
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };

        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = C64::zero();
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for i in 0..=(k + 1) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
            for i in 0..n {
                let (x, y) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = x * c + s.conj() * y;
                z[(i, k + 1)] = -s * x + y * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C64::zero();
        }
    }
    Ok(Schur { z, t: h })
}

/// Eigenvectors of an upper-triangular matrix by back-substitution.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let norm_t = t.frobenius_norm();
    let smin = (f64::EPSILON * norm_t).max(f64::MIN_POSITIVE * 1e10);
    let mut y_all = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![C64::zero(); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let sum: C64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            y[i] = -sum / denom;
            let big = vec_norm(&y[i..=k]);
            if big > 1e100 {
                for yj in y.iter_mut() {
                    *yj /= big;
                }
            }
        }
        y_all.set_column(k, &y);
    }
    y_all
}

/// Full complex spectrum of a general square matrix via the Schur form.
///
/// Eigenvalues are reliable for defective input; eigenvectors there can be
/// ill-conditioned and carry their own residuals.
pub fn general_eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    let n = m.require_square()?;
    let Schur { z, t } = schur(m)?;
    let eigenvalues: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let y = triangular_eigenvectors(&t);
    let mut vectors = &z * &y;
    for k in 0..n {
        let col = vectors.column(k);
        let nrm = vec_norm(&col);
        if nrm > 0.0 {
            let scaled: Vec<C64> = col.iter().map(|x| x / nrm).collect();
            vectors.set_column(k, &scaled);
        }
    }
    let vector_residuals = residuals(m, &eigenvalues, &vectors);
    let residual = vector_residuals.iter().copied().fold(0.0, f64::max);
    Ok(EigenSystem { eigenvalues, eigenvectors: vectors, vector_residuals, residual })
}

/// Groups values whose distance to a cluster member is below `tol`.
/// Returns clusters as lists of indices into `values`.
pub fn cluster(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        let mut members = vec![start];
        label[start] = Some(id);
        let mut cursor = 0;
        while cursor < members.len() {
            let cur = members[cursor];
            for j in 0..n {
                if label[j].is_none() && (values[j] - values[cur]).norm() < tol {
                    label[j] = Some(id);
                    members.push(j);
                }
            }
            cursor += 1;
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}
