//! Norms and matrix functions built on the decompositions.

use alloc::vec::Vec;


use super::eig::hermitian_eig;
use super::matrix::{ComplexMatrix, C64};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::tol;

/// `‖m‖₁ = Tr √(m†m)`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.s.iter().sum())
}

/// Trace distance without the ½ factor: `‖a − b‖₁`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::DimensionMismatch("trace distance operands differ in shape".into()));
    }
    trace_norm(&(a - b))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let es = hermitian_eig(m)?;
    let values: Vec<f64> = es.real_eigenvalues().into_iter().map(f).collect();
    let v = &es.eigenvectors;
    Ok(&(v * &ComplexMatrix::diag_real(&values)) * &v.dagger())
}

/// Hermitian PSD square root. Slightly negative eigenvalues are clipped to
/// zero; anything below `-PSD_REJECT` is an error.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let es = hermitian_eig(m)?;
    let values = es.real_eigenvalues();
    let scale = m.max_abs().max(1.0);
    if let Some(&worst) = values.iter().find(|&&x| x < -tol::PSD_REJECT * scale) {
        return Err(Error::NegativeEigenvalue(worst));
    }
    let roots: Vec<f64> = values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let v = &es.eigenvectors;
    Ok(&(v * &ComplexMatrix::diag_real(&roots)) * &v.dagger())
}

/// Natural logarithm on the support (eigenvalues above `support_tol`), zero
/// on the kernel, together with the projector onto that support.
pub fn log_on_support(m: &ComplexMatrix, support_tol: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let es = hermitian_eig(m)?;
    let values = es.real_eigenvalues();
    let logs: Vec<f64> = values.iter().map(|&x| if x > support_tol { x.ln() } else { 0.0 }).collect();
    let mask: Vec<f64> = values.iter().map(|&x| if x > support_tol { 1.0 } else { 0.0 }).collect();
    let v = &es.eigenvectors;
    let vd = v.dagger();
    let log = &(v * &ComplexMatrix::diag_real(&logs)) * &vd;
    let proj = &(v * &ComplexMatrix::diag_real(&mask)) * &vd;
    Ok((log, proj))
}

/// Left polar decomposition `m = P · U` with `P = √(m m†)` and `U` unitary.
pub fn polar_left(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    m.require_square()?;
    let d = svd(m)?;
    let sigma = ComplexMatrix::diag_real(&d.s);
    let p = &(&d.u * &sigma) * &d.u.dagger();
    let u = &d.u * &d.v.dagger();
    Ok((p, u))
}

/// Right polar decomposition `m = U · Q` with `Q = √(m† m)`.
pub fn polar_right(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    m.require_square()?;
    let d = svd(m)?;
    let sigma = ComplexMatrix::diag_real(&d.s);
    let q = &(&d.v * &sigma) * &d.v.dagger();
    let u = &d.u * &d.v.dagger();
    Ok((u, q))
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
