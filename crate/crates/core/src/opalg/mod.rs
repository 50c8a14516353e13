//! Dense complex linear algebra: the kernel every other module runs on.
//!
//! Double precision throughout; tolerances come from [`crate::tol`].

mod eig;
mod func;
mod matrix;
mod svd;

pub use eig::{cluster, general_eig, hermitian_eig, schur, EigenSystem, Schur};
pub use func::{
    hermitian_function, log_on_support, polar_left, polar_right, psd_sqrt, trace_distance, trace_norm,
    trace_product,
};
pub use matrix::{inner, kron, kron_vec, partial_trace, vec_norm, ComplexMatrix, Keep, C64};
pub use svd::{null_space, qr, svd, Svd};

/// Pauli matrices and other small fixtures used across the crate.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        })
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// SWAP on two systems of dimension `d`.
    pub fn swap(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d * d, d * d, |r, c| {
            let (a, b) = (c / d, c % d);
            C64::new(if r == b * d + a { 1.0 } else { 0.0 }, 0.0)
        })
    }
}
