//! Ergodicity and mixing analysis for finite-dimensional quantum channels.
//!
//! The crate decides, for a channel given by Kraus operators or by a
//! Stinespring dilation, whether it is ergodic (exactly one fixed state) and
//! whether it is mixing (every orbit converges to that state). Several
//! independent routes are provided so they can be cross-checked:
//!
//! * [`spectral`]: peripheral spectrum of the superoperator, spectral gap,
//!   convergence-rate bound, pure-fixed-point shortcut, normality check.
//! * [`lyapunov`]: orbits, Lyapunov-type functionals (trace distance to the
//!   fixed point, relative entropy, von Neumann entropy), asymptotic
//!   deformation, Cesàro averages and a brute-force orbit oracle.
//! * [`dilation`]: channels whose dilation unitary conserves an additive
//!   observable, classified by counting factorizing eigenstates.
//!
//! All numerics run on the small dense kernel in [`opalg`]. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod dilation;
mod error;
pub mod lyapunov;
pub mod opalg;
pub mod random;
pub mod spectral;
pub mod tol;
pub mod zoo;

pub use channel::{DensityMatrix, KrausChannel, StinespringDilation, Superoperator, ValidationReport};
pub use error::{Error, Result};
pub use opalg::{ComplexMatrix, EigenSystem, C64};
pub use spectral::{SpectralReport, Verdict};
