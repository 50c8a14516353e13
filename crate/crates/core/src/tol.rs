//! Default numerical tolerances, in one place.

/// Eigensolver residual target, relative to the matrix 2-norm scale.
pub const EIG_RESIDUAL: f64 = 1e-9;
/// Maximum entry of `m - m†` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-9;
/// Eigenvalues above `-PSD_CLIP` are clipped to zero in PSD matrix functions.
pub const PSD_CLIP: f64 = 1e-9;
/// Eigenvalues below `-PSD_REJECT` make a PSD matrix function fail.
pub const PSD_REJECT: f64 = 1e-6;
/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT: f64 = 1e-10;
/// Eigenvalues closer than this belong to the same cluster.
pub const CLUSTER: f64 = 1e-7;
/// `λ` is peripheral iff `|λ| > 1 - PERIPHERAL`.
pub const PERIPHERAL: f64 = 1e-7;
/// Density-matrix trace defect.
pub const TRACE: f64 = 1e-9;
/// Kraus completeness defect `‖Σ K†K - I‖_max`.
pub const COMPLETENESS: f64 = 1e-8;
/// Minimum Choi eigenvalue accepted as completely positive.
pub const CHOI_PSD: f64 = 1e-8;
/// Unitarity defect `‖U†U - I‖_max`.
pub const UNITARITY: f64 = 1e-9;
/// Norm defect of a state vector.
pub const NORMALIZATION: f64 = 1e-12;
/// Hermitized fixed-point candidate must be PSD within this.
pub const FIXED_POINT_PSD: f64 = 1e-6;
/// Purity at or above `1 - PURE` counts as a pure state.
pub const PURE: f64 = 1e-9;
/// Trace distances below this are at the numerical resolution floor.
pub const DISTANCE_FLOOR: f64 = 1e-13;
/// Singular values above `1 - SLICE` mark an eigenvector lying in a product slice.
pub const SLICE: f64 = 1e-6;
/// Commutator norm accepted as commuting.
pub const COMMUTATOR: f64 = 1e-9;
/// Sweep cap for the Jacobi solvers.
pub const JACOBI_SWEEPS: usize = 100;
/// QR iterations allowed per eigenvalue in the Schur solver.
pub const QR_ITERATIONS_PER_EIGENVALUE: usize = 60;
