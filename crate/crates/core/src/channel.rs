//! Channel representations: Kraus sets, superoperators, Choi matrices and
//! Stinespring dilations.
//!
//! Vectorization is column-stacking throughout, so
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)` and the superoperator of a Kraus set is
//! `S = Σₙ conj(Kₙ) ⊗ Kₙ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::opalg::{
    general_eig, hermitian_eig, kron, partial_trace, trace_distance, vec_norm, ComplexMatrix, Keep, C64,
};
use crate::tol;

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `m`. The stored matrix is the Hermitian part of `m`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.require_square()?;
        let defect = m.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace {} differs from 1", tr.re)));
        }
        let h = m.hermitian_part();
        let min = hermitian_eig(&h)?.real_eigenvalues().first().copied().unwrap_or(0.0);
        if min < -tol::PSD_CLIP {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix: h })
    }

    /// Wraps the output of a trace-preserving map applied to a valid state.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self { matrix: m.hermitian_part() }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let nrm = vec_norm(psi);
        if (nrm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("state vector norm {nrm}")));
        }
        Ok(Self { matrix: ComplexMatrix::outer(psi, psi).hermitian_part() })
    }

    /// `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidState(format!("basis index {k} out of range for dimension {dim}")));
        }
        Ok(Self { matrix: ComplexMatrix::basis_projector(dim, k) })
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        crate::opalg::trace_product(&self.matrix, &self.matrix).re
    }

    /// Trace distance `‖ρ − σ‖₁`.
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64> {
        trace_distance(&self.matrix, &other.matrix)
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be non-negative and sum to 1.
    pub fn mixture(states: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        let mut total = 0.0;
        for &(w, s) in states {
            if w < 0.0 || s.dim() != dim {
                return Err(Error::InvalidState("bad mixture component".into()));
            }
            acc = &acc + &s.matrix.scale_real(w);
            total += w;
        }
        if (total - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidState(format!("mixture weights sum to {total}")));
        }
        Ok(Self::from_trusted(acc))
    }
}

/// Outcome of checking trace preservation and complete positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `‖Σ K†K − I‖_max`.
    pub completeness_defect: f64,
    /// Smallest eigenvalue of the Choi matrix.
    pub min_choi_eigenvalue: f64,
    pub trace_preserving: bool,
    pub completely_positive: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

/// A channel in Kraus form, `ρ ↦ Σₙ Kₙ ρ Kₙ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    label: Option<String>,
}

impl KrausChannel {
    /// Builds and validates a channel. Fails when the Kraus set is not CPT.
    pub fn new(ops: Vec<ComplexMatrix>, label: Option<String>) -> Result<Self> {
        let c = Self::unvalidated(ops, label)?;
        let report = c.validate_cpt()?;
        if !report.passed() {
            return Err(Error::InvalidChannel(format!(
                "completeness defect {:e}, minimum Choi eigenvalue {:e}",
                report.completeness_defect, report.min_choi_eigenvalue
            )));
        }
        Ok(c)
    }

    /// Shape checks only; use [`KrausChannel::validate_cpt`] to inspect the rest.
    pub fn unvalidated(ops: Vec<ComplexMatrix>, label: Option<String>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidChannel("empty Kraus set".into()))?;
        let dim = first.require_square()?;
        if dim == 0 {
            return Err(Error::InvalidChannel("zero dimension".into()));
        }
        if ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self { dim, ops, label })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, ops: alloc::vec![ComplexMatrix::identity(dim)], label: Some("identity".into()) }
    }

    /// Unitary conjugation `ρ ↦ U ρ U†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > tol::UNITARITY {
            return Err(Error::InvalidChannel(format!("unitarity defect {defect:e}")));
        }
        Self::unvalidated(alloc::vec![u], Some("unitary".into()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `C = Σₙ vec(Kₙ) vec(Kₙ)†`.
    pub fn choi(&self) -> ComplexMatrix {
        let n = self.dim * self.dim;
        let mut c = ComplexMatrix::zeros(n, n);
        for k in &self.ops {
            let v = k.vectorize();
            c = &c + &ComplexMatrix::outer(&v, &v);
        }
        c
    }

    pub fn validate_cpt(&self) -> Result<ValidationReport> {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            sum = &sum + &(&k.dagger() * k);
        }
        let completeness_defect = (&sum - &ComplexMatrix::identity(self.dim)).max_abs();
        let min_choi_eigenvalue = hermitian_eig(&self.choi())?.real_eigenvalues()[0];
        Ok(ValidationReport {
            completeness_defect,
            min_choi_eigenvalue,
            trace_preserving: completeness_defect <= tol::COMPLETENESS,
            completely_positive: min_choi_eigenvalue >= -tol::CHOI_PSD,
        })
    }

    /// Linear extension of the channel to arbitrary operators.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator for a channel on dimension {}",
                x.rows(),
                x.cols(),
                self.dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out = &out + &(&(k * x) * &k.dagger());
        }
        Ok(out)
    }

    /// `Σₙ Kₙ ρ Kₙ†`. The output is Hermitized and renormalized; a trace
    /// defect beyond [`tol::TRACE`] is reported as an error instead.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?;
        let tr = out.trace().re;
        if (tr - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidChannel(format!("output trace {tr} (channel not trace preserving)")));
        }
        Ok(DensityMatrix::from_trusted(out.scale_real(1.0 / tr)))
    }

    pub fn to_superoperator(&self) -> Superoperator {
        let n = self.dim * self.dim;
        let mut s = ComplexMatrix::zeros(n, n);
        for k in &self.ops {
            s = &s + &kron(&k.conj(), k);
        }
        Superoperator { dim: self.dim, matrix: s }
    }

    /// `self ∘ other`: apply `other` first. Kraus set `{Kᵢ Lⱼ}`.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("compose {} with {}", self.dim, other.dim)));
        }
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for k in &self.ops {
            for l in &other.ops {
                ops.push(k * l);
            }
        }
        Ok(KrausChannel { dim: self.dim, ops, label: None })
    }

    /// `τⁿ` as a superoperator matrix power.
    pub fn power(&self, n: u64) -> Superoperator {
        self.to_superoperator().pow(n)
    }

    /// `K'ᵢ = Σⱼ Wᵢⱼ Kⱼ` for a unitary `W` on the Kraus index. The channel is
    /// unchanged; only its representation moves.
    pub fn gauge_rotate(&self, w: &ComplexMatrix) -> Result<KrausChannel> {
        let r = self.ops.len();
        if w.rows() != r || w.cols() != r {
            return Err(Error::DimensionMismatch(format!("{r} Kraus operators, {}x{} gauge", w.rows(), w.cols())));
        }
        let ops = (0..r)
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
                for (j, k) in self.ops.iter().enumerate() {
                    if !w[(i, j)].is_zero() {
                        acc = &acc + &k.scale(w[(i, j)]);
                    }
                }
                acc
            })
            .collect();
        Ok(KrausChannel { dim: self.dim, ops, label: self.label.clone() })
    }

    /// `‖τ(I/d) − I/d‖_max ≤ tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        let mixed = ComplexMatrix::identity(self.dim);
        self.apply_operator(&mixed).map(|out| out.approx_eq(&mixed, tol)).unwrap_or(false)
    }
}

/// Matrix of the channel's linear extension acting on column-stacked operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on dimension {dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::devectorize(&self.matrix.matvec(&x.vectorize()), self.dim)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_trusted(self.apply_operator(rho.matrix()))
    }

    pub fn pow(&self, n: u64) -> Superoperator {
        Superoperator { dim: self.dim, matrix: self.matrix.pow(n) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator { dim: self.dim, matrix: &self.matrix * &other.matrix }
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(general_eig(&self.matrix)?.eigenvalues.iter().fold(0.0, |m, z| m.max(z.norm())))
    }
}

/// `τ(ρ) = Tr_B[U (ρ ⊗ |φ⟩⟨φ|) U†]` on `H_A ⊗ H_B` (composite index `a·dim_b + b`).
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation {
    dim_a: usize,
    dim_b: usize,
    unitary: ComplexMatrix,
    bath_state: Vec<C64>,
}

impl StinespringDilation {
    pub fn new(dim_a: usize, dim_b: usize, unitary: ComplexMatrix, bath_state: Vec<C64>) -> Result<Self> {
        let n = dim_a * dim_b;
        if n == 0 || unitary.rows() != n || unitary.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "dilation unitary is {}x{}, expected {n}x{n}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        if bath_state.len() != dim_b {
            return Err(Error::DimensionMismatch(format!(
                "bath state has {} entries, expected {dim_b}",
                bath_state.len()
            )));
        }
        let defect = unitary.unitarity_defect();
        if defect > tol::UNITARITY {
            return Err(Error::InvalidChannel(format!("dilation unitarity defect {defect:e}")));
        }
        let nrm = vec_norm(&bath_state);
        if (nrm - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::InvalidState(format!("bath state norm {nrm}")));
        }
        Ok(Self { dim_a, dim_b, unitary, bath_state })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn bath_state(&self) -> &[C64] {
        &self.bath_state
    }

    /// `U (ρ ⊗ |φ⟩⟨φ|) U†`.
    pub fn joint_output(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim_a || rho.cols() != self.dim_a {
            return Err(Error::DimensionMismatch("input does not match system dimension".into()));
        }
        let bath = ComplexMatrix::outer(&self.bath_state, &self.bath_state);
        let joint = kron(rho, &bath);
        Ok(&(&self.unitary * &joint) * &self.unitary.dagger())
    }

    /// Direct evaluation of the reduced dynamics, without Kraus operators.
    pub fn apply_direct(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        partial_trace(&self.joint_output(rho)?, self.dim_a, self.dim_b, Keep::A)
    }

    /// `Kₙ = (I_A ⊗ ⟨n|) U (I_A ⊗ |φ⟩)` over the bath basis.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let (da, db) = (self.dim_a, self.dim_b);
        let ops = (0..db)
            .map(|n| {
                ComplexMatrix::from_fn(da, da, |ap, a| {
                    (0..db).map(|b| self.unitary[(ap * db + n, a * db + b)] * self.bath_state[b]).sum()
                })
            })
            .collect();
        KrausChannel::new(ops, Some("stinespring".into()))
    }
}
