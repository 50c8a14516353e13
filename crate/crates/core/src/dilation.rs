//! Channels induced by a dilation unitary that conserves an additive charge.
//!
//! If `[mA⊗I + I⊗mB, U] = 0` and the bath starts in a non-degenerate extremal
//! eigenvector `|φ⟩` of `mB`, the induced channel is mixing exactly when `U`
//! has a single eigenvector of product form `|ν⟩⊗|φ⟩`, and is not ergodic
//! when it has several.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::{DensityMatrix, KrausChannel, StinespringDilation};
use crate::error::{Error, Result};
use crate::opalg::{
    cluster, hermitian_eig, inner, kron, kron_vec, null_space, partial_trace, schur, svd, vec_norm, ComplexMatrix,
    Keep, C64,
};
use crate::spectral::{analyze_channel, SpectralReport, Verdict};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Max,
    Min,
}

impl Extremal {
    pub fn as_str(self) -> &'static str {
        match self {
            Extremal::Max => "max",
            Extremal::Min => "min",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max" => Some(Extremal::Max),
            "min" => Some(Extremal::Min),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConservedDilation {
    dilation: StinespringDilation,
    m_a: ComplexMatrix,
    m_b: ComplexMatrix,
    extremal: Extremal,
}

impl ConservedDilation {
    /// Checks shapes and Hermiticity only; the physical hypotheses are
    /// reported by [`validate_conserved`].
    pub fn new(dilation: StinespringDilation, m_a: ComplexMatrix, m_b: ComplexMatrix, extremal: Extremal) -> Result<Self> {
        if m_a.rows() != dilation.dim_a() || m_a.cols() != dilation.dim_a() {
            return Err(Error::DimensionMismatch(format!("mA must be {0}×{0}", dilation.dim_a())));
        }
        if m_b.rows() != dilation.dim_b() || m_b.cols() != dilation.dim_b() {
            return Err(Error::DimensionMismatch(format!("mB must be {0}×{0}", dilation.dim_b())));
        }
        for (name, m) in [("mA", &m_a), ("mB", &m_b)] {
            let defect = m.hermiticity_defect();
            if defect > tol::HERMITICITY {
                return Err(Error::InvalidParameter(format!("{name} is not Hermitian (defect {defect:e})")));
            }
        }
        Ok(ConservedDilation { dilation, m_a, m_b, extremal })
    }

    pub fn dilation(&self) -> &StinespringDilation {
        &self.dilation
    }

    pub fn m_a(&self) -> &ComplexMatrix {
        &self.m_a
    }

    pub fn m_b(&self) -> &ComplexMatrix {
        &self.m_b
    }

    pub fn extremal(&self) -> Extremal {
        self.extremal
    }

    /// `mA⊗I + I⊗mB`.
    pub fn total_charge(&self) -> ComplexMatrix {
        let (da, db) = (self.dilation.dim_a(), self.dilation.dim_b());
        &kron(&self.m_a, &ComplexMatrix::identity(db)) + &kron(&ComplexMatrix::identity(da), &self.m_b)
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        self.dilation.to_channel()
    }
}

/// Outcome of checking the three hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    /// `‖[M_AB, U]‖_max`.
    pub commutator_norm: f64,
    /// `‖mB|φ⟩ − μ|φ⟩‖₂` with `μ = ⟨φ|mB|φ⟩`.
    pub bath_residual: f64,
    /// Distance from `μ` to the requested extremal eigenvalue of `mB`.
    pub extremal_offset: f64,
    /// Gap between the extremal eigenvalue and its nearest neighbour; `+∞`
    /// when `mB` is 1×1.
    pub extremal_gap: f64,
    /// Names of the failed hypotheses: `commutator`, `bath_eigenvector`,
    /// `extremal`, `degenerate`.
    pub failures: Vec<&'static str>,
}

impl ConservationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_conserved(cd: &ConservedDilation) -> Result<ConservationReport> {
    let u = cd.dilation.unitary();
    let commutator_norm = cd.total_charge().commutator(u).max_abs();

    let phi = cd.dilation.bath_state();
    let m_phi = cd.m_b.matvec(phi);
    let mu = inner(phi, &m_phi);
    let bath_residual = vec_norm(&m_phi.iter().zip(phi).map(|(a, b)| a - mu * b).collect::<Vec<_>>());

    let spectrum = hermitian_eig(&cd.m_b)?.real_eigenvalues();
    let (target, neighbour) = match cd.extremal {
        Extremal::Max => (spectrum[spectrum.len() - 1], spectrum.len().checked_sub(2).map(|i| spectrum[i])),
        Extremal::Min => (spectrum[0], spectrum.get(1).copied()),
    };
    let extremal_offset = (mu.re - target).abs();
    let extremal_gap = neighbour.map_or(f64::INFINITY, |n| (target - n).abs());

    let mut failures = Vec::new();
    if commutator_norm > tol::COMMUTATOR {
        failures.push("commutator");
    }
    if bath_residual > tol::EIG_RESIDUAL {
        failures.push("bath_eigenvector");
    }
    if extremal_offset > tol::CLUSTER {
        failures.push("extremal");
    }
    if extremal_gap <= tol::CLUSTER {
        failures.push("degenerate");
    }
    Ok(ConservationReport { commutator_norm, bath_residual, extremal_offset, extremal_gap, failures })
}

/// One product eigenvector `|ν⟩⊗|φ⟩` of the dilation unitary.
#[derive(Debug, Clone)]
pub struct FactorizingState {
    pub nu: Vec<C64>,
    pub eigenvalue: C64,
    /// `‖U(|ν⟩⊗|φ⟩) − λ|ν⟩⊗|φ⟩‖₂`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FactorizingEigenstateReport {
    pub count: usize,
    pub states: Vec<FactorizingState>,
    pub verdict: Verdict,
    /// Eigenvalues of `U` whose cluster had more than one member.
    pub degenerate_clusters: Vec<C64>,
}

/// Intersects each eigenspace of `U` with the slice `H_A⊗|φ⟩`.
///
/// Each cluster's eigenspace basis `Q` is projected to `(I⊗⟨φ|)Q`; singular
/// values above `1 − tol::SLICE` are directions lying in the slice, and the
/// matching left singular vectors are the `|ν⟩`.
pub fn find_factorizing_eigenstates(cd: &ConservedDilation) -> Result<FactorizingEigenstateReport> {
    let report = validate_conserved(cd)?;
    if !report.passed() {
        return Err(Error::Precondition(format!("hypotheses failed: {}", report.failures.join(", "))));
    }
    let d = &cd.dilation;
    let (da, db) = (d.dim_a(), d.dim_b());
    let u = d.unitary();
    let phi = d.bath_state();
    let eigenvalues = schur(u)?.eigenvalues();
    let identity = ComplexMatrix::identity(da * db);

    let mut states = Vec::new();
    let mut degenerate_clusters = Vec::new();
    for members in cluster(&eigenvalues, tol::CLUSTER) {
        let lambda: C64 = members.iter().map(|&i| eigenvalues[i]).sum::<C64>() / members.len() as f64;
        if members.len() > 1 {
            degenerate_clusters.push(lambda);
        }
        let (q, _) = null_space(&(u - &identity.scale(lambda)), members.len())?;
        let projected = ComplexMatrix::from_fn(da, q.cols(), |a, j| {
            (0..db).map(|b| phi[b].conj() * q[(a * db + b, j)]).sum()
        });
        let dec = svd(&projected)?;
        for (k, &sigma) in dec.s.iter().enumerate() {
            if sigma <= 1.0 - tol::SLICE {
                continue;
            }
            let mut nu = dec.u.column(k);
            let nrm = vec_norm(&nu);
            for z in nu.iter_mut() {
                *z /= nrm;
            }
            fix_phase(&mut nu);
            let product = kron_vec(&nu, phi);
            let image = u.matvec(&product);
            let residual = vec_norm(&image.iter().zip(&product).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
            if residual > 1e-8 {
                return Err(Error::Inconsistency(format!(
                    "slice direction for λ = {lambda} is not an eigenvector (residual {residual:e})"
                )));
            }
            states.push(FactorizingState { nu, eigenvalue: lambda, residual });
        }
    }
    let count = states.len();
    let verdict = match count {
        0 => {
            return Err(Error::Inconsistency("no factorizing eigenstate, but one must exist".into()));
        }
        1 => Verdict::Mixing,
        _ => Verdict::NotErgodic,
    };
    Ok(FactorizingEigenstateReport { count, states, verdict, degenerate_clusters })
}

/// Makes the largest-modulus entry real and positive.
fn fix_phase(v: &mut [C64]) {
    let pivot = v.iter().copied().fold(C64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { z } else { best });
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub factorizing: FactorizingEigenstateReport,
    pub spectral: SpectralReport,
    pub agree: bool,
    /// `‖ρ* − |ν⟩⟨ν|‖₁` when both routes say mixing.
    pub fixed_point_distance: Option<f64>,
    /// `max_k ‖τ(|ν_k⟩⟨ν_k|) − |ν_k⟩⟨ν_k|‖₁`.
    pub max_fixed_point_residual: f64,
    pub message: Option<String>,
}

/// Runs the factorizing count and the spectral classification on the same
/// instance and compares them.
pub fn cross_validate(cd: &ConservedDilation) -> Result<ConsistencyReport> {
    let factorizing = find_factorizing_eigenstates(cd)?;
    let channel = cd.to_channel()?;
    let spectral = analyze_channel(&channel)?;

    let mut max_fixed_point_residual: f64 = 0.0;
    for s in &factorizing.states {
        let rho = DensityMatrix::pure(&s.nu)?;
        max_fixed_point_residual = max_fixed_point_residual.max(channel.apply(&rho)?.distance(&rho)?);
    }

    let mut agree = factorizing.verdict == spectral.verdict;
    let mut message = None;
    let mut fixed_point_distance = None;
    if agree && factorizing.verdict == Verdict::Mixing {
        let nu = DensityMatrix::pure(&factorizing.states[0].nu)?;
        let dist = spectral.fixed_point().expect("mixing report carries its fixed point").distance(&nu)?;
        fixed_point_distance = Some(dist);
        if dist > tol::CLUSTER {
            agree = false;
            message = Some(format!("fixed points differ by {dist:e}"));
        }
    } else if !agree {
        message = Some(format!(
            "factorizing count {} says {}, spectrum says {}",
            factorizing.count, factorizing.verdict, spectral.verdict
        ));
    }
    Ok(ConsistencyReport { factorizing, spectral, agree, fixed_point_distance, max_fixed_point_residual, message })
}

/// One-step change of the bath charge,
/// `Tr[mB · Tr_A U(ρ⊗φφ†)U†] − ⟨φ|mB|φ⟩`. Non-positive for a maximal
/// bath eigenvalue, non-negative for a minimal one.
pub fn bath_outflow(cd: &ConservedDilation, rho: &DensityMatrix) -> Result<f64> {
    let joint = cd.dilation.joint_output(rho.matrix())?;
    let bath = partial_trace(&joint, cd.dilation.dim_a(), cd.dilation.dim_b(), Keep::B)?;
    let phi = cd.dilation.bath_state();
    let before = inner(phi, &cd.m_b.matvec(phi)).re;
    Ok((&cd.m_b * &bath).trace().re - before)
}

/// `Tr[mA ρ]`.
pub fn system_charge(cd: &ConservedDilation, rho: &DensityMatrix) -> f64 {
    (&cd.m_a * rho.matrix()).trace().re
}

/// Sign the bath outflow must have: `-1` for `Max`, `+1` for `Min`.
pub fn outflow_sign(extremal: Extremal) -> f64 {
    match extremal {
        Extremal::Max => -1.0,
        Extremal::Min => 1.0,
    }
}
