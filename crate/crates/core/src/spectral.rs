//! Peripheral-spectrum classification.
//!
//! A channel is mixing iff its only peripheral eigenvalue is 1 and that
//! eigenvalue is simple; it is ergodic iff eigenvalue 1 alone is simple.
//! Peripheral means `|λ| > 1 − tol::PERIPHERAL`; multiplicities are counted
//! by clustering within `tol::CLUSTER`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::{DensityMatrix, KrausChannel, Superoperator};
use crate::error::{Error, Result};
use crate::opalg::{
    cluster, general_eig, hermitian_eig, null_space, psd_sqrt, trace_norm, trace_product, vec_norm, ComplexMatrix,
    C64,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Mixing,
    ErgodicNotMixing,
    NotErgodic,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Mixing => "mixing",
            Verdict::ErgodicNotMixing => "ergodic_not_mixing",
            Verdict::NotErgodic => "not_ergodic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mixing" => Some(Verdict::Mixing),
            "ergodic_not_mixing" => Some(Verdict::ErgodicNotMixing),
            "not_ergodic" => Some(Verdict::NotErgodic),
            _ => None,
        }
    }

    pub fn is_mixing(self) -> bool {
        self == Verdict::Mixing
    }

    pub fn is_ergodic(self) -> bool {
        self != Verdict::NotErgodic
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An eigenoperator of the superoperator for a peripheral eigenvalue,
/// normalized to unit Hilbert–Schmidt norm.
#[derive(Debug, Clone)]
pub struct PeripheralMode {
    pub eigenvalue: C64,
    pub operator: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub dim: usize,
    /// Full superoperator spectrum with multiplicity, sorted by decreasing modulus.
    pub spectrum: Vec<C64>,
    pub peripheral: Vec<C64>,
    /// Largest modulus among non-peripheral eigenvalues, 0 if there are none.
    pub kappa: f64,
    pub eigenvalue_one_multiplicity: usize,
    /// The unique fixed state when the channel is ergodic; empty otherwise.
    pub fixed_points: Vec<DensityMatrix>,
    /// Hermitian basis of the fixed-point space when it is not one-dimensional.
    pub fixed_point_candidates: Vec<ComplexMatrix>,
    pub verdict: Verdict,
    /// `Tr ρ*²` of the unique fixed state.
    pub fixed_point_purity: Option<f64>,
    pub peripheral_modes: Vec<PeripheralMode>,
    /// Largest eigenpair residual from the Schur solver.
    pub eigen_residual: f64,
    /// Set when an eigenvalue sits just outside the eigenvalue-1 cluster
    /// (`1e-7 ≤ |λ − 1| < 1e-5`), where the multiplicity count is fragile.
    pub near_degenerate_one: bool,
}

impl SpectralReport {
    pub fn fixed_point(&self) -> Option<&DensityMatrix> {
        self.fixed_points.first()
    }

    /// `max |λ|` over the whole spectrum.
    pub fn spectral_radius(&self) -> f64 {
        self.spectrum.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Classifies a channel from its superoperator.
pub fn analyze(s: &Superoperator) -> Result<SpectralReport> {
    let dim = s.dim();
    let m = s.matrix();
    let es = general_eig(m)?;
    let mut spectrum = es.eigenvalues.clone();
    spectrum.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im)));

    let one = C64::new(1.0, 0.0);
    let is_peripheral = |z: &C64| z.norm() > 1.0 - tol::PERIPHERAL;
    let peripheral: Vec<C64> = spectrum.iter().copied().filter(is_peripheral).collect();
    let kappa = spectrum.iter().filter(|z| !is_peripheral(z)).fold(0.0, |k: f64, z| k.max(z.norm()));
    let multiplicity = spectrum.iter().filter(|z| (*z - one).norm() < tol::CLUSTER).count();
    let near_degenerate_one = spectrum.iter().any(|z| {
        let d = (z - one).norm();
        (tol::CLUSTER..1e-5).contains(&d)
    });
    if multiplicity == 0 {
        return Err(Error::Inconsistency("no eigenvalue within tolerance of 1".into()));
    }

    let only_one_peripheral = peripheral.iter().all(|z| (z - one).norm() < tol::CLUSTER);
    let verdict = match (multiplicity, only_one_peripheral) {
        (1, true) => Verdict::Mixing,
        (1, false) => Verdict::ErgodicNotMixing,
        _ => Verdict::NotErgodic,
    };

    let shifted = m - &ComplexMatrix::identity(dim * dim);
    let (basis, _) = null_space(&shifted, multiplicity)?;
    let mut fixed_points = Vec::new();
    let mut fixed_point_candidates = Vec::new();
    if multiplicity == 1 {
        let rho = fixed_state_from_eigenvector(&basis.column(0), dim)?;
        fixed_points.push(rho);
    } else {
        fixed_point_candidates = hermitian_basis(&basis, dim, multiplicity);
    }
    let fixed_point_purity = fixed_points.first().map(DensityMatrix::purity);

    let peripheral_modes = peripheral_modes(m, dim, &peripheral)?;

    Ok(SpectralReport {
        dim,
        spectrum,
        peripheral,
        kappa,
        eigenvalue_one_multiplicity: multiplicity,
        fixed_points,
        fixed_point_candidates,
        verdict,
        fixed_point_purity,
        peripheral_modes,
        eigen_residual: es.residual,
        near_degenerate_one,
    })
}

/// Convenience wrapper: `analyze(c.to_superoperator())`.
pub fn analyze_channel(c: &KrausChannel) -> Result<SpectralReport> {
    analyze(&c.to_superoperator())
}

/// Devectorize, fix the global phase through the trace, Hermitize, check
/// positivity and normalize.
fn fixed_state_from_eigenvector(v: &[C64], dim: usize) -> Result<DensityMatrix> {
    let theta = ComplexMatrix::devectorize(v, dim);
    let tr = theta.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Inconsistency("eigenvalue-1 eigenvector is traceless".into()));
    }
    let aligned = theta.scale(tr.conj() / tr.norm()).hermitian_part();
    let normalized = aligned.scale_real(1.0 / aligned.trace().re);
    let es = hermitian_eig(&normalized)?;
    let values = es.real_eigenvalues();
    if values[0] < -tol::FIXED_POINT_PSD {
        return Err(Error::Inconsistency(format!(
            "fixed-point candidate has eigenvalue {:e}",
            values[0]
        )));
    }
    if values[0] >= -tol::PSD_CLIP {
        return DensityMatrix::new(normalized);
    }
    let clipped: Vec<f64> = values.iter().map(|x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let scaled: Vec<f64> = clipped.iter().map(|x| x / total).collect();
    let v = &es.eigenvectors;
    DensityMatrix::new(&(v * &ComplexMatrix::diag_real(&scaled)) * &v.dagger())
}

/// Hermitian, Hilbert–Schmidt orthonormal basis of a †-closed operator space
/// spanned by the devectorized columns of `basis`.
fn hermitian_basis(basis: &ComplexMatrix, dim: usize, count: usize) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(count);
    let half_i = C64::new(0.0, -0.5);
    for j in 0..basis.cols() {
        let theta = ComplexMatrix::devectorize(&basis.column(j), dim);
        let herm = theta.hermitian_part();
        let anti = (&theta - &theta.dagger()).scale(half_i);
        for mut cand in [herm, anti] {
            for _ in 0..2 {
                for b in &out {
                    let proj = trace_product(b, &cand).re;
                    cand = &cand - &b.scale_real(proj);
                }
            }
            let nrm = cand.frobenius_norm();
            if nrm > 1e-8 && out.len() < count {
                out.push(cand.scale_real(1.0 / nrm).hermitian_part());
            }
        }
    }
    out
}

fn peripheral_modes(m: &ComplexMatrix, dim: usize, peripheral: &[C64]) -> Result<Vec<PeripheralMode>> {
    let mut modes = Vec::new();
    for members in cluster(peripheral, tol::CLUSTER) {
        let mean: C64 = members.iter().map(|&i| peripheral[i]).sum::<C64>() / members.len() as f64;
        let shifted = m - &ComplexMatrix::identity(dim * dim).scale(mean);
        let (basis, _) = null_space(&shifted, members.len())?;
        for j in 0..basis.cols() {
            let col = basis.column(j);
            let nrm = vec_norm(&col);
            let operator = ComplexMatrix::devectorize(&col, dim).scale_real(1.0 / nrm);
            modes.push(PeripheralMode { eigenvalue: mean, operator });
        }
    }
    Ok(modes)
}

/// `C_N · nᴺ · κⁿ` with `N = dim(H)`; only meaningful for mixing channels.
pub fn convergence_bound(report: &SpectralReport, n: u32, c_n: f64) -> Result<f64> {
    if !report.verdict.is_mixing() {
        return Err(Error::Precondition(format!(
            "convergence bound needs a mixing channel, verdict is {}",
            report.verdict
        )));
    }
    if n == 0 {
        return Ok(c_n * if report.dim == 0 { 1.0 } else { 0.0 });
    }
    Ok(c_n * (n as f64).powi(report.dim as i32) * report.kappa.powi(n as i32))
}

/// First-step calibration of `C_N`: measured distance at `n = 1` divided by
/// the bound template at `n = 1`.
pub fn calibrate_constant(report: &SpectralReport, distance_at_one: f64) -> Result<f64> {
    let template = convergence_bound(report, 1, 1.0)?;
    if template <= 0.0 {
        return Err(Error::Precondition(
            "spectral gap is total (κ = 0): convergence is finite-step, nothing to calibrate".into(),
        ));
    }
    Ok(distance_at_one / template)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEstimate {
    /// `exp(slope)` of the least-squares fit of `ln ‖τⁿρ − ρ*‖₁` against `n`.
    pub empirical_rate: f64,
    pub kappa: f64,
    /// Inclusive window actually used for the fit.
    pub n_range: (usize, usize),
}

/// Default fit window `[max(5, 2·dim), 50]`, past the polynomial transient.
pub fn default_fit_window(dim: usize) -> (usize, usize) {
    (5.max(2 * dim), 50)
}

/// Fits the asymptotic decay rate of `‖τⁿρ₀ − ρ*‖₁`.
///
/// Distances below `tol::DISTANCE_FLOOR` are past numerical resolution; the
/// window is cut before the first such point, and the fit fails if fewer
/// than three points remain.
pub fn estimate_rate(c: &KrausChannel, rho0: &DensityMatrix, n_min: usize, n_max: usize) -> Result<ConvergenceEstimate> {
    if n_max <= n_min {
        return Err(Error::InvalidParameter(format!("empty window [{n_min}, {n_max}]")));
    }
    let report = analyze_channel(c)?;
    if !report.verdict.is_mixing() {
        return Err(Error::Precondition(format!("rate estimate needs a mixing channel, verdict is {}", report.verdict)));
    }
    if report.kappa <= 0.0 {
        return Err(Error::Precondition("κ = 0: convergence is finite-step, no exponential rate".into()));
    }
    let fixed = report.fixed_point().expect("mixing report carries its fixed point");
    let mut state = rho0.clone();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for n in 0..=n_max {
        if n >= n_min {
            let d = state.distance(fixed)?;
            if d < tol::DISTANCE_FLOOR {
                break;
            }
            points.push((n as f64, d.ln()));
        }
        if n < n_max {
            state = c.apply(&state)?;
        }
    }
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "only {} distances above the resolution floor in [{n_min}, {n_max}]",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let last = points.last().map(|p| p.0 as usize).unwrap_or(n_min);
    Ok(ConvergenceEstimate { empirical_rate: slope.exp(), kappa: report.kappa, n_range: (n_min, last) })
}

/// What the pure-fixed-point theorem says about a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShortcutOutcome {
    /// Not applicable: no unique fixed state, or the fixed state is mixed.
    Silent,
    /// Ergodic with a pure fixed state, and the spectrum agrees it is mixing.
    ConfirmsMixing,
    /// Ergodic with a pure fixed state but the spectrum says not mixing:
    /// impossible in exact arithmetic, so a numerical failure.
    Inconsistent,
}

/// An ergodic channel with a pure fixed state is mixing.
pub fn purely_ergodic_shortcut(report: &SpectralReport) -> ShortcutOutcome {
    match (report.verdict, report.fixed_point_purity) {
        (Verdict::NotErgodic, _) | (_, None) => ShortcutOutcome::Silent,
        (_, Some(p)) if p < 1.0 - tol::PURE => ShortcutOutcome::Silent,
        (Verdict::Mixing, _) => ShortcutOutcome::ConfirmsMixing,
        (Verdict::ErgodicNotMixing, _) => ShortcutOutcome::Inconsistent,
    }
}

/// `‖ΘΘ† − Θ†Θ‖_max` for every peripheral eigenoperator of an ergodic channel.
pub fn peripheral_normality_check(c: &KrausChannel, report: &SpectralReport) -> Result<Vec<(C64, f64)>> {
    if !report.verdict.is_ergodic() {
        return Err(Error::Precondition("normality of peripheral eigenvectors needs an ergodic channel".into()));
    }
    let modes = if report.peripheral_modes.is_empty() {
        peripheral_modes(c.to_superoperator().matrix(), c.dim(), &report.peripheral)?
    } else {
        report.peripheral_modes.clone()
    };
    Ok(modes.iter().map(|m| (m.eigenvalue, m.operator.normality_defect())).collect())
}

/// The two fixed states obtained from a peripheral eigenoperator through its
/// polar decompositions.
#[derive(Debug, Clone)]
pub struct PolarFixedPoints {
    /// `√(ΘΘ†) / g`.
    pub left: DensityMatrix,
    /// `√(Θ†Θ) / g`.
    pub right: DensityMatrix,
    /// `‖τ(left) − left‖₁`.
    pub left_residual: f64,
    /// `‖τ(right) − right‖₁`.
    pub right_residual: f64,
}

/// From an eigenoperator `Θ` with peripheral eigenvalue `λ`, builds
/// `√(ΘΘ†)/g` and `√(Θ†Θ)/g` with `g = ‖Θ‖₁`. Both are fixed states.
pub fn polar_fixed_point(c: &KrausChannel, theta: &ComplexMatrix, lambda: C64) -> Result<PolarFixedPoints> {
    let dim = c.dim();
    if theta.rows() != dim || theta.cols() != dim {
        return Err(Error::DimensionMismatch("eigenoperator does not match channel dimension".into()));
    }
    if lambda.norm() < 1.0 - tol::PERIPHERAL {
        return Err(Error::Precondition(format!("|λ| = {} is not peripheral", lambda.norm())));
    }
    let hs = theta.frobenius_norm();
    if hs <= 1e-10 {
        return Err(Error::Precondition("zero eigenoperator".into()));
    }
    let image = c.apply_operator(theta)?;
    let residual = (&image - &theta.scale(lambda)).frobenius_norm() / hs;
    if residual > tol::PERIPHERAL {
        return Err(Error::Precondition(format!("Θ is not an eigenoperator for λ (residual {residual:e})")));
    }
    let g = trace_norm(theta)?;
    if g <= 1e-10 {
        return Err(Error::Precondition("trace norm of Θ vanishes".into()));
    }
    let left = DensityMatrix::new(psd_sqrt(&(theta * &theta.dagger()))?.scale_real(1.0 / g))?;
    let right = DensityMatrix::new(psd_sqrt(&(&theta.dagger() * theta))?.scale_real(1.0 / g))?;
    let left_residual = c.apply(&left)?.distance(&left)?;
    let right_residual = c.apply(&right)?.distance(&right)?;
    Ok(PolarFixedPoints { left, right, left_residual, right_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::pauli;
    use crate::random::{haar_unitary, rng};
    use crate::zoo;

    fn approx(z: C64, re: f64, im: f64, tol: f64) -> bool {
        (z - C64::new(re, im)).norm() < tol
    }

    #[test]
    fn example_ergodic_report() {
        let r = analyze_channel(&zoo::example_ergodic()).unwrap();
        assert_eq!(r.verdict, Verdict::ErgodicNotMixing);
        assert_eq!(r.peripheral.len(), 2);
        assert!(approx(r.peripheral[0], 1.0, 0.0, 1e-8));
        assert!(approx(r.peripheral[1], -1.0, 0.0, 1e-8));
        assert!(r.fixed_point().unwrap().matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-9));
        assert_eq!(r.kappa, 0.0);
        assert_eq!(r.fixed_point_purity.map(|p| (p * 1e9).round() / 1e9), Some(0.5));
    }

    #[test]
    fn example_mixing_report() {
        let r = analyze_channel(&zoo::example_mixing()).unwrap();
        assert_eq!(r.verdict, Verdict::Mixing);
        assert!(r.fixed_point().unwrap().matrix().approx_eq(&ComplexMatrix::basis_projector(3, 0), 1e-9));
        // nilpotent off the fixed point: every other eigenvalue is 0
        assert!(r.kappa < 1e-7, "kappa {}", r.kappa);
        assert_eq!(r.spectrum.len(), 9);
    }

    #[test]
    fn identity_report() {
        let r = analyze_channel(&KrausChannel::identity(2)).unwrap();
        assert_eq!(r.verdict, Verdict::NotErgodic);
        assert_eq!(r.eigenvalue_one_multiplicity, 4);
        assert!(r.fixed_points.is_empty());
        assert_eq!(r.fixed_point_candidates.len(), 4);
        for cand in &r.fixed_point_candidates {
            assert!(cand.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn dephasing_fixed_space_is_diagonal() {
        let r = analyze_channel(&zoo::dephasing(1.0).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotErgodic);
        assert_eq!(r.eigenvalue_one_multiplicity, 2);
        for cand in &r.fixed_point_candidates {
            assert!(cand[(0, 1)].norm() < 1e-10);
        }
    }

    #[test]
    fn bound_arithmetic() {
        let mut r = analyze_channel(&zoo::depolarizing(0.5).unwrap()).unwrap();
        assert!((r.kappa - 0.5).abs() < 1e-12);
        r.dim = 2;
        r.kappa = 0.5;
        let b = convergence_bound(&r, 10, 1.0).unwrap();
        assert!((b - 100.0 * 0.5f64.powi(10)).abs() < 1e-15);
        r.kappa = 0.0;
        assert_eq!(convergence_bound(&r, 3, 7.0).unwrap(), 0.0);
        assert!(calibrate_constant(&r, 1.0).is_err());
        let not_mixing = analyze_channel(&zoo::example_ergodic()).unwrap();
        assert!(convergence_bound(&not_mixing, 1, 1.0).is_err());
    }

    #[test]
    fn calibrated_bound_dominates_depolarizing_orbit() {
        let c = zoo::depolarizing(0.5).unwrap();
        let r = analyze_channel(&c).unwrap();
        let fixed = r.fixed_point().unwrap().clone();
        let mut state = DensityMatrix::basis(2, 0).unwrap();
        let mut distances = Vec::new();
        for _ in 0..=100 {
            distances.push(state.distance(&fixed).unwrap());
            state = c.apply(&state).unwrap();
        }
        let c_n = calibrate_constant(&r, distances[1]).unwrap();
        for (n, &d) in distances.iter().enumerate().skip(1) {
            let b = convergence_bound(&r, n as u32, c_n).unwrap();
            assert!(d <= b.max(tol::DISTANCE_FLOOR), "n={n}: {d} > {b}");
        }
    }

    #[test]
    fn rate_estimates() {
        let c = zoo::depolarizing(0.5).unwrap();
        let est = estimate_rate(&c, &DensityMatrix::basis(2, 0).unwrap(), 5, 30).unwrap();
        assert!((est.empirical_rate - 0.5).abs() <= 0.025);
        let damp = zoo::amplitude_damping(0.5).unwrap();
        let kappa = analyze_channel(&damp).unwrap().kappa;
        // |+⟩ excites the slowest (coherence) mode
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let (lo, hi) = default_fit_window(2);
        let est = estimate_rate(&damp, &plus, lo, hi).unwrap();
        assert!((est.empirical_rate - kappa).abs() <= 0.05 * kappa, "{} vs {kappa}", est.empirical_rate);
        let unitary = zoo::unitary_rotation(1.0).unwrap();
        assert!(matches!(estimate_rate(&unitary, &plus, 5, 30), Err(Error::Precondition(_))));
    }

    #[test]
    fn shortcut_cases() {
        for gamma in [0.3, 0.7] {
            let r = analyze_channel(&zoo::amplitude_damping(gamma).unwrap()).unwrap();
            assert_eq!(purely_ergodic_shortcut(&r), ShortcutOutcome::ConfirmsMixing);
            // spectrum {1, 1 − γ, √(1 − γ) twice}
            assert!((r.kappa - (1.0 - gamma).sqrt()).abs() < 1e-12);
        }
        let r = analyze_channel(&zoo::example_ergodic()).unwrap();
        assert_eq!(purely_ergodic_shortcut(&r), ShortcutOutcome::Silent);
        let r = analyze_channel(&zoo::example_mixing()).unwrap();
        assert_eq!(purely_ergodic_shortcut(&r), ShortcutOutcome::ConfirmsMixing);
        let mut forged = r.clone();
        forged.verdict = Verdict::ErgodicNotMixing;
        assert_eq!(purely_ergodic_shortcut(&forged), ShortcutOutcome::Inconsistent);
    }

    #[test]
    fn normality_of_peripheral_modes() {
        let c = zoo::example_ergodic();
        let r = analyze_channel(&c).unwrap();
        let defects = peripheral_normality_check(&c, &r).unwrap();
        assert_eq!(defects.len(), 2);
        assert!(defects.iter().all(|(_, d)| *d < 1e-12));
        // the λ = −1 mode is ∝ σz
        let minus = r.peripheral_modes.iter().find(|m| m.eigenvalue.re < 0.0).unwrap();
        let ratio = minus.operator[(1, 1)] / minus.operator[(0, 0)];
        assert!(approx(ratio, -1.0, 0.0, 1e-12));
        let m = zoo::amplitude_damping(0.3).unwrap();
        let r = analyze_channel(&m).unwrap();
        assert_eq!(peripheral_normality_check(&m, &r).unwrap().len(), 1);
        let id = KrausChannel::identity(2);
        assert!(peripheral_normality_check(&id, &analyze_channel(&id).unwrap()).is_err());
    }

    #[test]
    fn polar_fixed_points_of_example_ergodic() {
        let c = zoo::example_ergodic();
        let pf = polar_fixed_point(&c, &pauli::z(), C64::new(-1.0, 0.0)).unwrap();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(pf.left.matrix().approx_eq(&half, 1e-12));
        assert!(pf.right.matrix().approx_eq(&half, 1e-12));
        assert!(pf.left_residual <= 1e-9);
        // Θ = ρ* with λ = 1 returns ρ* twice
        let m = zoo::amplitude_damping(0.3).unwrap();
        let rho = analyze_channel(&m).unwrap().fixed_points[0].clone();
        let pf = polar_fixed_point(&m, rho.matrix(), C64::new(1.0, 0.0)).unwrap();
        assert!(pf.left.matrix().approx_eq(rho.matrix(), 1e-9));
        assert!(pf.right.matrix().approx_eq(rho.matrix(), 1e-9));
        // preconditions
        assert!(polar_fixed_point(&c, &pauli::x(), C64::new(-1.0, 0.0)).is_err());
        assert!(polar_fixed_point(&c, &pauli::z(), C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn random_unital_ergodic_channel_modes_are_normal() {
        // conjugating the decohere-and-flip channel by a Haar unitary keeps it
        // ergodic, unital and non-mixing
        for seed in 0..5 {
            let mut r = rng(seed);
            let u = haar_unitary(&mut r, 2);
            let base = zoo::example_ergodic();
            let ops = base.kraus_ops().iter().map(|k| &(&u * k) * &u.dagger()).collect();
            let c = KrausChannel::new(ops, None).unwrap();
            let rep = analyze_channel(&c).unwrap();
            assert_eq!(rep.verdict, Verdict::ErgodicNotMixing);
            for (_, d) in peripheral_normality_check(&c, &rep).unwrap() {
                assert!(d <= 1e-7);
            }
            for mode in &rep.peripheral_modes {
                let pf = polar_fixed_point(&c, &mode.operator, mode.eigenvalue).unwrap();
                assert!(pf.left.distance(rep.fixed_point().unwrap()).unwrap() < 1e-7);
                assert!(pf.right.distance(rep.fixed_point().unwrap()).unwrap() < 1e-7);
            }
        }
    }

    #[test]
    fn spectral_radius_is_one_across_zoo() {
        for c in zoo::catalog_channels().unwrap() {
            let r = analyze_channel(&c).unwrap();
            assert!((r.spectral_radius() - 1.0).abs() < 1e-7);
        }
    }
}
