//! Orbits and the functional criteria built on them.
//!
//! Functionals are oriented so that the direction a channel can only push
//! them is upward: the distance to the fixed point and the relative entropy
//! to the fixed point enter negated, the von Neumann entropy of a unital
//! channel enters as is. Raw values are kept alongside.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::{DensityMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::opalg::{hermitian_eig, log_on_support, trace_distance, ComplexMatrix};
use crate::random::{haar_state, rng};
use crate::spectral::analyze_channel;
use crate::tol;

/// Changes smaller than this are treated as no change.
const STRICT: f64 = 1e-9;
/// Minimum gap between horizon and initial value counted as evidence.
const GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Functional {
    /// `‖ρ − ρ*‖₁`.
    TrivialLyapunov,
    /// `H(ρ, ρ*)`.
    RelativeEntropy,
    /// `S(ρ)`.
    VonNeumannEntropy,
}

impl Functional {
    pub const ALL: [Functional; 3] = [Functional::TrivialLyapunov, Functional::RelativeEntropy, Functional::VonNeumannEntropy];

    pub fn name(self) -> &'static str {
        match self {
            Functional::TrivialLyapunov => "trivial_lyapunov",
            Functional::RelativeEntropy => "relative_entropy",
            Functional::VonNeumannEntropy => "von_neumann_entropy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// `+1` if the channel can only increase the raw value, `−1` if it can
    /// only decrease it.
    pub fn orientation(self) -> f64 {
        match self {
            Functional::VonNeumannEntropy => 1.0,
            _ => -1.0,
        }
    }

    pub fn needs_fixed_point(self) -> bool {
        self != Functional::VonNeumannEntropy
    }

    /// Raw value at `rho`; `fixed` is required for the two functionals
    /// measured against the fixed point.
    pub fn evaluate(self, rho: &DensityMatrix, fixed: Option<&DensityMatrix>) -> Result<f64> {
        let need = || Error::Precondition(format!("{} needs a unique fixed point", self.name()));
        match self {
            Functional::TrivialLyapunov => trivial_lyapunov(rho, fixed.ok_or_else(need)?),
            Functional::RelativeEntropy => relative_entropy(rho, fixed.ok_or_else(need)?),
            Functional::VonNeumannEntropy => von_neumann_entropy(rho),
        }
    }
}

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("states of dimension {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `‖ρ − ρ*‖₁`.
pub fn trivial_lyapunov(rho: &DensityMatrix, fixed_point: &DensityMatrix) -> Result<f64> {
    check_dims(rho, fixed_point)?;
    rho.distance(fixed_point)
}

/// `Tr ρ(ln ρ − ln σ)` in nats; `+∞` when `ρ` has weight above `tol::TRACE`
/// outside the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let (log_sigma, support) = log_on_support(sigma.matrix(), tol::SUPPORT)?;
    let leak = 1.0 - (rho.matrix() * &support).trace().re;
    if leak > tol::TRACE {
        return Ok(f64::INFINITY);
    }
    let cross = (rho.matrix() * &log_sigma).trace().re;
    Ok((-von_neumann_entropy(rho)? - cross).max(0.0))
}

/// `−Σ p ln p` over eigenvalues above `tol::SUPPORT`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let es = hermitian_eig(rho.matrix())?;
    Ok(es.real_eigenvalues().iter().filter(|&&p| p > tol::SUPPORT).map(|p| -p * p.ln()).sum())
}

#[derive(Debug, Clone)]
pub struct OrbitTrace {
    /// `ρ, τρ, …, τⁿρ`.
    pub states: Vec<DensityMatrix>,
    /// Raw functional values per state, in request order.
    pub functional_values: Vec<(Functional, Vec<f64>)>,
    /// `‖τᵏρ − ρ*‖₁` when the fixed point is unique.
    pub distances: Option<Vec<f64>>,
    pub fixed_point: Option<DensityMatrix>,
    pub n_steps: usize,
}

impl OrbitTrace {
    pub fn values(&self, f: Functional) -> Option<&[f64]> {
        self.functional_values.iter().find(|(g, _)| *g == f).map(|(_, v)| v.as_slice())
    }
}

/// Iterates `τ` `n` times from `rho0`, evaluating each requested functional
/// on every state. `n = 0` returns the initial state alone.
pub fn orbit(c: &KrausChannel, rho0: &DensityMatrix, n: usize, functionals: &[Functional]) -> Result<OrbitTrace> {
    if rho0.dim() != c.dim() {
        return Err(Error::DimensionMismatch(format!("state of dimension {} for a channel on {}", rho0.dim(), c.dim())));
    }
    let report = analyze_channel(c)?;
    let fixed_point = report.fixed_point().cloned();
    if fixed_point.is_none() {
        if let Some(f) = functionals.iter().find(|f| f.needs_fixed_point()) {
            return Err(Error::Precondition(format!("{} needs a unique fixed point, the channel has none", f.name())));
        }
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(rho0.clone());
    for k in 0..n {
        let next = c.apply(&states[k])?;
        states.push(next);
    }
    let mut functional_values = Vec::with_capacity(functionals.len());
    for &f in functionals {
        let values = states.iter().map(|s| f.evaluate(s, fixed_point.as_ref())).collect::<Result<Vec<_>>>()?;
        functional_values.push((f, values));
    }
    let distances = match &fixed_point {
        Some(fp) => Some(states.iter().map(|s| s.distance(fp)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    Ok(OrbitTrace { states, functional_values, distances, fixed_point, n_steps: n })
}

/// Per-state outcome of a Lyapunov check.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// `max_k (s_k − s_{k+1})⁺` on oriented values.
    pub monotone_defect: f64,
    /// `|S(τⁿρ) − S(ρ)|`.
    pub limit_gap: f64,
    /// Smallest `k ≥ 1` with `|S(τᵏρ) − S(ρ)| > 1e-9`.
    pub n_strict: Option<usize>,
    /// Spread of the values over the trailing 10% of the orbit.
    pub tail_spread: f64,
    pub initial_value: f64,
    pub horizon_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovVerdict {
    pub functional: Functional,
    /// Largest defect over the evaluated trial states.
    pub monotone_defect: f64,
    /// Smallest limit gap over the evaluated trial states.
    pub limit_gap: f64,
    /// Largest `n_strict` over the evaluated trial states; `None` if some
    /// state never changed.
    pub n_strict: Option<usize>,
    pub is_generalized_lyapunov_evidence: bool,
    /// One entry per trial state; `None` for states fixed by the channel.
    pub trials: Vec<Option<TrialOutcome>>,
    pub notes: Vec<String>,
}

/// Checks a functional along orbits of `trial_states` up to horizon `n`.
///
/// Evidence requires, for every trial state not fixed by the channel, a
/// defect at most `1e-9`, a limit gap above `1e-6`, and a tail that has
/// settled within `1e-6`. Trial states with `‖τρ − ρ‖₁ ≤ 1e-9` are skipped.
pub fn verify_generalized_lyapunov(
    c: &KrausChannel,
    functional: Functional,
    trial_states: &[DensityMatrix],
    n: usize,
) -> Result<LyapunovVerdict> {
    if n == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let report = analyze_channel(c)?;
    let fixed = report.fixed_point().cloned();
    match functional {
        Functional::TrivialLyapunov | Functional::RelativeEntropy if fixed.is_none() => {
            return Err(Error::Precondition(format!(
                "{} needs a unique fixed point, verdict is {}",
                functional.name(),
                report.verdict
            )));
        }
        Functional::RelativeEntropy => {
            let min_eig = hermitian_eig(fixed.as_ref().unwrap().matrix())?.real_eigenvalues()[0];
            if min_eig <= tol::SUPPORT {
                return Err(Error::Precondition(format!(
                    "hypothesis violated: fixed point is not faithful (smallest eigenvalue {min_eig:e})"
                )));
            }
        }
        Functional::VonNeumannEntropy if !c.is_unital(tol::TRACE) => {
            return Err(Error::Precondition("hypothesis violated: von Neumann entropy needs a unital channel".into()));
        }
        _ => {}
    }

    let sign = functional.orientation();
    let tail = (n / 10).max(1);
    let mut trials = Vec::with_capacity(trial_states.len());
    for rho in trial_states {
        if c.apply(rho)?.distance(rho)? <= STRICT {
            trials.push(None);
            continue;
        }
        let trace = orbit_values(c, rho, n, functional, fixed.as_ref())?;
        let oriented: Vec<f64> = trace.iter().map(|v| sign * v).collect();
        let monotone_defect = oriented.windows(2).fold(0.0, |m: f64, w| m.max(w[0] - w[1]));
        let initial_value = trace[0];
        let horizon_value = trace[n];
        let n_strict = (1..=n).find(|&k| (trace[k] - initial_value).abs() > STRICT);
        let window = &trace[n - tail..];
        let tail_spread = window.iter().fold(f64::NEG_INFINITY, |m: f64, &v| m.max(v))
            - window.iter().fold(f64::INFINITY, |m: f64, &v| m.min(v));
        trials.push(Some(TrialOutcome {
            monotone_defect,
            limit_gap: (horizon_value - initial_value).abs(),
            n_strict,
            tail_spread,
            initial_value,
            horizon_value,
        }));
    }

    let evaluated: Vec<&TrialOutcome> = trials.iter().flatten().collect();
    let mut notes = Vec::new();
    if evaluated.is_empty() {
        notes.push(String::from("every trial state is fixed by the channel; nothing to test"));
    }
    let monotone_defect = evaluated.iter().fold(0.0, |m: f64, t| m.max(t.monotone_defect));
    let limit_gap = evaluated.iter().fold(f64::INFINITY, |m: f64, t| m.min(t.limit_gap));
    let limit_gap = if evaluated.is_empty() { 0.0 } else { limit_gap };
    let n_strict = evaluated.iter().map(|t| t.n_strict).try_fold(0usize, |m, k| k.map(|k| m.max(k)));
    let n_strict = if evaluated.is_empty() { None } else { n_strict };
    let unsettled = evaluated.iter().filter(|t| t.tail_spread > GAP).count();
    if unsettled > 0 {
        notes.push(format!("{unsettled} trial orbit(s) have not settled by the horizon"));
    }
    let is_generalized_lyapunov_evidence =
        !evaluated.is_empty() && monotone_defect <= STRICT && limit_gap > GAP && unsettled == 0;
    Ok(LyapunovVerdict { functional, monotone_defect, limit_gap, n_strict, is_generalized_lyapunov_evidence, trials, notes })
}

fn orbit_values(
    c: &KrausChannel,
    rho: &DensityMatrix,
    n: usize,
    f: Functional,
    fixed: Option<&DensityMatrix>,
) -> Result<Vec<f64>> {
    let mut state = rho.clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(f.evaluate(&state, fixed)?);
    for _ in 0..n {
        state = c.apply(&state)?;
        out.push(f.evaluate(&state, fixed)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformationEstimate {
    /// `(‖ρ − σ‖₁, ‖τⁿρ − τⁿσ‖₁)` per pair.
    pub pairs: Vec<(f64, f64)>,
    /// Every pair moved by more than `1e-6`.
    pub is_deformation_evidence: bool,
}

/// Initial and horizon distance for each pair.
pub fn asymptotic_deformation_estimate(
    c: &KrausChannel,
    pairs: &[(DensityMatrix, DensityMatrix)],
    n: u64,
) -> Result<DeformationEstimate> {
    let s = c.power(n);
    let mut out = Vec::with_capacity(pairs.len());
    for (rho, sigma) in pairs {
        check_dims(rho, sigma)?;
        let d0 = rho.distance(sigma)?;
        if d0 <= STRICT {
            return Err(Error::InvalidParameter(format!("pair is not distinct (distance {d0:e})")));
        }
        let d_limit = trace_distance(&s.apply_operator(rho.matrix()), &s.apply_operator(sigma.matrix()))?;
        out.push((d0, d_limit));
    }
    let is_deformation_evidence = out.iter().all(|(d0, dl)| (dl - d0).abs() > GAP);
    Ok(DeformationEstimate { pairs: out, is_deformation_evidence })
}

/// A pair the channel fails to bring strictly closer.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionWitness {
    pub index: usize,
    pub before: f64,
    pub after: f64,
}

/// Searches `pairs` for one with `‖τρ − τσ‖₁ ≥ ‖ρ − σ‖₁ − 1e-9` and returns
/// the first such pair.
pub fn weak_contraction_check(
    c: &KrausChannel,
    pairs: &[(DensityMatrix, DensityMatrix)],
) -> Result<Option<ContractionWitness>> {
    for (index, (rho, sigma)) in pairs.iter().enumerate() {
        check_dims(rho, sigma)?;
        let before = rho.distance(sigma)?;
        if before <= STRICT {
            return Err(Error::InvalidParameter(format!("pair {index} is not distinct")));
        }
        let after = c.apply(rho)?.distance(&c.apply(sigma)?)?;
        if after >= before - STRICT {
            return Ok(Some(ContractionWitness { index, before, after }));
        }
    }
    Ok(None)
}

/// `(1/(n+1)) Σ_{ℓ=0}^{n} τ^ℓ(ρ₀)`.
pub fn cesaro_average(c: &KrausChannel, rho0: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    Ok(cesaro_checkpoints(c, rho0, &[n])?.pop().expect("one checkpoint").1)
}

/// Cesàro averages at each of `checkpoints`, computed in one pass.
pub fn cesaro_checkpoints(c: &KrausChannel, rho0: &DensityMatrix, checkpoints: &[usize]) -> Result<Vec<(usize, DensityMatrix)>> {
    if rho0.dim() != c.dim() {
        return Err(Error::DimensionMismatch(format!("state of dimension {} for a channel on {}", rho0.dim(), c.dim())));
    }
    let last = checkpoints.iter().copied().max().unwrap_or(0);
    let mut sorted: Vec<usize> = checkpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::with_capacity(sorted.len());
    let mut next = sorted.iter().peekable();
    let mut state = rho0.clone();
    let mut sum = ComplexMatrix::zeros(c.dim(), c.dim());
    for l in 0..=last {
        sum = &sum + state.matrix();
        while next.peek() == Some(&&l) {
            next.next();
            out.push((l, DensityMatrix::new(sum.scale_real(1.0 / (l + 1) as f64))?));
        }
        if l < last {
            state = c.apply(&state)?;
        }
    }
    Ok(out)
}

/// Computational-basis states, ten Haar-random pure states, and `I/dim`.
pub fn probe_states(dim: usize, seed: u64) -> Result<Vec<DensityMatrix>> {
    let mut out = Vec::with_capacity(dim + 11);
    for k in 0..dim {
        out.push(DensityMatrix::basis(dim, k)?);
    }
    let mut r = rng(seed);
    for _ in 0..10 {
        out.push(DensityMatrix::pure(&haar_state(&mut r, dim))?);
    }
    out.push(DensityMatrix::maximally_mixed(dim));
    Ok(out)
}

/// All unordered pairs of distinct probe states.
pub fn probe_pairs(dim: usize, seed: u64) -> Result<Vec<(DensityMatrix, DensityMatrix)>> {
    let probes = probe_states(dim, seed)?;
    let mut out = Vec::new();
    for i in 0..probes.len() {
        for j in i + 1..probes.len() {
            out.push((probes[i].clone(), probes[j].clone()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Mixing,
    NotMixingWithinHorizon,
}

impl OracleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleVerdict::Mixing => "mixing",
            OracleVerdict::NotMixingWithinHorizon => "not_mixing_within_horizon",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub verdict: OracleVerdict,
    /// Largest pairwise probe distance at `n_max`.
    pub final_spread: f64,
    /// Largest pairwise probe distance over the trailing 10% of steps.
    pub tail_spread: f64,
}

/// Brute-force mixing test: pushes the probe states to `n_max` and declares
/// mixing iff every pairwise distance stays below `tol` over the trailing
/// 10% of steps.
pub fn orbit_oracle(c: &KrausChannel, n_max: usize, tol: f64, seed: u64) -> Result<OracleOutcome> {
    if n_max < 100 {
        return Err(Error::InvalidParameter(format!("n_max must be at least 100, got {n_max}")));
    }
    let window = n_max / 10;
    let s = c.to_superoperator();
    let jump = s.pow((n_max - window) as u64);
    let mut states: Vec<ComplexMatrix> =
        probe_states(c.dim(), seed)?.iter().map(|p| jump.apply_operator(p.matrix())).collect();
    let mut tail_spread: f64 = 0.0;
    let mut final_spread = 0.0;
    for step in 0..=window {
        let spread = max_pairwise_distance(&states, tol)?;
        tail_spread = tail_spread.max(spread);
        if step == window {
            final_spread = spread;
        } else {
            states = states.iter().map(|m| s.apply_operator(m)).collect();
        }
    }
    let verdict = if tail_spread < tol { OracleVerdict::Mixing } else { OracleVerdict::NotMixingWithinHorizon };
    Ok(OracleOutcome { verdict, final_spread, tail_spread })
}

/// Largest pairwise trace distance, short-circuited through the distances
/// to the first state: `max_j d(0, j) ≤ max_{i,j} d(i, j) ≤ 2·max_j d(0, j)`.
/// Exact when it matters for comparison with `tol`.
fn max_pairwise_distance(states: &[ComplexMatrix], tol: f64) -> Result<f64> {
    let mut to_first: f64 = 0.0;
    for m in &states[1..] {
        to_first = to_first.max(trace_distance(&states[0], m)?);
    }
    if to_first >= tol || 2.0 * to_first < tol {
        return Ok(to_first);
    }
    let mut best = to_first;
    for i in 1..states.len() {
        for j in i + 1..states.len() {
            best = best.max(trace_distance(&states[i], &states[j])?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::C64;
    use crate::random::random_density_matrix;
    use crate::spectral::Verdict;
    use crate::zoo;
    use core::f64::consts::LN_2;
    use proptest::prelude::*;

    fn basis(n: usize, k: usize) -> DensityMatrix {
        DensityMatrix::basis(n, k).unwrap()
    }

    #[test]
    fn functional_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        assert_eq!(trivial_lyapunov(&half, &half).unwrap(), 0.0);
        assert!((trivial_lyapunov(&basis(2, 0), &half).unwrap() - 1.0).abs() < 1e-15);
        assert!(relative_entropy(&half, &half).unwrap().abs() < 1e-15);
        assert!((relative_entropy(&basis(2, 0), &half).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(relative_entropy(&basis(2, 0), &basis(2, 1)).unwrap(), f64::INFINITY);
        assert_eq!(von_neumann_entropy(&basis(3, 1)).unwrap(), 0.0);
        assert!((von_neumann_entropy(&half).unwrap() - LN_2).abs() < 1e-15);
        assert!(trivial_lyapunov(&basis(3, 0), &half).is_err());
        for f in Functional::ALL {
            assert_eq!(Functional::parse(f.name()), Some(f));
        }
        assert_eq!(Functional::parse("energy"), None);
    }

    #[test]
    fn relative_entropy_of_commuting_states() {
        // diagonal states: classical Kullback–Leibler divergence
        let p = [0.5, 0.3, 0.2];
        let q = [0.2, 0.2, 0.6];
        let rho = DensityMatrix::new(ComplexMatrix::diag_real(&p)).unwrap();
        let sigma = DensityMatrix::new(ComplexMatrix::diag_real(&q)).unwrap();
        let kl: f64 = p.iter().zip(q).map(|(a, b)| a * (a / b).ln()).sum();
        assert!((relative_entropy(&rho, &sigma).unwrap() - kl).abs() < 1e-14);
        // support of ρ inside support of σ stays finite
        let sigma = DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.5, 0.0])).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::diag_real(&[0.9, 0.1, 0.0])).unwrap();
        let kl = 0.9 * (1.8f64).ln() + 0.1 * (0.2f64).ln();
        assert!((relative_entropy(&rho, &sigma).unwrap() - kl).abs() < 1e-14);
    }

    #[test]
    fn orbit_examples() {
        let t = orbit(&zoo::example_ergodic(), &basis(2, 0), 4, &[]).unwrap();
        assert_eq!(t.states.len(), 5);
        for (k, s) in t.states.iter().enumerate() {
            assert_eq!(s, &basis(2, k % 2));
        }
        let t = orbit(&zoo::example_mixing(), &basis(3, 2), 3, &[Functional::TrivialLyapunov]).unwrap();
        let expected = [2, 1, 0, 0];
        for (s, k) in t.states.iter().zip(expected) {
            assert_eq!(s, &basis(3, k));
        }
        assert_eq!(t.values(Functional::TrivialLyapunov).unwrap(), &[2.0, 2.0, 0.0, 0.0]);
        let rho = DensityMatrix::new(random_density_matrix(&mut rng(1), 2)).unwrap();
        let t = orbit(&KrausChannel::identity(2), &rho, 3, &[Functional::VonNeumannEntropy]).unwrap();
        assert!(t.states.iter().all(|s| s == &rho));
        assert!(t.distances.is_none());
        assert!(orbit(&KrausChannel::identity(2), &rho, 3, &[Functional::RelativeEntropy]).is_err());
        assert!(orbit(&KrausChannel::identity(3), &rho, 3, &[]).is_err());
        assert_eq!(orbit(&zoo::example_mixing(), &basis(3, 1), 0, &[]).unwrap().states.len(), 1);
    }

    #[test]
    fn depolarizing_relative_entropy_is_lyapunov() {
        let c = zoo::depolarizing(0.5).unwrap();
        let probes = probe_states(2, 3).unwrap();
        let v = verify_generalized_lyapunov(&c, Functional::RelativeEntropy, &probes, 60).unwrap();
        assert!(v.is_generalized_lyapunov_evidence, "{v:?}");
        assert!(v.monotone_defect <= 1e-12);
        assert_eq!(v.trials.last().unwrap(), &None);
        assert_eq!(v.n_strict, Some(1));
        // closed form: Bloch radius r_n = 2^{-n}, H = ln 2 − h((1 + r)/2)
        let trace = orbit(&c, &basis(2, 0), 6, &[Functional::RelativeEntropy]).unwrap();
        for (n, h) in trace.values(Functional::RelativeEntropy).unwrap().iter().enumerate() {
            let r = 0.5f64.powi(n as i32);
            let (a, b) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
            let ent = -a * a.ln() - if b > 0.0 { b * b.ln() } else { 0.0 };
            assert!((h - (LN_2 - ent)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn example_ergodic_has_no_trivial_lyapunov_evidence() {
        let c = zoo::example_ergodic();
        let v = verify_generalized_lyapunov(&c, Functional::TrivialLyapunov, &[basis(2, 0)], 50).unwrap();
        assert!(!v.is_generalized_lyapunov_evidence);
        assert_eq!(v.limit_gap, 0.0);
        assert_eq!(v.monotone_defect, 0.0);
        assert_eq!(v.n_strict, None);
    }

    #[test]
    fn lyapunov_preconditions() {
        let id = KrausChannel::identity(2);
        let v = verify_generalized_lyapunov(&id, Functional::VonNeumannEntropy, &probe_states(2, 0).unwrap(), 20).unwrap();
        assert!(!v.is_generalized_lyapunov_evidence);
        assert_eq!(v.monotone_defect, 0.0);
        assert!(v.trials.iter().all(Option::is_none));
        assert!(!v.notes.is_empty());
        assert!(verify_generalized_lyapunov(&id, Functional::TrivialLyapunov, &[basis(2, 0)], 5).is_err());
        let m = zoo::example_mixing();
        let err = verify_generalized_lyapunov(&m, Functional::RelativeEntropy, &[basis(3, 2)], 5).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("faithful")));
        let damp = zoo::amplitude_damping(0.3).unwrap();
        assert!(verify_generalized_lyapunov(&damp, Functional::VonNeumannEntropy, &[basis(2, 1)], 5).is_err());
        // the trivial functional works with a non-faithful fixed point
        let v = verify_generalized_lyapunov(&m, Functional::TrivialLyapunov, &probe_states(3, 0).unwrap(), 10).unwrap();
        assert!(v.is_generalized_lyapunov_evidence);
        assert_eq!(v.n_strict, Some(2));
    }

    #[test]
    fn deformation_examples() {
        let m = zoo::example_mixing();
        let r = asymptotic_deformation_estimate(&m, &[(basis(3, 2), basis(3, 0))], 2).unwrap();
        assert_eq!(r.pairs, [(2.0, 0.0)]);
        assert!(r.is_deformation_evidence);
        let e = zoo::example_ergodic();
        for n in 0..6 {
            let r = asymptotic_deformation_estimate(&e, &[(basis(2, 0), basis(2, 1))], n).unwrap();
            assert_eq!(r.pairs, [(2.0, 2.0)]);
            assert!(!r.is_deformation_evidence);
        }
        let u = zoo::unitary_rotation(0.4).unwrap();
        let pairs = probe_pairs(2, 9).unwrap();
        let r = asymptotic_deformation_estimate(&u, &pairs, 37).unwrap();
        assert!(r.pairs.iter().all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(asymptotic_deformation_estimate(&u, &[(basis(2, 0), basis(2, 0))], 3).is_err());
    }

    #[test]
    fn weak_contraction_examples() {
        let w = weak_contraction_check(&zoo::example_mixing(), &[(basis(3, 2), basis(3, 0))]).unwrap().unwrap();
        assert_eq!((w.before, w.after), (2.0, 2.0));
        // Bloch contraction by 1 − p: distances shrink by exactly one half
        let c = zoo::depolarizing(0.5).unwrap();
        let mut r = rng(17);
        let pairs: Vec<_> = (0..100)
            .map(|_| {
                let a = DensityMatrix::new(random_density_matrix(&mut r, 2)).unwrap();
                let b = DensityMatrix::new(random_density_matrix(&mut r, 2)).unwrap();
                (a, b)
            })
            .collect();
        assert!(weak_contraction_check(&c, &pairs).unwrap().is_none());
        for (a, b) in &pairs {
            let ratio = c.apply(a).unwrap().distance(&c.apply(b).unwrap()).unwrap() / a.distance(b).unwrap();
            assert!((ratio - 0.5).abs() < 1e-12);
        }
        let w = weak_contraction_check(&KrausChannel::identity(2), &pairs[..3]).unwrap().unwrap();
        assert_eq!(w.index, 0);
    }

    #[test]
    fn cesaro_examples() {
        let c = zoo::example_ergodic();
        let half = DensityMatrix::maximally_mixed(2);
        // alternating sum: even n leaves one extra |0⟩⟨0| term, distance 1/(n+1)
        for (n, avg) in cesaro_checkpoints(&c, &basis(2, 0), &[9999, 99, 100, 999]).unwrap() {
            let d = avg.distance(&half).unwrap();
            let exact = if n % 2 == 0 { 1.0 / (n + 1) as f64 } else { 0.0 };
            assert!((d - exact).abs() < 1e-12, "n={n}: {d}");
        }
        assert_eq!(cesaro_average(&c, &half, 17).unwrap(), half);
        let rho = DensityMatrix::new(random_density_matrix(&mut rng(2), 3)).unwrap();
        let avg = cesaro_average(&KrausChannel::identity(3), &rho, 50).unwrap();
        assert!(avg.matrix().approx_eq(rho.matrix(), 1e-14));
        // two transient terms: exactly 4/(n+1)
        let m = zoo::example_mixing();
        let avg = cesaro_average(&m, &basis(3, 2), 100).unwrap();
        assert!((avg.distance(&basis(3, 0)).unwrap() - 4.0 / 101.0).abs() < 1e-14);
    }

    #[test]
    fn oracle_examples() {
        let m = orbit_oracle(&zoo::example_mixing(), 100, 1e-8, 0).unwrap();
        assert_eq!(m.verdict, OracleVerdict::Mixing);
        let e = orbit_oracle(&zoo::example_ergodic(), 100, 1e-8, 0).unwrap();
        assert_eq!(e.verdict, OracleVerdict::NotMixingWithinHorizon);
        assert!((e.final_spread - 2.0).abs() < 1e-12);
        let d = orbit_oracle(&zoo::depolarizing(0.1).unwrap(), 500, 1e-8, 0).unwrap();
        assert_eq!(d.verdict, OracleVerdict::Mixing);
        assert!(orbit_oracle(&zoo::example_mixing(), 99, 1e-8, 0).is_err());
        assert_eq!(probe_states(3, 4).unwrap().len(), 14);
        assert_eq!(probe_states(3, 4).unwrap(), probe_states(3, 4).unwrap());
    }

    #[test]
    fn oracle_agrees_with_spectrum_on_short_horizon() {
        for c in zoo::catalog_channels().unwrap() {
            let spectral = analyze_channel(&c).unwrap().verdict == Verdict::Mixing;
            let oracle = orbit_oracle(&c, 400, 1e-8, 1).unwrap().verdict == OracleVerdict::Mixing;
            assert_eq!(spectral, oracle, "{:?}", c.label());
        }
    }

    #[test]
    fn max_pairwise_shortcut_is_exact() {
        let mut r = rng(5);
        for _ in 0..20 {
            let states: Vec<ComplexMatrix> = (0..5).map(|_| random_density_matrix(&mut r, 2)).collect();
            let mut brute: f64 = 0.0;
            for i in 0..5 {
                for j in i + 1..5 {
                    brute = brute.max(trace_distance(&states[i], &states[j]).unwrap());
                }
            }
            let fast = max_pairwise_distance(&states, brute * 0.75).unwrap();
            assert!((fast >= brute * 0.75) == (brute >= brute * 0.75));
            let exact = max_pairwise_distance(&states, brute * 1.5 + 1e-3).unwrap();
            assert!(exact <= brute + 1e-15);
        }
    }

    fn random_state(seed: u64, dim: usize) -> DensityMatrix {
        DensityMatrix::new(random_density_matrix(&mut rng(seed), dim)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn data_processing(seed in 0u64..10_000, dim in 2usize..4, rank in 1usize..5) {
            let c = zoo::random_channel(dim, rank.min(dim * dim), seed).unwrap();
            let rho = random_state(seed.wrapping_mul(3) + 1, dim);
            let sigma = random_state(seed.wrapping_mul(3) + 2, dim);
            let before = relative_entropy(&rho, &sigma).unwrap();
            let after = relative_entropy(&c.apply(&rho).unwrap(), &c.apply(&sigma).unwrap()).unwrap();
            prop_assert!(after <= before + 1e-8);
        }

        #[test]
        fn entropy_is_bounded(seed in 0u64..10_000, dim in 1usize..5) {
            let s = von_neumann_entropy(&random_state(seed, dim)).unwrap();
            prop_assert!(s >= 0.0 && s <= (dim as f64).ln() + 1e-12);
        }

        #[test]
        fn relative_entropy_vanishes_only_on_equal_states(seed in 0u64..10_000) {
            let rho = random_state(seed, 2);
            prop_assert!(relative_entropy(&rho, &rho).unwrap() < 1e-12);
            let sigma = random_state(seed + 1, 2);
            if rho.distance(&sigma).unwrap() > 1e-3 {
                prop_assert!(relative_entropy(&rho, &sigma).unwrap() > 0.0);
            }
        }

        #[test]
        fn cesaro_average_is_a_state(seed in 0u64..1000, n in 0usize..50) {
            let c = zoo::random_channel(3, 2, seed).unwrap();
            let avg = cesaro_average(&c, &random_state(seed, 3), n).unwrap();
            prop_assert!((avg.matrix().trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
