//! Named channels used as fixtures: the two worked examples, standard
//! parametric families, dilation instances and seeded random channels.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use crate::channel::{KrausChannel, StinespringDilation};
use crate::dilation::{ConservedDilation, Extremal};
use crate::error::{Error, Result};
use crate::opalg::{pauli, ComplexMatrix, C64};
use crate::random::{haar_unitary, rng};
use crate::spectral::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Paper,
    Derived,
    Random,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub name: String,
    pub dim: usize,
    pub parameters: BTreeMap<String, f64>,
    pub expected_verdict: Option<Verdict>,
    pub provenance: Provenance,
}

impl ChannelSpec {
    fn new(name: &str, dim: usize, params: &[(&str, f64)], verdict: Option<Verdict>, provenance: Provenance) -> Self {
        ChannelSpec {
            name: name.to_string(),
            dim,
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            expected_verdict: verdict,
            provenance,
        }
    }

    /// Unique catalog key, e.g. `depolarizing:p=0.25`.
    pub fn id(&self) -> String {
        if self.parameters.is_empty() {
            return self.name.clone();
        }
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={}", fmt_param(*v))).collect();
        format!("{}:{}", self.name, params.join(","))
    }

    fn param(&self, key: &str) -> Result<f64> {
        self.parameters
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs parameter `{key}`", self.name)))
    }

    fn int_param(&self, key: &str) -> Result<usize> {
        let v = self.param(key)?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidParameter(format!("`{key}` must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    }
}

fn fmt_param(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ket(n: usize, k: usize) -> Vec<C64> {
    (0..n).map(|i| re(if i == k { 1.0 } else { 0.0 })).collect()
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Complete decoherence followed by a NOT gate: Kraus `{|1⟩⟨0|, |0⟩⟨1|}`.
pub fn example_ergodic() -> KrausChannel {
    let ops = alloc::vec![ComplexMatrix::matrix_unit(2, 1, 0), ComplexMatrix::matrix_unit(2, 0, 1)];
    KrausChannel::new(ops, Some("example-ergodic".into())).expect("valid Kraus set")
}

/// Qutrit cascade `|2⟩ → |1⟩ → |0⟩ → |0⟩`: Kraus `{|1⟩⟨2|, |0⟩⟨1|, |0⟩⟨0|}`.
pub fn example_mixing() -> KrausChannel {
    let ops = alloc::vec![
        ComplexMatrix::matrix_unit(3, 1, 2),
        ComplexMatrix::matrix_unit(3, 0, 1),
        ComplexMatrix::matrix_unit(3, 0, 0),
    ];
    KrausChannel::new(ops, Some("example-mixing".into())).expect("valid Kraus set")
}

/// Qubit depolarizing channel `ρ ↦ (1 − p)ρ + p·I/2`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let ops = alloc::vec![
        ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt()),
        pauli::x().scale_real((p / 4.0).sqrt()),
        pauli::y().scale_real((p / 4.0).sqrt()),
        pauli::z().scale_real((p / 4.0).sqrt()),
    ];
    KrausChannel::new(ops, Some(format!("depolarizing(p={p})")))
}

/// Amplitude damping toward `|0⟩` with decay probability `γ`.
pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_probability("gamma", gamma)?;
    let k0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]);
    let k1 = ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]);
    KrausChannel::new(alloc::vec![k0, k1], Some(format!("amplitude-damping(gamma={gamma})")))
}

/// Phase flip `ρ ↦ (1 − p/2)ρ + (p/2)·ZρZ`; `p = 1` removes all coherence.
pub fn dephasing(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let ops = alloc::vec![
        ComplexMatrix::identity(2).scale_real((1.0 - p / 2.0).sqrt()),
        pauli::z().scale_real((p / 2.0).sqrt()),
    ];
    KrausChannel::new(ops, Some(format!("dephasing(p={p})")))
}

/// Conjugation by `exp(−iθX/2)`.
pub fn unitary_rotation(theta: f64) -> Result<KrausChannel> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter("theta must be finite".into()));
    }
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let u = ComplexMatrix::from_rows(&[alloc::vec![re(c), C64::new(0.0, -s)], alloc::vec![C64::new(0.0, -s), re(c)]])?;
    Ok(KrausChannel::unitary(u)?.with_label(format!("unitary(theta={theta})")))
}

/// `cos θ·I + i sin θ·SWAP` on two qubits.
pub fn partial_swap_unitary(theta: f64) -> ComplexMatrix {
    &ComplexMatrix::identity(4).scale_real(theta.cos()) + &pauli::swap(2).scale(C64::new(0.0, theta.sin()))
}

/// Partial swap with a bath qubit in `|0⟩`, conserving `σz⊗I + I⊗σz`.
pub fn partial_swap_dilation(theta: f64) -> Result<ConservedDilation> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter("theta must be finite".into()));
    }
    let d = StinespringDilation::new(2, 2, partial_swap_unitary(theta), ket(2, 0))?;
    ConservedDilation::new(d, pauli::z(), pauli::z(), Extremal::Max)
}

/// Controlled phase `diag(1, 1, 1, e^{iφ})` with a bath qubit in `|0⟩`.
pub fn cz_dilation(phi: f64) -> Result<ConservedDilation> {
    if !phi.is_finite() {
        return Err(Error::InvalidParameter("phi must be finite".into()));
    }
    let u = ComplexMatrix::diag(&[re(1.0), re(1.0), re(1.0), C64::from_polar(1.0, phi)]);
    let d = StinespringDilation::new(2, 2, u, ket(2, 0))?;
    ConservedDilation::new(d, pauli::z(), pauli::z(), Extremal::Max)
}

/// Channel whose Kraus operators are the blocks of a Haar isometry
/// `H → H⊗C^rank`: `K_n[a', a] = V[a'·rank + n, a]`.
pub fn random_channel(dim: usize, rank: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 || rank == 0 || rank > dim * dim {
        return Err(Error::InvalidParameter(format!("need dim ≥ 1 and 1 ≤ rank ≤ dim², got dim={dim}, rank={rank}")));
    }
    let mut r = rng(seed);
    let v = haar_unitary(&mut r, dim * rank);
    let ops = (0..rank).map(|n| ComplexMatrix::from_fn(dim, dim, |ap, a| v[(ap * rank + n, a)])).collect();
    KrausChannel::new(ops, Some(format!("random(dim={dim},rank={rank},seed={seed})")))
}

const NAMES: [&str; 9] = [
    "example-ergodic",
    "example-mixing",
    "depolarizing",
    "amplitude-damping",
    "unitary",
    "dephasing",
    "partial-swap-dilation",
    "cz-dilation",
    "random",
];

/// Recognized family names.
pub fn names() -> &'static [&'static str] {
    &NAMES
}

/// The fixture catalog: both worked examples, six families at two
/// parameter values each, and four seeded random channels.
pub fn catalog() -> Vec<ChannelSpec> {
    use Provenance::*;
    use Verdict::*;
    let mut out = alloc::vec![
        ChannelSpec::new("example-ergodic", 2, &[], Some(ErgodicNotMixing), Paper),
        ChannelSpec::new("example-mixing", 3, &[], Some(Mixing), Paper),
    ];
    for p in [0.25, 0.5] {
        out.push(ChannelSpec::new("depolarizing", 2, &[("p", p)], Some(Mixing), Derived));
    }
    for g in [0.3, 0.7] {
        out.push(ChannelSpec::new("amplitude-damping", 2, &[("gamma", g)], Some(Mixing), Derived));
    }
    for t in [FRAC_PI_3, PI] {
        out.push(ChannelSpec::new("unitary", 2, &[("theta", t)], Some(NotErgodic), Derived));
    }
    for p in [0.5, 1.0] {
        out.push(ChannelSpec::new("dephasing", 2, &[("p", p)], Some(NotErgodic), Derived));
    }
    for t in [FRAC_PI_4, FRAC_PI_2] {
        out.push(ChannelSpec::new("partial-swap-dilation", 2, &[("theta", t)], Some(Mixing), Derived));
    }
    for f in [PI, FRAC_PI_2] {
        out.push(ChannelSpec::new("cz-dilation", 2, &[("phi", f)], Some(NotErgodic), Derived));
    }
    for (dim, rank, seed) in [(2usize, 4usize, 7u64), (3, 2, 11), (4, 2, 13), (3, 1, 5)] {
        let params = [("dim", dim as f64), ("rank", rank as f64), ("seed", seed as f64)];
        out.push(ChannelSpec::new("random", dim, &params, None, Random));
    }
    out
}

/// Looks a catalog entry up by [`ChannelSpec::id`] or, when unambiguous,
/// by family name.
pub fn find(key: &str) -> Option<ChannelSpec> {
    let all = catalog();
    if let Some(spec) = all.iter().find(|s| s.id() == key) {
        return Some(spec.clone());
    }
    let mut by_name = all.into_iter().filter(|s| s.name == key);
    match (by_name.next(), by_name.next()) {
        (Some(spec), None) => Some(spec),
        _ => None,
    }
}

pub fn build(spec: &ChannelSpec) -> Result<KrausChannel> {
    let channel = match spec.name.as_str() {
        "example-ergodic" => example_ergodic(),
        "example-mixing" => example_mixing(),
        "depolarizing" => depolarizing(spec.param("p")?)?,
        "amplitude-damping" => amplitude_damping(spec.param("gamma")?)?,
        "unitary" => unitary_rotation(spec.param("theta")?)?,
        "dephasing" => dephasing(spec.param("p")?)?,
        "partial-swap-dilation" | "cz-dilation" => {
            return build_dilation(spec)?.expect("dilation family").to_channel().map(|c| c.with_label(spec.id()));
        }
        "random" => random_channel(spec.int_param("dim")?, spec.int_param("rank")?, spec.param("seed")? as u64)?,
        other => return Err(Error::Unknown(format!("no channel named `{other}`"))),
    };
    if channel.dim() != spec.dim {
        return Err(Error::DimensionMismatch(format!("{} has dimension {}, spec says {}", spec.name, channel.dim(), spec.dim)));
    }
    Ok(channel.with_label(spec.id()))
}

/// The conserved-charge instance behind a dilation family, `None` for other
/// families.
pub fn build_dilation(spec: &ChannelSpec) -> Result<Option<ConservedDilation>> {
    match spec.name.as_str() {
        "partial-swap-dilation" => partial_swap_dilation(spec.param("theta")?).map(Some),
        "cz-dilation" => cz_dilation(spec.param("phi")?).map(Some),
        _ => Ok(None),
    }
}

/// Every catalog entry, built, in catalog order.
pub fn catalog_channels() -> Result<Vec<KrausChannel>> {
    catalog().iter().map(build).collect()
}
