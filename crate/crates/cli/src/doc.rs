//! Input documents: channels, dilation instances and state specifications.
//!
//! Complex entries are `[re, im]` pairs or bare reals; matrices are arrays of
//! rows.

use std::path::Path;

use channellab_core::dilation::{ConservedDilation, Extremal};
use channellab_core::{ComplexMatrix, DensityMatrix, KrausChannel, StinespringDilation, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair(f64, f64),
    Real(f64),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Pair(re, im) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

impl From<C64> for Entry {
    fn from(z: C64) -> Self {
        Entry::Pair(z.re, z.im)
    }
}

pub type MatrixDoc = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StinespringDoc {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub unitary: MatrixDoc,
    pub bath_state: Vec<Entry>,
}

/// `{"dim", "label"?, "kraus"}` or `{"stinespring": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stinespring: Option<StinespringDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationDoc {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub unitary: MatrixDoc,
    pub bath_state: Vec<Entry>,
    #[serde(rename = "mA")]
    pub m_a: MatrixDoc,
    #[serde(rename = "mB")]
    pub m_b: MatrixDoc,
    pub extremal: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn to_matrix(doc: &MatrixDoc, rows: usize, cols: usize, what: &str) -> CliResult<ComplexMatrix> {
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(usage(format!("{what} must be {rows}x{cols}")));
    }
    let data = doc.iter().flatten().map(|&e| C64::from(e)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).map_err(|e| usage(format!("{what}: {e}")))
}

pub fn matrix_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&z| z.into()).collect()).collect()
}

fn vector(doc: &[Entry], len: usize, what: &str) -> CliResult<Vec<C64>> {
    if doc.len() != len {
        return Err(usage(format!("{what} must have {len} entries, found {}", doc.len())));
    }
    let v: Vec<C64> = doc.iter().map(|&e| e.into()).collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(usage(format!("{what} has a non-finite entry")));
    }
    Ok(v)
}

/// Reads a file and parses it as JSON, reporting the position of syntax
/// errors.
pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json(text: &str, origin: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| usage(format!("{origin}: malformed JSON: {e}")))
}

fn from_value<T: for<'de> Deserialize<'de>>(value: &Value, what: &str) -> CliResult<T> {
    T::deserialize(value).map_err(|e| usage(format!("{what}: {e}")))
}

impl ChannelDoc {
    pub fn from_value(value: &Value) -> CliResult<Self> {
        from_value(value, "channel document")
    }

    pub fn from_channel(c: &KrausChannel) -> Self {
        ChannelDoc {
            dim: Some(c.dim()),
            label: c.label().map(str::to_string),
            kraus: Some(c.kraus_ops().iter().map(matrix_doc).collect()),
            stinespring: None,
        }
    }

    /// Builds the channel with shape checks only.
    pub fn to_unvalidated(&self) -> CliResult<KrausChannel> {
        let c = match (&self.kraus, &self.stinespring) {
            (Some(kraus), None) => {
                let dim = self.dim.ok_or_else(|| usage("channel document needs `dim` next to `kraus`"))?;
                if kraus.is_empty() {
                    return Err(usage("`kraus` is empty"));
                }
                let ops = kraus
                    .iter()
                    .enumerate()
                    .map(|(i, k)| to_matrix(k, dim, dim, &format!("kraus[{i}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                KrausChannel::unvalidated(ops, self.label.clone())?
            }
            (None, Some(s)) => {
                let c = stinespring(s)?.to_channel()?;
                if let Some(dim) = self.dim {
                    if dim != c.dim() {
                        return Err(usage(format!("`dim` is {dim} but dimA is {}", c.dim())));
                    }
                }
                match &self.label {
                    Some(l) => c.with_label(l.clone()),
                    None => c,
                }
            }
            _ => return Err(usage("channel document needs exactly one of `kraus` or `stinespring`")),
        };
        Ok(c)
    }

    /// Builds and validates the channel.
    pub fn to_channel(&self) -> CliResult<KrausChannel> {
        let c = self.to_unvalidated()?;
        let report = c.validate_cpt()?;
        if !report.passed() {
            return Err(CliError::Validation(format!(
                "not a channel: completeness defect {:e}, minimum Choi eigenvalue {:e}",
                report.completeness_defect, report.min_choi_eigenvalue
            )));
        }
        Ok(c)
    }
}

fn stinespring(s: &StinespringDoc) -> CliResult<StinespringDilation> {
    let n = s.dim_a * s.dim_b;
    let u = to_matrix(&s.unitary, n, n, "unitary")?;
    let phi = vector(&s.bath_state, s.dim_b, "bath_state")?;
    StinespringDilation::new(s.dim_a, s.dim_b, u, phi).map_err(|e| CliError::Validation(e.to_string()))
}

impl DilationDoc {
    pub fn from_value(value: &Value) -> CliResult<Self> {
        from_value(value, "dilation document")
    }

    pub fn from_dilation(cd: &ConservedDilation) -> Self {
        let d = cd.dilation();
        DilationDoc {
            dim_a: d.dim_a(),
            dim_b: d.dim_b(),
            unitary: matrix_doc(d.unitary()),
            bath_state: d.bath_state().iter().map(|&z| z.into()).collect(),
            m_a: matrix_doc(cd.m_a()),
            m_b: matrix_doc(cd.m_b()),
            extremal: cd.extremal().as_str().to_string(),
        }
    }

    pub fn to_dilation(&self) -> CliResult<ConservedDilation> {
        let extremal = Extremal::parse(&self.extremal)
            .ok_or_else(|| usage(format!("extremal must be \"max\" or \"min\", found {:?}", self.extremal)))?;
        let d = stinespring(&StinespringDoc {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            unitary: self.unitary.clone(),
            bath_state: self.bath_state.clone(),
        })?;
        let m_a = to_matrix(&self.m_a, self.dim_a, self.dim_a, "mA")?;
        let m_b = to_matrix(&self.m_b, self.dim_b, self.dim_b, "mB")?;
        ConservedDilation::new(d, m_a, m_b, extremal).map_err(|e| CliError::Validation(e.to_string()))
    }
}

/// `basis:k`, `mixed`, or an inline JSON density matrix.
pub fn parse_state(spec: &str, dim: usize) -> CliResult<DensityMatrix> {
    let spec = spec.trim();
    if spec == "mixed" {
        return Ok(DensityMatrix::maximally_mixed(dim));
    }
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k.parse().map_err(|_| usage(format!("bad basis index in {spec:?}")))?;
        if k >= dim {
            return Err(usage(format!("basis index {k} out of range for dimension {dim}")));
        }
        return Ok(DensityMatrix::basis(dim, k)?);
    }
    if spec.starts_with('[') {
        let value = parse_json(spec, "--state")?;
        let doc: MatrixDoc = from_value(&value, "--state")?;
        let m = to_matrix(&doc, dim, dim, "--state")?;
        return DensityMatrix::new(m).map_err(|e| usage(format!("--state: {e}")));
    }
    Err(usage(format!("unrecognized state {spec:?}: expected basis:k, mixed or a JSON matrix")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use channellab_core::zoo;

    #[test]
    fn channel_document_round_trip() {
        let c = zoo::amplitude_damping(0.3).unwrap();
        let doc = ChannelDoc::from_channel(&c);
        let text = crate::json::to_line(&doc);
        let back = ChannelDoc::from_value(&parse_json(&text, "test").unwrap()).unwrap();
        assert_eq!(back.to_channel().unwrap().kraus_ops(), c.kraus_ops());
    }

    #[test]
    fn real_entries_and_stinespring_form() {
        let v = parse_json(r#"{"dim": 2, "kraus": [[[0, 1], [1, 0]]]}"#, "t").unwrap();
        let c = ChannelDoc::from_value(&v).unwrap().to_channel().unwrap();
        assert_eq!(c.kraus_ops().len(), 1);
        let swap = zoo::partial_swap_dilation(std::f64::consts::FRAC_PI_2).unwrap();
        let d = DilationDoc::from_dilation(&swap);
        let v = serde_json::json!({"stinespring": {"dimA": 2, "dimB": 2, "unitary": d.unitary, "bath_state": d.bath_state}});
        let c = ChannelDoc::from_value(&v).unwrap().to_channel().unwrap();
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn schema_errors_are_usage_errors() {
        for text in [
            r#"{"dim": 2}"#,
            r#"{"dim": 2, "kraus": []}"#,
            r#"{"dim": 3, "kraus": [[[1, 0], [0, 1]]]}"#,
            r#"{"dim": 2, "kraus": [[[1, 0], [0, 1]]], "extra": 1}"#,
            r#"{"dim": 2, "kraus": [[["a", 0], [0, 1]]]}"#,
        ] {
            let v = parse_json(text, "t").unwrap();
            let err = ChannelDoc::from_value(&v).and_then(|d| d.to_channel()).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{text}: {err}");
        }
        let err = parse_json("{\"dim\": 2,\n \"kraus\": [", "f.json").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn sub_normalized_channel_is_a_validation_error() {
        let v = parse_json(r#"{"dim": 2, "kraus": [[[0.5, 0], [0, 0.5]]]}"#, "t").unwrap();
        let err = ChannelDoc::from_value(&v).unwrap().to_channel().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn state_specs() {
        assert_eq!(parse_state("basis:1", 3).unwrap(), DensityMatrix::basis(3, 1).unwrap());
        assert_eq!(parse_state("mixed", 2).unwrap(), DensityMatrix::maximally_mixed(2));
        let rho = parse_state("[[0.5, 0.5], [0.5, 0.5]]", 2).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        for bad in ["basis:3", "basis:x", "pure", "[[1, 0], [0, 1]]", "[[1, 0]"] {
            assert_eq!(parse_state(bad, 3).unwrap_err().exit_code(), 1, "{bad}");
        }
    }
}
