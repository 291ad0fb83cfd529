//! The JSON input document.
//!
//! ```json
//! {
//!   "dims": {"d_a": 2, "d_b": 2},
//!   "states": [
//!     {"a": [[1, 0], [0, 0]], "b": [1, 0], "label": "00"},
//!     {"amplitudes": [0.5, 0.5, 0.5, 0.5]}
//!   ],
//!   "density": {"complement_projector": true},
//!   "tuples": [[0.75, 0.0]]
//! }
//! ```
//!
//! Amplitudes are `[re, im]` pairs or bare reals. Raw `amplitudes` records
//! are accepted only when they factor as a product state.

use std::path::Path;

use jsnr_core::quantum::{DensityOperator, MatrixRepr};
use jsnr_core::subspace::{schmidt_decompose, span_orthonormal_basis};
use jsnr_core::{tol, Dims, ProductState, PureState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

/// Renormalization beyond this is reported as a warning.
const RENORMALIZATION_WARNING: f64 = 1e-6;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    dims: RawDims,
    states: Vec<Value>,
    #[serde(default)]
    density: Option<Value>,
    #[serde(default)]
    tuples: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDims {
    d_a: usize,
    d_b: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Amp {
    Pair([f64; 2]),
    Real(f64),
}

impl Amp {
    fn value(&self) -> Complex64 {
        match *self {
            Amp::Pair([re, im]) => Complex64::new(re, im),
            Amp::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductRecord {
    a: Vec<Amp>,
    b: Vec<Amp>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    amplitudes: Vec<Amp>,
    #[serde(default)]
    label: Option<String>,
}

/// How the density operator of the document was specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensitySource {
    Matrix,
    Pure,
    ComplementProjector,
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub dims: Dims,
    pub states: Vec<ProductState>,
    pub labels: Vec<Option<String>>,
    pub density: Option<(DensitySource, DensityOperator)>,
    pub tuples: Vec<[f64; 2]>,
    pub warnings: Vec<String>,
}

impl InputDocument {
    pub fn joint_states(&self) -> Vec<PureState> {
        self.states.iter().map(|p| p.state().clone()).collect()
    }
}

pub fn load(path: &Path) -> Result<InputDocument, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<InputDocument, CliError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| CliError::schema(format!("input document: {e}")))?;
    let dims = Dims::new(raw.dims.d_a, raw.dims.d_b).map_err(|e| CliError::schema(e.to_string()))?;
    if raw.states.is_empty() {
        return Err(CliError::schema("input document has no states"));
    }
    let mut warnings = Vec::new();
    let mut states = Vec::with_capacity(raw.states.len());
    let mut labels = Vec::with_capacity(raw.states.len());
    for (i, v) in raw.states.iter().enumerate() {
        let (p, label) = parse_state(i, v, dims, &mut warnings)?;
        states.push(p);
        labels.push(label);
    }
    for (i, t) in raw.tuples.iter().enumerate() {
        if !t.iter().all(|x| x.is_finite()) {
            return Err(CliError::schema(format!("tuple {}: non-finite entry", i + 1)));
        }
    }
    let density = match &raw.density {
        None => None,
        Some(v) => Some(parse_density(v, dims, &states, &mut warnings)?),
    };
    Ok(InputDocument {
        dims,
        states,
        labels,
        density,
        tuples: raw.tuples,
        warnings,
    })
}

fn amplitudes(what: &str, amps: &[Amp], len: usize, warnings: &mut Vec<String>) -> Result<PureState, CliError> {
    if amps.len() != len {
        return Err(CliError::schema(format!(
            "{what}: expected {len} amplitudes, found {}",
            amps.len()
        )));
    }
    let v = DVector::from_iterator(len, amps.iter().map(Amp::value));
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::schema(format!("{what}: non-finite amplitude")));
    }
    let norm = v.norm();
    if norm < tol::ZERO_VECTOR {
        return Err(CliError::degenerate(format!("{what}: zero vector")));
    }
    if (norm - 1.0).abs() > RENORMALIZATION_WARNING {
        warnings.push(format!("{what}: renormalized from norm {norm:.9}"));
    }
    PureState::from_vector(v).map_err(|e| CliError::degenerate(format!("{what}: {e}")))
}

fn parse_state(
    i: usize,
    v: &Value,
    dims: Dims,
    warnings: &mut Vec<String>,
) -> Result<(ProductState, Option<String>), CliError> {
    let n = i + 1;
    let is_product = v.get("a").is_some() || v.get("b").is_some();
    if is_product {
        let r: ProductRecord =
            serde_json::from_value(v.clone()).map_err(|e| CliError::schema(format!("state {n}: {e}")))?;
        let a = amplitudes(&format!("state {n} factor a"), &r.a, dims.d_a, warnings)?;
        let b = amplitudes(&format!("state {n} factor b"), &r.b, dims.d_b, warnings)?;
        let p = ProductState::new(a, b).map_err(|e| CliError::schema(format!("state {n}: {e}")))?;
        return Ok((p, r.label));
    }
    if v.get("amplitudes").is_none() {
        return Err(CliError::schema(format!(
            "state {n}: expected factors `a` and `b` or raw `amplitudes`"
        )));
    }
    let r: RawRecord = serde_json::from_value(v.clone()).map_err(|e| CliError::schema(format!("state {n}: {e}")))?;
    let psi = amplitudes(&format!("state {n}"), &r.amplitudes, dims.total(), warnings)?;
    let sd = schmidt_decompose(&psi, dims).map_err(|e| CliError::schema(format!("state {n}: {e}")))?;
    if !sd.is_product() {
        return Err(CliError::schema(format!(
            "state {n}: raw amplitudes are entangled; references must be product states"
        )));
    }
    Ok((sd.leading_product(), r.label))
}

fn parse_density(
    v: &Value,
    dims: Dims,
    states: &[ProductState],
    warnings: &mut Vec<String>,
) -> Result<(DensitySource, DensityOperator), CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::schema("density: expected an object"))?;
    if obj.len() != 1 {
        return Err(CliError::schema(
            "density: expected exactly one of `matrix`, `pure`, `complement_projector`",
        ));
    }
    let (key, body) = obj.iter().next().expect("one entry");
    match key.as_str() {
        "matrix" => {
            let rows: Vec<Vec<Amp>> =
                serde_json::from_value(body.clone()).map_err(|e| CliError::schema(format!("density matrix: {e}")))?;
            let repr = MatrixRepr(rows.iter().map(|r| r.iter().map(Amp::value).collect()).collect());
            let mut m: DMatrix<Complex64> = repr
                .to_matrix()
                .map_err(|e| CliError::schema(format!("density matrix: {e}")))?;
            let tr = m.trace().re;
            if tr <= 0.0 || !tr.is_finite() {
                return Err(CliError::schema(format!("density matrix: trace {tr}")));
            }
            if (tr - 1.0).abs() > RENORMALIZATION_WARNING {
                warnings.push(format!("density matrix: renormalized from trace {tr:.9}"));
            }
            m.unscale_mut(tr);
            let rho = DensityOperator::new(m, dims).map_err(|e| CliError::schema(format!("density matrix: {e}")))?;
            Ok((DensitySource::Matrix, rho))
        }
        "pure" => {
            let amps: Vec<Amp> =
                serde_json::from_value(body.clone()).map_err(|e| CliError::schema(format!("density pure: {e}")))?;
            let psi = amplitudes("density pure", &amps, dims.total(), warnings)?;
            let rho = DensityOperator::pure(&psi, dims).map_err(|e| CliError::schema(format!("density pure: {e}")))?;
            Ok((DensitySource::Pure, rho))
        }
        "complement_projector" => {
            if body.as_bool() != Some(true) {
                return Err(CliError::schema("density: `complement_projector` must be true"));
            }
            let joint: Vec<PureState> = states.iter().map(|p| p.state().clone()).collect();
            let span = span_orthonormal_basis(&joint, dims).map_err(|e| CliError::schema(e.to_string()))?;
            let comp = span.orthogonal_complement();
            if comp.dim() == 0 {
                return Err(CliError::degenerate("density: the references span the whole space"));
            }
            let rho = DensityOperator::normalized_projector(comp.basis(), dims)
                .map_err(|e| CliError::degenerate(format!("density: {e}")))?;
            Ok((DensitySource::ComplementProjector, rho))
        }
        other => Err(CliError::schema(format!("density: unknown field `{other}`"))),
    }
}
