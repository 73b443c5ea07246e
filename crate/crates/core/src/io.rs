//! JSON file formats.
//!
//! Matrices are `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order. A state file holds either a density matrix in that encoding or a
//! pure state `{"kind": "pure", "dim": n, "vec": [[re, im], ...]}`. Channels
//! are `{"dim": n, "ops": [matrix, ...]}`, Choi matrices
//! `{"dim": n, "choi": matrix}` (input factor first, output factor second),
//! dilations `{"system_dim": n, "ancilla_dim": m, "unitary": matrix}` with the
//! ancilla reference vector `|0⟩`, and control sets
//! `{"dim": n, "generators": [{"label": s, "channel": channel}, ...]}`.
//!
//! Output is deterministic: keys keep their declared order, floats use the
//! shortest decimal that round-trips (at most 17 significant digits, lowercase
//! exponent for very large or small magnitudes) and `-0` is written as `0`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{ChoiMatrix, Dilation, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::reach::{ControlSet, Generator, ReachabilityReport};
use crate::state::{DensityMatrix, PureState};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureDoc {
    pub kind: String,
    pub dim: usize,
    pub vec: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub dim: usize,
    pub ops: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiDoc {
    pub dim: usize,
    pub choi: MatrixDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationDoc {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub unitary: MatrixDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub label: String,
    pub channel: ChannelDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ControlSetDoc {
    pub dim: usize,
    pub generators: Vec<GeneratorDoc>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn entries(data: &[[f64; 2]]) -> Result<Vec<num_complex::Complex64>> {
    data.iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(c(re, im))
            } else {
                Err(Error::NonFinite)
            }
        })
        .collect()
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixDoc {
            rows: m.nrows(),
            cols: m.ncols(),
            data: linalg::to_row_major(m)
                .into_iter()
                .map(|z| [clean(z.re), clean(z.im)])
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        Ok(linalg::from_row_major(self.rows, self.cols, &entries(&self.data)?))
    }

    fn to_square(&self, dim: usize, what: &str) -> Result<ComplexMatrix> {
        if self.rows != dim || self.cols != dim {
            return Err(Error::Parse(format!(
                "{what} is {}x{}, expected {dim}x{dim}",
                self.rows, self.cols
            )));
        }
        self.to_matrix()
    }
}

impl ChannelDoc {
    pub fn from_channel(phi: &KrausMap) -> Self {
        ChannelDoc {
            dim: phi.dim(),
            ops: phi.ops().iter().map(MatrixDoc::from_matrix).collect(),
        }
    }

    /// Operators without the trace-preservation check.
    pub fn to_ops(&self) -> Result<Vec<ComplexMatrix>> {
        if self.ops.is_empty() {
            return Err(Error::Parse("channel has no operators".into()));
        }
        self.ops
            .iter()
            .map(|m| m.to_square(self.dim, "Kraus operator"))
            .collect()
    }

    pub fn to_channel(&self, tol: &Tolerances) -> Result<KrausMap> {
        KrausMap::new(self.to_ops()?, tol)
    }
}

fn from_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    from_str::<MatrixDoc>(text)?.to_matrix()
}

/// A state file as written, before density-matrix validation.
#[derive(Debug, Clone, PartialEq)]
pub enum StateDoc {
    Pure(ComplexVector),
    Matrix(ComplexMatrix),
}

pub fn parse_state_doc(text: &str) -> Result<StateDoc> {
    let value: Value = from_str(text)?;
    match value.get("kind") {
        Some(Value::String(kind)) if kind == "pure" => {
            let doc: PureDoc = serde_json::from_value(value).map_err(parse_err)?;
            if doc.vec.len() != doc.dim {
                return Err(Error::Parse(format!(
                    "pure state declares dim {} but has {} amplitudes",
                    doc.dim,
                    doc.vec.len()
                )));
            }
            Ok(StateDoc::Pure(ComplexVector::from_vec(entries(&doc.vec)?)))
        }
        Some(other) => Err(Error::Parse(format!("unknown state kind {other}"))),
        None => {
            let doc: MatrixDoc = serde_json::from_value(value).map_err(parse_err)?;
            Ok(StateDoc::Matrix(doc.to_matrix()?))
        }
    }
}

pub fn parse_state(text: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    match parse_state_doc(text)? {
        StateDoc::Pure(v) => Ok(PureState::new(v, tol)?.projector()),
        StateDoc::Matrix(m) => DensityMatrix::new(m, tol),
    }
}

pub fn parse_channel_doc(text: &str) -> Result<ChannelDoc> {
    from_str(text)
}

pub fn parse_channel(text: &str, tol: &Tolerances) -> Result<KrausMap> {
    parse_channel_doc(text)?.to_channel(tol)
}

pub fn parse_choi(text: &str, tol: &Tolerances) -> Result<ChoiMatrix> {
    let doc: ChoiDoc = from_str(text)?;
    let m = doc.choi.to_square(doc.dim * doc.dim, "Choi matrix")?;
    ChoiMatrix::new(doc.dim, m, tol)
}

pub fn parse_dilation(text: &str, tol: &Tolerances) -> Result<Dilation> {
    let doc: DilationDoc = from_str(text)?;
    let joint = doc.system_dim * doc.ancilla_dim;
    let m = doc.unitary.to_square(joint, "dilation unitary")?;
    Dilation::new(doc.system_dim, doc.ancilla_dim, m, tol)
}

pub fn parse_control_set(text: &str, tol: &Tolerances) -> Result<ControlSet> {
    let doc: ControlSetDoc = from_str(text)?;
    let generators = doc
        .generators
        .iter()
        .map(|g| {
            Ok(Generator {
                label: g.label.clone(),
                channel: g.channel.to_channel(tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ControlSet::new(doc.dim, generators)
}

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

pub fn matrix_value(m: &ComplexMatrix) -> Value {
    to_value(&MatrixDoc::from_matrix(m))
}

pub fn state_value(rho: &DensityMatrix) -> Value {
    matrix_value(rho.matrix())
}

pub fn pure_value(psi: &PureState) -> Value {
    to_value(&PureDoc {
        kind: "pure".into(),
        dim: psi.dim(),
        vec: psi.vector().iter().map(|z| [clean(z.re), clean(z.im)]).collect(),
    })
}

pub fn channel_value(phi: &KrausMap) -> Value {
    to_value(&ChannelDoc::from_channel(phi))
}

pub fn choi_value(choi: &ChoiMatrix) -> Value {
    to_value(&ChoiDoc {
        dim: choi.dim(),
        choi: MatrixDoc::from_matrix(choi.matrix()),
    })
}

pub fn dilation_value(d: &Dilation) -> Value {
    to_value(&DilationDoc {
        system_dim: d.system_dim(),
        ancilla_dim: d.ancilla_dim(),
        unitary: MatrixDoc::from_matrix(d.unitary()),
    })
}

pub fn control_set_value(controls: &ControlSet) -> Value {
    to_value(&ControlSetDoc {
        dim: controls.dim(),
        generators: controls
            .generators()
            .iter()
            .map(|g| GeneratorDoc {
                label: g.label.clone(),
                channel: ChannelDoc::from_channel(&g.channel),
            })
            .collect(),
    })
}

/// Report document with the replay residual of the witness (absent when not reached).
pub fn report_value(report: &ReachabilityReport, replay_residual: Option<f64>) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("reached".into(), Value::Bool(report.reached));
    map.insert(
        "witness".into(),
        Value::Array(report.witness.iter().cloned().map(Value::String).collect()),
    );
    map.insert("depth_explored".into(), report.depth_explored.into());
    map.insert(
        "frontier_sizes".into(),
        Value::Array(report.frontier_sizes.iter().map(|&n| n.into()).collect()),
    );
    map.insert("closest_distance".into(), float(report.closest_distance));
    map.insert("replay_residual".into(), replay_residual.map_or(Value::Null, float));
    Value::Object(map)
}

/// JSON number for a finite float (`-0` becomes `0`); non-finite values become `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(clean(x)).map_or(Value::Null, Value::Number)
}

pub fn format_f64(x: f64) -> String {
    match float(x) {
        Value::Number(n) => n.to_string(),
        _ => "null".into(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(val, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Indented JSON with scalar arrays kept on one line, newline-terminated.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

/// `key: value` lines for a top-level object; nested values are inline JSON.
pub fn to_human_string(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, val)| {
                let rendered = match val {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                format!("{k}: {rendered}\n")
            })
            .collect(),
        other => to_json_string(other),
    }
}
