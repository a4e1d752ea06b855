//! JSON documents for channels, states and reports, and the CSV dialect.
//!
//! Complex numbers are `[re, im]` pairs. CSV files start with `#`-prefixed
//! provenance lines followed by a header row.

use std::io::Write;

use bosonlab_core::channel::{ChannelKind, ChannelSpec, Environment};
use bosonlab_core::fock::{DensityOperator, FockState};
use bosonlab_core::gaussian::Symmetry;
use bosonlab_core::moe::{Ansatz, MoeParams, MoeReport};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::LabError;

pub const TOOL: &str = concat!("bosonlab ", env!("CARGO_PKG_VERSION"));

/// Environment as `{"kind", "params", "amplitudes"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

fn param_f64(params: &Value, key: &str) -> Result<f64, LabError> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| LabError::Config(format!("missing numeric parameter `{key}`")))
}

fn param_vec(params: &Value, key: &str) -> Result<Vec<f64>, LabError> {
    serde_json::from_value(params.get(key).cloned().unwrap_or(Value::Null))
        .map_err(|_| LabError::Config(format!("parameter `{key}` must be a list of numbers")))
}

pub fn state_from_pairs(pairs: &[[f64; 2]]) -> Result<FockState, LabError> {
    Ok(bosonlab_core::channel::state_from_pairs(pairs)?)
}

pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>, LabError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(LabError::Config("matrix must be square and non-empty".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

fn matrix_to_pairs(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl EnvironmentDoc {
    pub fn to_environment(&self) -> Result<Environment, LabError> {
        let p = &self.params;
        match self.kind.as_str() {
            "fock" => {
                let n = p
                    .get("n")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| LabError::Config("fock environment needs integer `n`".into()))?;
                Ok(Environment::Fock(n as usize))
            }
            "thermal" => Ok(Environment::Thermal(param_f64(p, "nbar")?)),
            "diagonal" => Ok(Environment::Diagonal(param_vec(p, "p")?)),
            "pure" => {
                let amps = self
                    .amplitudes
                    .as_ref()
                    .ok_or_else(|| LabError::Config("pure environment needs `amplitudes`".into()))?;
                Ok(Environment::Pure(state_from_pairs(amps)?))
            }
            "mixed" => {
                let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(p.get("matrix").cloned().unwrap_or(Value::Null))
                    .map_err(|_| LabError::Config("mixed environment needs `params.matrix` of [re, im] pairs".into()))?;
                Ok(Environment::Mixed(DensityOperator::from_matrix(matrix_from_pairs(&rows)?)?))
            }
            other => Err(LabError::Config(format!(
                "unknown environment kind `{other}` (expected fock, thermal, diagonal, pure or mixed)"
            ))),
        }
    }

    pub fn from_environment(env: &Environment) -> Self {
        match env {
            Environment::Fock(n) => Self {
                kind: "fock".into(),
                params: json!({ "n": n }),
                amplitudes: None,
            },
            Environment::Thermal(n) => Self {
                kind: "thermal".into(),
                params: json!({ "nbar": n }),
                amplitudes: None,
            },
            Environment::Diagonal(p) => Self {
                kind: "diagonal".into(),
                params: json!({ "p": p }),
                amplitudes: None,
            },
            Environment::Pure(psi) => Self {
                kind: "pure".into(),
                params: Value::Null,
                amplitudes: Some(psi.to_pairs()),
            },
            Environment::Mixed(rho) => Self {
                kind: "mixed".into(),
                params: json!({ "matrix": matrix_to_pairs(rho.matrix()) }),
                amplitudes: None,
            },
        }
    }
}

/// `{"type": "attenuator", "eta": …, "environment": {…}}` or the amplifier
/// analogue with `"gain"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    #[serde(rename = "type", default = "default_kind")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<f64>,
    pub environment: EnvironmentDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_output_cutoff: Option<usize>,
}

fn default_kind() -> String {
    "attenuator".into()
}

impl ChannelDoc {
    pub fn to_spec(&self) -> Result<ChannelSpec, LabError> {
        let env = self.environment.to_environment()?;
        let spec = match self.kind.as_str() {
            "attenuator" => ChannelSpec::attenuator(
                self.eta
                    .ok_or_else(|| LabError::Config("attenuator needs `eta`".into()))?,
                env,
            )?,
            "amplifier" => ChannelSpec::amplifier(
                self.gain
                    .ok_or_else(|| LabError::Config("amplifier needs `gain`".into()))?,
                env,
            )?,
            other => {
                return Err(LabError::Config(format!(
                    "unknown channel type `{other}` (expected attenuator or amplifier)"
                )))
            }
        };
        Ok(match self.max_output_cutoff {
            Some(cap) => spec.with_max_output_cutoff(cap),
            None => spec,
        })
    }

    pub fn from_spec(spec: &ChannelSpec) -> Self {
        let (kind, eta, gain) = match spec.kind() {
            ChannelKind::Attenuator { eta } => ("attenuator", Some(eta), None),
            ChannelKind::Amplifier { gain } => ("amplifier", None, Some(gain)),
        };
        Self {
            kind: kind.into(),
            eta,
            gain,
            environment: EnvironmentDoc::from_environment(spec.environment()),
            max_output_cutoff: None,
        }
    }
}

/// Reads inline JSON, or a file when the argument does not start with `{`.
pub fn read_json_arg<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T, LabError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| LabError::Config(format!("cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| LabError::Config(format!("invalid JSON in `{arg}`: {e}")))
}

/// Entropy unit for every reported entropic quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Nats,
    Bits,
}

impl Unit {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// What every output carries: tool version, resolved configuration and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub command: String,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: &str, config: Value, seed: Option<u64>) -> Self {
        Self {
            tool: TOOL.into(),
            command: command.into(),
            config,
            seed,
        }
    }

    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# tool: {}", self.tool),
            format!("# command: {}", self.command),
            format!("# config: {}", self.config),
        ];
        if let Some(s) = self.seed {
            lines.push(format!("# seed: {s}"));
        }
        lines
    }
}

/// A rectangular table of numbers with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `#` lines written after the provenance header.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row.into_iter().map(|v| v + 0.0).collect());
    }

    pub fn write_csv<W: Write>(&self, out: &mut W, prov: &Provenance) -> Result<(), LabError> {
        for line in prov.header_lines() {
            writeln!(out, "{line}")?;
        }
        for note in &self.notes {
            writeln!(out, "# {note}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, prov: &Provenance) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.clone(), json!(v)))
                        .collect(),
                )
            })
            .collect();
        json!({ "provenance": prov, "notes": self.notes, "rows": rows })
    }

    pub fn write<W: Write>(&self, out: &mut W, prov: &Provenance, format: Format) -> Result<(), LabError> {
        match format {
            Format::Csv => self.write_csv(out, prov),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json(prov))?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}

/// Parses the numeric body of a CSV written by [`Table::write_csv`].
pub fn read_csv_table(text: &str) -> Result<Table, LabError> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|s| s.parse::<f64>().map_err(|e| LabError::Config(format!("bad number `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(Table {
        columns,
        rows,
        notes: Vec::new(),
    })
}

fn symmetry_json(s: &Symmetry, residual: f64) -> Value {
    match s {
        Symmetry::Rotation(t) => json!({ "kind": "rotation", "angle": t, "residual": residual }),
        Symmetry::Reflection(t) => json!({ "kind": "reflection", "angle": t, "residual": residual }),
    }
}

pub fn params_json(p: &MoeParams) -> Value {
    json!({
        "n_fock": p.n_fock,
        "n_init": p.n_init,
        "n_loop": p.n_loop,
        "n_it": p.n_it,
        "delta0": p.delta0,
        "seed": p.seed,
    })
}

/// JSON rendering of a search report, entropies converted to `unit`.
pub fn report_json(r: &MoeReport, unit: Unit) -> Value {
    let ansatz = match r.ansatz {
        Ansatz::Full => json!({ "kind": "full" }),
        Ansatz::Symmetric { m, p } => json!({ "kind": "symmetric", "m": m, "p": p }),
    };
    json!({
        "unit": unit.suffix(),
        "best_entropy": unit.convert(r.best_entropy),
        "best_state": r.best_state.to_pairs(),
        "centered_entropy": unit.convert(r.centered_entropy),
        "centered_state": r.centered_state.to_pairs(),
        "params": params_json(&r.params),
        "ansatz": ansatz,
        "channel": ChannelDoc::from_spec(&r.channel),
        "coherent": {
            "alpha": [r.coherent.alpha.re, r.coherent.alpha.im],
            "fidelity": r.coherent.fidelity,
        },
        "symmetry_residuals": r
            .symmetry_residuals
            .iter()
            .map(|(s, v)| symmetry_json(s, *v))
            .collect::<Vec<_>>(),
        "restart": r.restart,
        "restart_entropies": r.restart_entropies.iter().map(|s| unit.convert(*s)).collect::<Vec<_>>(),
        "trace": r.trace.iter().map(|(i, s)| json!([i, unit.convert(*s)])).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn environment_round_trip() {
        let envs = [
            Environment::Fock(2),
            Environment::Thermal(0.5),
            Environment::Diagonal(vec![0.25, 0.75]),
            Environment::Pure(FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()),
        ];
        for env in envs {
            let doc = EnvironmentDoc::from_environment(&env);
            let text = serde_json::to_string(&doc).unwrap();
            let back: EnvironmentDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_environment().unwrap(), env);
        }
    }

    #[test]
    fn channel_doc_parses_inline_json() {
        let doc: ChannelDoc = read_json_arg(
            r#"{"type":"attenuator","eta":0.5,"environment":{"kind":"pure","amplitudes":[[1,0],[0,0],[0,0],[1,0]]}}"#,
        )
        .unwrap();
        let spec = doc.to_spec().unwrap();
        assert_eq!(spec.transmissivity(), 0.5);
        assert!(!spec.is_phase_covariant());
    }

    #[test]
    fn bad_documents_are_config_errors() {
        let doc: ChannelDoc = read_json_arg(r#"{"environment":{"kind":"fock","params":{"n":1}}}"#).unwrap();
        assert!(matches!(doc.to_spec(), Err(LabError::Config(_))));
        let doc: ChannelDoc = read_json_arg(r#"{"eta":0.5,"environment":{"kind":"squeezed"}}"#).unwrap();
        assert!(matches!(doc.to_spec(), Err(LabError::Config(_))));
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![0.1, -2.5e-7]);
        t.push(vec![1.0 / 3.0, 4.0]);
        let prov = Provenance::new("test", json!({"x": 1}), Some(9));
        let mut buf = Vec::new();
        t.write_csv(&mut buf, &prov).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# tool: bosonlab"));
        let back = read_csv_table(&text).unwrap();
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.columns, t.columns);
    }
}
