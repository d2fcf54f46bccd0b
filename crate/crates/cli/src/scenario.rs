//! The scenario file format.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "model": "quantum",
//!   "dim": 2,
//!   "defaults": { "tol": 1e-9, "seed": 0, "shots": 100000 },
//!   "states":      { "zero": { "vector": [1, 0] } },
//!   "effects":     { "plus": { "projector": [0.7071067811865476, 0.7071067811865476] } },
//!   "operations":  { "id": { "type": "luders", "effect": "unit" } },
//!   "observables": { "Z": { "0": "p0", "1": "p1" } },
//!   "instruments": { "LZ": { "type": "luders", "observable": "Z" } }
//! }
//! ```
//!
//! Complex entries are written `[re, im]`, or as a bare number when real.
//! Matrices are row-major nested arrays. Classical states and effects are
//! plain arrays of reals and classical operations are `"matrix"` operations
//! with column sums at most 1. Objects refer to each other by name; `"unit"`
//! and `"zero"` are predefined effects unless the scenario defines them.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Classical,
    Quantum,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Classical => "classical",
            ModelKind::Quantum => "quantum",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixLiteral = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Weights(Vec<f64>),
    Vector { vector: Vec<Entry> },
    Matrix { matrix: MatrixLiteral },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EffectSpec {
    Values(Vec<f64>),
    Projector { projector: Vec<Entry> },
    Matrix { matrix: MatrixLiteral },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperationSpec {
    Identity,
    /// Classical: a column-substochastic matrix.
    Matrix {
        matrix: Vec<Vec<f64>>,
    },
    /// Quantum: `ρ ↦ Σ KᵢρKᵢ†`.
    Kraus {
        kraus: Vec<MatrixLiteral>,
    },
    /// Quantum: `ρ ↦ C^{1/2}ρC^{1/2}`.
    Luders {
        effect: String,
    },
    /// `s ↦ s(a)·α`.
    Holevo {
        effect: String,
        alpha: String,
    },
    /// `s ↦ Σ_x s(A_x)·α_x`.
    HolevoMixed {
        observable: String,
        alphas: BTreeMap<String, String>,
    },
}

impl OperationSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            OperationSpec::Identity => "identity",
            OperationSpec::Matrix { .. } => "matrix",
            OperationSpec::Kraus { .. } => "kraus",
            OperationSpec::Luders { .. } => "luders",
            OperationSpec::Holevo { .. } => "holevo",
            OperationSpec::HolevoMixed { .. } => "holevo-mixed",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstrumentSpec {
    /// Outcome label to operation name.
    Operations {
        operations: BTreeMap<String, String>,
    },
    /// Quantum: the Lüders instrument of an observable.
    Luders { observable: String },
    /// `x ↦ (s ↦ s(A_x)·α_x)`.
    Holevo {
        observable: String,
        alphas: BTreeMap<String, String>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default)]
    pub description: Option<String>,
    pub model: ModelKind,
    pub dim: usize,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub states: BTreeMap<String, StateSpec>,
    #[serde(default)]
    pub effects: BTreeMap<String, EffectSpec>,
    #[serde(default)]
    pub operations: BTreeMap<String, OperationSpec>,
    #[serde(default)]
    pub observables: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub instruments: BTreeMap<String, InstrumentSpec>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, String> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if scenario.schema != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                scenario.schema
            ));
        }
        if scenario.dim == 0 || scenario.dim > qtrans_core::MAX_DIM {
            return Err(format!(
                "dim {} is outside 1..={}",
                scenario.dim,
                qtrans_core::MAX_DIM
            ));
        }
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
