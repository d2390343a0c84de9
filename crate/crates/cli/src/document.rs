//! The machine-readable result of one command.

use lgpair::mf::MFMorphism;
use lgpair::rational::to_pq;
use lgpair::residues::GeneralisedFraction;
use lgpair::{PolyMatrix, Polynomial, Rational};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "lgpair.result/1";

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Invocation {
    pub name: String,
    pub manifest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

/// Where the random and truncation choices came from.
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub truncation_degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ext_history: Vec<Vec<(u32, usize)>>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ResultDocument {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: Invocation,
    pub outputs: Value,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ErrorDocument {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: Invocation,
    pub error: ErrorBody,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

pub fn rational(r: &Rational) -> Value {
    Value::String(to_pq(r))
}

pub fn rationals(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational).collect())
}

pub fn rational_matrix(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| rationals(r)).collect())
}

pub fn rational_rows(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(to_pq).collect()).collect()
}

pub fn polynomial(p: &Polynomial) -> Value {
    Value::String(p.to_string())
}

pub fn poly_matrix(m: &PolyMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| polynomial(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn morphism(f: &MFMorphism) -> Value {
    json!({
        "parity": f.parity(),
        "blocks": [poly_matrix(f.block(0)), poly_matrix(f.block(1))],
    })
}

pub fn fraction(fr: &GeneralisedFraction) -> Value {
    json!({
        "numerator": polynomial(fr.numerator()),
        "denominators": fr.denominators().iter().map(polynomial).collect::<Vec<_>>(),
        "relations": fr.context().relations().iter().map(polynomial).collect::<Vec<_>>(),
    })
}
