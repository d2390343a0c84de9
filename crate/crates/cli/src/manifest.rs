//! Manifest files describing a potential with its named matrix
//! factorisations and morphisms. Optional sections hold residue queries
//! and search bounds.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use lgpair::mf::{ExtOptions, MFMorphism, MatrixFactorisation, MfError};
use lgpair::poly::PolyError;
use lgpair::{parse_poly, PolyMatrix, Polynomial, Ring};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("manifest parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{location}: {source}")]
    Polynomial {
        location: String,
        #[source]
        source: PolyError,
    },
    #[error("object '{name}' is invalid: {source}")]
    Object {
        name: String,
        #[source]
        source: MfError,
    },
    #[error("morphism '{name}' is invalid: {reason}")]
    Morphism { name: String, reason: String },
    #[error("{what} '{name}' is not defined")]
    Unknown { what: &'static str, name: String },
    #[error("name '{0}' is defined twice")]
    Duplicate(String),
    #[error("the ring needs at least one variable")]
    NoVariables,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    ring: Vec<String>,
    potential: String,
    #[serde(default)]
    objects: Vec<RawObject>,
    #[serde(default)]
    morphisms: Vec<RawMorphism>,
    #[serde(default)]
    residues: Vec<RawResidue>,
    #[serde(default)]
    seeds: Vec<u64>,
    #[serde(default)]
    bounds: Bounds,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    name: String,
    d0: Vec<Vec<String>>,
    d1: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    name: String,
    source: String,
    target: String,
    parity: u8,
    blocks: [Vec<Vec<String>>; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResidue {
    numerator: String,
    denominators: Vec<String>,
}

/// Search and truncation limits.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    pub sop_attempts: usize,
    pub ext_start: Option<u32>,
    pub ext_steps: u32,
    pub selfcheck_trials: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            sop_attempts: 100,
            ext_start: None,
            ext_steps: 6,
            selfcheck_trials: 3,
        }
    }
}

impl Bounds {
    pub fn ext_options(&self, truncation: Option<u32>) -> ExtOptions {
        ExtOptions {
            start: truncation.or(self.ext_start),
            max_steps: self.ext_steps,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedObject {
    pub name: String,
    pub object: Arc<MatrixFactorisation>,
}

#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub name: String,
    pub source: String,
    pub target: String,
    pub morphism: MFMorphism,
}

#[derive(Clone, Debug)]
pub struct ResidueQuery {
    pub numerator: Polynomial,
    pub denominators: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub ring: Arc<Ring>,
    pub potential: Polynomial,
    pub objects: Vec<NamedObject>,
    pub morphisms: Vec<NamedMorphism>,
    pub residues: Vec<ResidueQuery>,
    pub seeds: Vec<u64>,
    pub bounds: Bounds,
}

impl Manifest {
    pub fn object(&self, name: &str) -> Result<&NamedObject, ManifestError> {
        self.objects.iter().find(|o| o.name == name).ok_or_else(|| ManifestError::Unknown {
            what: "object",
            name: name.to_string(),
        })
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism, ManifestError> {
        self.morphisms.iter().find(|m| m.name == name).ok_or_else(|| ManifestError::Unknown {
            what: "morphism",
            name: name.to_string(),
        })
    }
}

pub fn load_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|e| ManifestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_manifest(&text)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| ManifestError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(raw)
}

fn poly(text: &str, ring: &Arc<Ring>, location: impl FnOnce() -> String) -> Result<Polynomial, ManifestError> {
    parse_poly(text, ring).map_err(|source| ManifestError::Polynomial {
        location: location(),
        source,
    })
}

fn matrix(rows: &[Vec<String>], ring: &Arc<Ring>, location: &str) -> Result<PolyMatrix, ManifestError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(ManifestError::Polynomial {
            location: location.to_string(),
            source: PolyError::Syntax {
                position: 0,
                message: "rows have different lengths".into(),
            },
        });
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            parsed.push(poly(entry, ring, || format!("{location}[{i}][{j}]"))?);
        }
        out.push(parsed);
    }
    Ok(if out.is_empty() { PolyMatrix::zero(ring, 0, 0) } else { PolyMatrix::from_rows(ring, out) })
}

fn build(raw: RawManifest) -> Result<Manifest, ManifestError> {
    if raw.ring.is_empty() {
        return Err(ManifestError::NoVariables);
    }
    let ring = Ring::new(raw.ring.iter().cloned());
    let potential = poly(&raw.potential, &ring, || "potential".into())?;
    let mut names = BTreeSet::new();
    let mut objects = Vec::with_capacity(raw.objects.len());
    for o in &raw.objects {
        if !names.insert(o.name.clone()) {
            return Err(ManifestError::Duplicate(o.name.clone()));
        }
        let d0 = matrix(&o.d0, &ring, &format!("objects.{}.d0", o.name))?;
        let d1 = matrix(&o.d1, &ring, &format!("objects.{}.d1", o.name))?;
        let object = MatrixFactorisation::new(potential.clone(), d0, d1).map_err(|source| ManifestError::Object {
            name: o.name.clone(),
            source,
        })?;
        objects.push(NamedObject {
            name: o.name.clone(),
            object: Arc::new(object),
        });
    }
    let find = |name: &str| {
        objects.iter().find(|o| o.name == name).map(|o| o.object.clone()).ok_or_else(|| ManifestError::Unknown {
            what: "object",
            name: name.to_string(),
        })
    };
    let mut morphisms = Vec::with_capacity(raw.morphisms.len());
    for m in &raw.morphisms {
        if !names.insert(m.name.clone()) {
            return Err(ManifestError::Duplicate(m.name.clone()));
        }
        let (source, target) = (find(&m.source)?, find(&m.target)?);
        let b0 = matrix(&m.blocks[0], &ring, &format!("morphisms.{}.blocks[0]", m.name))?;
        let b1 = matrix(&m.blocks[1], &ring, &format!("morphisms.{}.blocks[1]", m.name))?;
        if m.parity > 1 {
            return Err(ManifestError::Morphism {
                name: m.name.clone(),
                reason: format!("parity must be 0 or 1, found {}", m.parity),
            });
        }
        let morphism = MFMorphism::new(&source, &target, m.parity, [b0, b1]).map_err(|e| ManifestError::Morphism {
            name: m.name.clone(),
            reason: e.to_string(),
        })?;
        morphisms.push(NamedMorphism {
            name: m.name.clone(),
            source: m.source.clone(),
            target: m.target.clone(),
            morphism,
        });
    }
    let mut residues = Vec::with_capacity(raw.residues.len());
    for (k, r) in raw.residues.iter().enumerate() {
        let numerator = poly(&r.numerator, &ring, || format!("residues[{k}].numerator"))?;
        let denominators = r
            .denominators
            .iter()
            .enumerate()
            .map(|(j, d)| poly(d, &ring, || format!("residues[{k}].denominators[{j}]")))
            .collect::<Result<_, _>>()?;
        residues.push(ResidueQuery { numerator, denominators });
    }
    Ok(Manifest {
        ring,
        potential,
        objects,
        morphisms,
        residues,
        seeds: raw.seeds,
        bounds: raw.bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: &str = r#"{"ring": ["x"], "potential": "x^2",
        "objects": [{"name": "X", "d0": [["x"]], "d1": [["x"]]}],
        "morphisms": [{"name": "g", "source": "X", "target": "X", "parity": 1, "blocks": [[["-1"]], [["1"]]]}]}"#;

    #[test]
    fn loads_a_small_manifest() {
        let m = parse_manifest(A1).unwrap();
        assert_eq!(m.objects.len(), 1);
        assert_eq!(m.morphism("g").unwrap().morphism.parity(), 1);
        assert_eq!(m.bounds, Bounds::default());
    }

    #[test]
    fn empty_object_list_is_fine() {
        let m = parse_manifest(r#"{"ring": ["x", "y"], "potential": "x^2*y + y^4"}"#).unwrap();
        assert!(m.objects.is_empty());
    }

    #[test]
    fn reports_the_failing_identity() {
        let bad = r#"{"ring": ["x", "y"], "potential": "x^2",
            "objects": [{"name": "Bad", "d0": [["x"]], "d1": [["y"]]}]}"#;
        match parse_manifest(bad) {
            Err(ManifestError::Object { name, source: MfError::NotAFactorisation { identity, .. } }) => {
                assert_eq!(name, "Bad");
                assert!(identity.contains("W*I"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_parse_locations_and_names() {
        match parse_manifest("{\n  \"ring\": [\"x\"],\n  \"potential\": 3\n}") {
            Err(ManifestError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let unknown = A1.replace("\"source\": \"X\"", "\"source\": \"Y\"");
        assert!(matches!(parse_manifest(&unknown), Err(ManifestError::Unknown { what: "object", .. })));
        let typo = A1.replace("\"x^2\"", "\"x^2 + q\"");
        assert!(matches!(parse_manifest(&typo), Err(ManifestError::Polynomial { .. })));
    }
}
