//! JSON file formats and plain-text report rendering.
//!
//! Matrices: `{"dim": d, "re": [[..]], "im": [[..]]}`, row-major.
//! POVMs: `{"kind": "povm", "effects": [<matrix>, ..]}`.
//! Vector sets: `{"kind": "vector_set", "vectors": [[x, y, z], ..]}`.
//! Frame samples: `{"kind": "frame_samples", "dim": d, "samples": [{"effect": <matrix>, "value": v}, ..]}`.
//! Admissibility: `{"kind": "admissibility", "l_max": L, "tol": t, "rows": [{"l", "max_abs", "allowed", "marginal"}, ..]}`.

use std::fmt::Write as _;

use nalgebra::Vector3;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::PlatonicTable;
use crate::error::Error as MathError;
use crate::frame::{sample_effects, FrameOracle};
use crate::geometry::UnitVectorSet;
use crate::harmonics::AdmissibilitySet;
use crate::operator::{ConvexDecomposition, DensityOperator, Effect, HermitianOperator, Povm};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("expected kind `{expected}`, found `{found}`")]
    WrongKind { expected: String, found: String },
    #[error("`{path}`: {source}")]
    Invalid {
        path: String,
        #[source]
        source: MathError,
    },
}

fn invalid(path: impl Into<String>) -> impl FnOnce(MathError) -> FormatError {
    let path = path.into();
    move |source| FormatError::Invalid { path, source }
}

/// Deserializes `text`, reporting the path of the first failing field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn check_kind(found: &str, expected: &str) -> Result<(), FormatError> {
    if found != expected {
        return Err(FormatError::WrongKind {
            expected: expected.into(),
            found: found.into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_operator(op: &HermitianOperator) -> Self {
        let d = op.dim();
        let m = op.matrix();
        Self {
            dim: d,
            re: (0..d).map(|j| (0..d).map(|k| m[(j, k)].re + 0.0).collect()).collect(),
            im: (0..d).map(|j| (0..d).map(|k| m[(j, k)].im + 0.0).collect()).collect(),
        }
    }

    pub fn to_operator(&self, path: &str) -> Result<HermitianOperator, FormatError> {
        if self.re.len() != self.dim {
            return Err(FormatError::Invalid {
                path: format!("{path}.re"),
                source: MathError::Malformed(format!("{} rows, dim is {}", self.re.len(), self.dim)),
            });
        }
        HermitianOperator::from_parts(&self.re, &self.im).map_err(invalid(path))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmJson {
    pub kind: String,
    pub effects: Vec<MatrixJson>,
}

impl PovmJson {
    pub fn from_povm(povm: &Povm) -> Self {
        Self {
            kind: "povm".into(),
            effects: povm.effects().iter().map(|e| MatrixJson::from_operator(e.op())).collect(),
        }
    }

    pub fn to_povm(&self) -> Result<Povm, FormatError> {
        check_kind(&self.kind, "povm")?;
        let mut effects = Vec::with_capacity(self.effects.len());
        for (k, m) in self.effects.iter().enumerate() {
            let path = format!("effects[{k}]");
            let op = m.to_operator(&path)?;
            effects.push(Effect::new(op).map_err(invalid(path))?);
        }
        Povm::new(effects).map_err(invalid("effects"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSetJson {
    pub kind: String,
    pub vectors: Vec<[f64; 3]>,
}

impl VectorSetJson {
    pub fn from_set(set: &UnitVectorSet) -> Self {
        Self {
            kind: "vector_set".into(),
            vectors: set.vectors().iter().map(|v| [v.x, v.y, v.z]).collect(),
        }
    }

    /// Normalizes vectors within `1e-6` of unit length; rejects the rest.
    pub fn to_set(&self) -> Result<UnitVectorSet, FormatError> {
        check_kind(&self.kind, "vector_set")?;
        for (k, v) in self.vectors.iter().enumerate() {
            let norm = Vector3::from(*v).norm();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(FormatError::Invalid {
                    path: format!("vectors[{k}]"),
                    source: MathError::NotUnitVector { norm },
                });
            }
        }
        UnitVectorSet::normalized(self.vectors.iter().map(|v| Vector3::from(*v)).collect())
            .map_err(invalid("vectors"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSample {
    pub effect: MatrixJson,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSamplesJson {
    pub kind: String,
    pub dim: usize,
    pub samples: Vec<FrameSample>,
}

/// Entrywise tolerance when matching a sample to a required effect.
pub const SAMPLE_MATCH_TOL: f64 = 1e-9;

impl FrameSamplesJson {
    /// Samples of `f` on the required effect set of [`sample_effects`].
    pub fn from_oracle(f: &dyn FrameOracle) -> Self {
        let dim = f.dim();
        Self {
            kind: "frame_samples".into(),
            dim,
            samples: sample_effects(dim)
                .iter()
                .map(|e| FrameSample {
                    effect: MatrixJson::from_operator(e.op()),
                    value: f.eval(e),
                })
                .collect(),
        }
    }

    /// Values on the required effects, in order. Extra samples are ignored.
    pub fn required_values(&self) -> Result<Vec<f64>, FormatError> {
        check_kind(&self.kind, "frame_samples")?;
        let mut ops = Vec::with_capacity(self.samples.len());
        for (k, s) in self.samples.iter().enumerate() {
            let path = format!("samples[{k}].effect");
            let op = s.effect.to_operator(&path)?;
            if op.dim() != self.dim {
                return Err(FormatError::Invalid {
                    path,
                    source: MathError::DimensionMismatch {
                        expected: self.dim,
                        found: op.dim(),
                    },
                });
            }
            ops.push((op, s.value));
        }
        let required = sample_effects(self.dim);
        let mut values = Vec::with_capacity(required.len());
        let mut missing = 0;
        for e in &required {
            match ops.iter().find(|(op, _)| (op - e.op()).max_abs() <= SAMPLE_MATCH_TOL) {
                Some((_, v)) => values.push(*v),
                None => missing += 1,
            }
        }
        if missing > 0 {
            return Err(FormatError::Invalid {
                path: "samples".into(),
                source: MathError::MissingSamples {
                    missing,
                    required: required.len(),
                },
            });
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityRow {
    pub l: usize,
    pub max_abs: f64,
    pub allowed: bool,
    pub marginal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub kind: String,
    pub l_max: usize,
    pub tol: f64,
    pub rows: Vec<AdmissibilityRow>,
}

impl AdmissibilityReport {
    pub fn from_set(adm: &AdmissibilitySet) -> Self {
        Self {
            kind: "admissibility".into(),
            l_max: adm.l_max,
            tol: adm.tol,
            rows: adm
                .evidence
                .iter()
                .map(|(&l, &max_abs)| AdmissibilityRow {
                    l,
                    max_abs,
                    allowed: adm.allowed.contains(&l),
                    marginal: adm.marginal.contains(&l),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# admissible harmonics, l_max = {}, tol = {}", self.l_max, sci(self.tol));
        let _ = writeln!(out, "{:>4}  {:>14}  {:>8}  {:>8}", "l", "max_abs", "allowed", "marginal");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {:>14}  {:>8}  {:>8}",
                r.l,
                sci(r.max_abs),
                yes_no(r.allowed),
                yes_no(r.marginal)
            );
        }
        let allowed: Vec<String> = self.rows.iter().filter(|r| r.allowed).map(|r| r.l.to_string()).collect();
        let _ = writeln!(out, "allowed: {}", allowed.join(", "));
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub rank: usize,
    pub projector: MatrixJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub kind: String,
    pub dim: usize,
    pub terms: Vec<DecompositionTerm>,
}

impl DecompositionJson {
    pub fn from_decomposition(dec: &ConvexDecomposition) -> Self {
        Self {
            kind: "decomposition".into(),
            dim: dec.dim(),
            terms: dec
                .terms
                .iter()
                .map(|t| DecompositionTerm {
                    weight: t.weight,
                    rank: t.projector.rank(),
                    projector: MatrixJson::from_operator(t.projector.op()),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# convex decomposition into projectors, dim = {}", self.dim);
        let _ = writeln!(out, "{:>4}  {:>14}  {:>6}", "term", "weight", "rank");
        for (k, t) in self.terms.iter().enumerate() {
            let _ = writeln!(out, "{:>4}  {:>14}  {:>6}", k, sci(t.weight), t.rank);
        }
        out
    }
}

pub fn density_json(w: &DensityOperator) -> MatrixJson {
    MatrixJson::from_operator(w.op())
}

pub fn platonic_table_text(table: &PlatonicTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# allowed harmonics of the platonic solids, l_max = {}", table.l_max);
    let _ = writeln!(out, "{:<14}  {:>8}  {:<40}  {:<9}  beyond reference range", "solid", "vertices", "allowed", "reference");
    for r in &table.rows {
        let allowed: Vec<String> = r.allowed.iter().map(|l| l.to_string()).collect();
        let beyond: Vec<String> = r.beyond_reference.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            out,
            "{:<14}  {:>8}  {:<40}  {:<9}  {}",
            r.solid,
            r.vertices,
            allowed.join(","),
            if r.matches_reference { "match" } else { "MISMATCH" },
            if beyond.is_empty() { "-".to_string() } else { beyond.join(",") }
        );
    }
    out
}

/// Scientific notation with six significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
