//! JSON documents for models and sample sets.
//!
//! Model document:
//!
//! ```json
//! {"num_vars": 2, "h": {"1": 1.0, "2": -1.0}, "J": {"1,2": -1.0}, "offset": 0.0}
//! ```
//!
//! Labels are decimal strings. Coupler keys are written as `"i,j"` with
//! `i < j` and accepted in either order on read. Every variable appears in
//! `h` on write (zero biases included) so the variable set round-trips.
//!
//! Sample-set document:
//!
//! ```json
//! {"samples": [{"assignment": {"1": 1, "2": -1}, "energy": 3.0}], "model_digest": "…"}
//! ```
//!
//! Floats are written with shortest round-trip formatting.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{IsingModel, Label, ModelError, Sample, SampleSet, Spin};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    num_vars: usize,
    #[serde(default)]
    h: BTreeMap<String, f64>,
    #[serde(rename = "J", default)]
    j: BTreeMap<String, f64>,
    #[serde(default)]
    offset: f64,
}

#[derive(Debug, Serialize)]
struct RemoteRequest<'a> {
    #[serde(flatten)]
    model: &'a ModelDoc,
    num_reads: usize,
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleDoc {
    assignment: BTreeMap<String, Spin>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleSetDoc {
    samples: Vec<SampleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model_digest: Option<String>,
}

fn parse_label(s: &str) -> Result<Label, ModelError> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ModelError::Format(format!("invalid variable label '{s}'")));
    }
    t.parse::<Label>()
        .map_err(|_| ModelError::Format(format!("variable label '{s}' is out of range")))
}

fn parse_pair(s: &str) -> Result<(Label, Label), ModelError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| ModelError::Format(format!("coupler key '{s}' is not of the form 'i,j'")))?;
    Ok((parse_label(a)?, parse_label(b)?))
}

fn model_doc(model: &IsingModel, offset: f64) -> ModelDoc {
    ModelDoc {
        num_vars: model.num_vars(),
        h: model
            .variables()
            .iter()
            .map(|&l| (l.to_string(), model.linear(l)))
            .collect(),
        j: model
            .quadratic_terms()
            .map(|((i, k), v)| (format!("{i},{k}"), v))
            .collect(),
        offset,
    }
}

/// Serializes a model and an energy offset as pretty-printed JSON.
pub fn model_to_json(model: &IsingModel, offset: f64) -> String {
    serde_json::to_string_pretty(&model_doc(model, offset)).expect("model documents serialize")
}

/// Parses a model document, returning the model and its offset.
pub fn model_from_json(text: &str) -> Result<(IsingModel, f64), ModelError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    if !doc.offset.is_finite() {
        return Err(ModelError::Format("offset is not finite".into()));
    }
    let mut model = IsingModel::new();
    let mut seen_labels = BTreeSet::new();
    for (key, &bias) in &doc.h {
        let label = parse_label(key)?;
        if !seen_labels.insert(label) {
            return Err(ModelError::Format(format!(
                "variable {label} appears twice in h"
            )));
        }
        model.set_linear(label, bias)?;
    }
    let mut seen_pairs = BTreeSet::new();
    for (key, &value) in &doc.j {
        let (i, k) = parse_pair(key)?;
        if i == k {
            return Err(ModelError::SelfCoupler(i));
        }
        if !seen_pairs.insert((i.min(k), i.max(k))) {
            return Err(ModelError::Format(format!(
                "coupler {i},{k} appears twice in J"
            )));
        }
        model.set_quadratic(i, k, value)?;
    }
    if model.num_vars() != doc.num_vars {
        return Err(ModelError::Format(format!(
            "num_vars is {} but the document mentions {} variables",
            doc.num_vars,
            model.num_vars()
        )));
    }
    Ok((model, doc.offset))
}

/// Hex SHA-256 of the compact canonical model document (offset zero).
pub fn model_digest(model: &IsingModel) -> String {
    let canonical =
        serde_json::to_string(&model_doc(model, 0.0)).expect("model documents serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Request body for a remote sampler: the model document plus `num_reads` and `seed`.
pub fn remote_request_json(model: &IsingModel, num_reads: usize, seed: u64) -> String {
    let doc = model_doc(model, 0.0);
    serde_json::to_string(&RemoteRequest {
        model: &doc,
        num_reads,
        seed,
    })
    .expect("request documents serialize")
}

pub fn sampleset_to_json(set: &SampleSet, model: &IsingModel) -> String {
    let doc = SampleSetDoc {
        samples: set
            .iter()
            .map(|s| SampleDoc {
                assignment: s
                    .assignment()
                    .iter()
                    .map(|(l, &v)| (l.to_string(), v))
                    .collect(),
                energy: s.energy(),
            })
            .collect(),
        model_digest: Some(model_digest(model)),
    };
    serde_json::to_string_pretty(&doc).expect("sample documents serialize")
}

/// A parsed sample-set document. Energies are whatever the document claims.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSampleSet {
    pub samples: Vec<Sample>,
    pub model_digest: Option<String>,
}

impl ParsedSampleSet {
    /// Checks the reads against `model` and replaces claimed energies with
    /// locally computed ones.
    pub fn validate(self, model: &IsingModel) -> Result<SampleSet, ModelError> {
        let samples = self
            .samples
            .into_iter()
            .map(|s| Sample::new(s.into_assignment()))
            .collect();
        SampleSet::for_model(model, samples)
    }
}

pub fn sampleset_from_json(text: &str) -> Result<ParsedSampleSet, ModelError> {
    let doc: SampleSetDoc = serde_json::from_str(text)?;
    let mut samples = Vec::with_capacity(doc.samples.len());
    for s in doc.samples {
        let mut assignment = BTreeMap::new();
        for (key, spin) in s.assignment {
            let label = parse_label(&key)?;
            if assignment.insert(label, spin).is_some() {
                return Err(ModelError::Format(format!(
                    "variable {label} assigned twice in one sample"
                )));
            }
        }
        let sample = Sample::new(assignment);
        samples.push(match s.energy {
            Some(e) => sample.with_energy(e),
            None => sample,
        });
    }
    Ok(ParsedSampleSet {
        samples,
        model_digest: doc.model_digest,
    })
}
