//! Sparse Ising Hamiltonians and the data that flows through samplers.
//!
//! An [`IsingModel`] keeps stable integer labels for its variables. Labels are
//! identifiers, not indices: contraction removes variables without renumbering
//! the rest. Coefficients that are exactly zero are never stored.

mod gauge;
mod generate;
mod graph;
pub(crate) mod indexed;
pub mod io;
mod qubo;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use gauge::{apply_gauge, ungauge_sample, Gauge};
pub use generate::{random_model, Distribution, ProblemSpec};
pub use graph::connected_components;
pub use qubo::{ising_to_qubo, qubo_energy, qubo_to_ising, QuboModel};

/// Stable variable identifier.
pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("self-coupler on variable {0}")]
    SelfCoupler(Label),
    #[error("non-finite coefficient {value} at {at}")]
    NonFinite { at: String, value: f64 },
    #[error("assignment does not match the model variables: {0}")]
    DomainMismatch(String),
    #[error("invalid spin value {0} (expected -1 or +1)")]
    InvalidSpin(i64),
    #[error("invalid binary value {0} (expected 0 or 1)")]
    InvalidBinary(i64),
    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),
    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed document: {0}")]
    Format(String),
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        ModelError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// A spin value, `-1` or `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn value(self) -> i8 {
        match self {
            Spin::Down => -1,
            Spin::Up => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Down => Spin::Up,
            Spin::Up => Spin::Down,
        }
    }

    pub fn from_value(v: i64) -> Result<Spin, ModelError> {
        match v {
            -1 => Ok(Spin::Down),
            1 => Ok(Spin::Up),
            other => Err(ModelError::InvalidSpin(other)),
        }
    }

    /// Maps the binary value `x` to the spin `2x - 1`.
    pub fn from_bit(bit: bool) -> Spin {
        if bit {
            Spin::Up
        } else {
            Spin::Down
        }
    }

    pub fn to_bit(self) -> bool {
        self == Spin::Up
    }
}

impl Mul for Spin {
    type Output = Spin;

    fn mul(self, rhs: Spin) -> Spin {
        if self == rhs {
            Spin::Up
        } else {
            Spin::Down
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Down => f.write_str("-1"),
            Spin::Up => f.write_str("+1"),
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Spin::from_value(v).map_err(serde::de::Error::custom)
    }
}

fn check_finite(value: f64, at: impl FnOnce() -> String) -> Result<(), ModelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonFinite { at: at(), value })
    }
}

fn ordered(i: Label, j: Label) -> Result<(Label, Label), ModelError> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Ok((i, j)),
        std::cmp::Ordering::Greater => Ok((j, i)),
        std::cmp::Ordering::Equal => Err(ModelError::SelfCoupler(i)),
    }
}

/// Sparse Ising Hamiltonian `E(z) = sum_i h_i z_i + sum_{i<j} J_ij z_i z_j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IsingModel {
    variables: BTreeSet<Label>,
    linear: BTreeMap<Label, f64>,
    quadratic: BTreeMap<(Label, Label), f64>,
}

impl IsingModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a model from bias and coupler lists. Repeated entries accumulate.
    pub fn from_parts(
        linear: impl IntoIterator<Item = (Label, f64)>,
        quadratic: impl IntoIterator<Item = ((Label, Label), f64)>,
    ) -> Result<Self, ModelError> {
        let mut model = Self::new();
        for (i, h) in linear {
            model.add_linear(i, h)?;
        }
        for ((i, j), v) in quadratic {
            model.add_quadratic(i, j, v)?;
        }
        Ok(model)
    }

    pub fn add_variable(&mut self, label: Label) {
        self.variables.insert(label);
    }

    pub fn set_linear(&mut self, label: Label, bias: f64) -> Result<(), ModelError> {
        check_finite(bias, || format!("h[{label}]"))?;
        self.variables.insert(label);
        if bias == 0.0 {
            self.linear.remove(&label);
        } else {
            self.linear.insert(label, bias);
        }
        Ok(())
    }

    pub fn add_linear(&mut self, label: Label, delta: f64) -> Result<(), ModelError> {
        let current = self.linear(label);
        self.set_linear(label, current + delta)
    }

    pub fn set_quadratic(&mut self, i: Label, j: Label, value: f64) -> Result<(), ModelError> {
        let key = ordered(i, j)?;
        check_finite(value, || format!("J[{},{}]", key.0, key.1))?;
        self.variables.insert(key.0);
        self.variables.insert(key.1);
        if value == 0.0 {
            self.quadratic.remove(&key);
        } else {
            self.quadratic.insert(key, value);
        }
        Ok(())
    }

    pub fn add_quadratic(&mut self, i: Label, j: Label, delta: f64) -> Result<(), ModelError> {
        let current = self.quadratic(i, j);
        self.set_quadratic(i, j, current + delta)
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_couplers(&self) -> usize {
        self.quadratic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.variables.contains(&label)
    }

    pub fn variables(&self) -> &BTreeSet<Label> {
        &self.variables
    }

    /// Bias of `label`; zero when absent.
    pub fn linear(&self, label: Label) -> f64 {
        self.linear.get(&label).copied().unwrap_or(0.0)
    }

    /// Coupler between `i` and `j` in either order; zero when absent.
    pub fn quadratic(&self, i: Label, j: Label) -> f64 {
        match ordered(i, j) {
            Ok(key) => self.quadratic.get(&key).copied().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    /// Nonzero biases in label order.
    pub fn linear_terms(&self) -> impl Iterator<Item = (Label, f64)> + '_ {
        self.linear.iter().map(|(&i, &h)| (i, h))
    }

    /// Nonzero couplers `((i, j), J_ij)` with `i < j`, in key order.
    pub fn quadratic_terms(&self) -> impl Iterator<Item = ((Label, Label), f64)> + '_ {
        self.quadratic.iter().map(|(&k, &v)| (k, v))
    }

    /// Neighbor lists of the coupling graph.
    pub fn adjacency(&self) -> BTreeMap<Label, Vec<(Label, f64)>> {
        let mut adj: BTreeMap<Label, Vec<(Label, f64)>> = BTreeMap::new();
        for (&(i, j), &v) in &self.quadratic {
            adj.entry(i).or_default().push((j, v));
            adj.entry(j).or_default().push((i, v));
        }
        adj
    }

    pub fn max_abs_linear(&self) -> f64 {
        self.linear.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_quadratic(&self) -> f64 {
        self.quadratic.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<IsingModel, ModelError> {
        let mut out = IsingModel {
            variables: self.variables.clone(),
            ..Default::default()
        };
        for (i, h) in self.linear_terms() {
            out.set_linear(i, h * factor)?;
        }
        for ((i, j), v) in self.quadratic_terms() {
            out.set_quadratic(i, j, v * factor)?;
        }
        Ok(out)
    }

    /// Energy of an assignment given as a label map.
    pub fn energy_of(&self, assignment: &BTreeMap<Label, Spin>) -> Result<f64, ModelError> {
        self.check_domain(assignment)?;
        let mut energy = 0.0;
        for (i, h) in self.linear_terms() {
            energy += h * assignment[&i].as_f64();
        }
        for ((i, j), v) in self.quadratic_terms() {
            energy += v * (assignment[&i] * assignment[&j]).as_f64();
        }
        Ok(energy)
    }

    pub fn check_domain(&self, assignment: &BTreeMap<Label, Spin>) -> Result<(), ModelError> {
        if assignment.len() == self.variables.len()
            && assignment.keys().zip(&self.variables).all(|(a, b)| a == b)
        {
            return Ok(());
        }
        if let Some(missing) = self.variables.iter().find(|v| !assignment.contains_key(v)) {
            return Err(ModelError::DomainMismatch(format!(
                "variable {missing} is not assigned"
            )));
        }
        let extra = assignment
            .keys()
            .find(|k| !self.variables.contains(k))
            .copied()
            .unwrap_or_default();
        Err(ModelError::DomainMismatch(format!(
            "variable {extra} is not part of the model"
        )))
    }
}

/// `sum_i h_i z_i + sum_{i<j} J_ij z_i z_j`, without any constant offset.
pub fn ising_energy(model: &IsingModel, z: &Sample) -> Result<f64, ModelError> {
    model.energy_of(z.assignment())
}

/// Scales a model so that `h` lies in `[-2, 2]` and `J` in `[-1, 1]`.
///
/// The divisor is `max(max|h|/2, max|J|, 1)`, so models already in range are
/// returned unchanged with scale `1`.
pub fn normalize(model: &IsingModel) -> (IsingModel, f64) {
    let scale = (model.max_abs_linear() / 2.0)
        .max(model.max_abs_quadratic())
        .max(1.0);
    if scale == 1.0 {
        return (model.clone(), 1.0);
    }
    let scaled = model
        .scaled(1.0 / scale)
        .expect("dividing finite coefficients by a scale >= 1 stays finite");
    (scaled, scale)
}

/// One spin assignment, optionally carrying its energy.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    assignment: BTreeMap<Label, Spin>,
    energy: Option<f64>,
}

impl Sample {
    pub fn new(assignment: BTreeMap<Label, Spin>) -> Self {
        Self {
            assignment,
            energy: None,
        }
    }

    /// Builds a sample from `(label, ±1)` pairs.
    pub fn from_values(values: impl IntoIterator<Item = (Label, i64)>) -> Result<Self, ModelError> {
        let assignment = values
            .into_iter()
            .map(|(l, v)| Spin::from_value(v).map(|s| (l, s)))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(assignment))
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = Some(energy);
        self
    }

    /// Evaluates and caches the energy on `model`.
    pub fn evaluated(mut self, model: &IsingModel) -> Result<Self, ModelError> {
        self.energy = Some(model.energy_of(&self.assignment)?);
        Ok(self)
    }

    pub fn energy(&self) -> Option<f64> {
        self.energy
    }

    pub fn assignment(&self) -> &BTreeMap<Label, Spin> {
        &self.assignment
    }

    pub fn into_assignment(self) -> BTreeMap<Label, Spin> {
        self.assignment
    }

    pub fn get(&self, label: Label) -> Option<Spin> {
        self.assignment.get(&label).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.assignment.keys().copied()
    }

    /// Spin values in label order.
    pub fn values(&self) -> Vec<i8> {
        self.assignment.values().map(|s| s.value()).collect()
    }

    /// Restriction to `labels`; labels the sample lacks are skipped.
    pub fn restricted(&self, labels: &BTreeSet<Label>) -> Sample {
        Sample::new(
            self.assignment
                .iter()
                .filter(|(l, _)| labels.contains(l))
                .map(|(&l, &s)| (l, s))
                .collect(),
        )
    }
}

/// The `n` reads returned by one sampler call, all over one variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    variables: BTreeSet<Label>,
    samples: Vec<Sample>,
}

impl SampleSet {
    pub fn new(variables: BTreeSet<Label>, samples: Vec<Sample>) -> Result<Self, ModelError> {
        if samples.is_empty() {
            return Err(ModelError::DomainMismatch(
                "a sample set needs at least one read".into(),
            ));
        }
        for (k, s) in samples.iter().enumerate() {
            if s.len() != variables.len() || !s.labels().zip(&variables).all(|(a, &b)| a == b) {
                return Err(ModelError::DomainMismatch(format!(
                    "read {k} does not cover exactly the sample-set variables"
                )));
            }
        }
        Ok(Self { variables, samples })
    }

    /// Validates reads against `model` and caches their energies on it.
    pub fn for_model(model: &IsingModel, samples: Vec<Sample>) -> Result<Self, ModelError> {
        let samples = samples
            .into_iter()
            .map(|s| s.evaluated(model))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(model.variables().clone(), samples)
    }

    pub fn variables(&self) -> &BTreeSet<Label> {
        &self.variables
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    /// Number of reads `n`.
    pub fn num_reads(&self) -> usize {
        self.samples.len()
    }

    /// Signed column sum `sum_j z_i^j`.
    pub fn column_sum(&self, label: Label) -> Option<i64> {
        if !self.variables.contains(&label) {
            return None;
        }
        Some(
            self.samples
                .iter()
                .map(|s| i64::from(s.assignment[&label].value()))
                .sum(),
        )
    }

    /// The first read with the lowest cached energy.
    pub fn best(&self) -> Option<&Sample> {
        let mut best: Option<&Sample> = None;
        for s in &self.samples {
            let e = s.energy?;
            if best.is_none_or(|b| e < b.energy.unwrap_or(f64::INFINITY)) {
                best = Some(s);
            }
        }
        best
    }

    pub fn lowest_energy(&self) -> Option<f64> {
        self.best().and_then(Sample::energy)
    }

    /// Re-evaluates every read on `model`.
    pub fn evaluated(self, model: &IsingModel) -> Result<Self, ModelError> {
        Self::for_model(model, self.samples)
    }

    /// Keeps only `labels` in every read.
    pub fn restricted(&self, labels: &BTreeSet<Label>) -> Result<Self, ModelError> {
        let variables: BTreeSet<Label> = self.variables.intersection(labels).copied().collect();
        let samples = self
            .samples
            .iter()
            .map(|s| s.restricted(&variables))
            .collect();
        Self::new(variables, samples)
    }
}
