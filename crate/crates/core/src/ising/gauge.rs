use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::{IsingModel, Label, ModelError, Sample, Spin};
use crate::rng::rng_from_seed;

/// A spin-reversal transform: one sign per variable.
///
/// Gauging maps `h_i -> g_i h_i` and `J_ij -> g_i g_j J_ij`. A state `z` of the
/// original model has the same energy as `g * z` on the gauged model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauge {
    signs: BTreeMap<Label, Spin>,
}

impl Gauge {
    pub fn new(signs: BTreeMap<Label, Spin>) -> Self {
        Self { signs }
    }

    pub fn identity(variables: &BTreeSet<Label>) -> Self {
        Self::new(variables.iter().map(|&l| (l, Spin::Up)).collect())
    }

    /// Independent fair signs per variable, in label order.
    pub fn random(variables: &BTreeSet<Label>, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        Self::new(
            variables
                .iter()
                .map(|&l| (l, Spin::from_bit(rng.gen::<bool>())))
                .collect(),
        )
    }

    pub fn sign(&self, label: Label) -> Option<Spin> {
        self.signs.get(&label).copied()
    }

    pub fn signs(&self) -> &BTreeMap<Label, Spin> {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.signs.values().all(|&s| s == Spin::Up)
    }

    fn covers(&self, labels: &BTreeSet<Label>) -> Result<(), ModelError> {
        match labels.iter().find(|l| !self.signs.contains_key(l)) {
            Some(l) => Err(ModelError::DomainMismatch(format!(
                "gauge has no sign for variable {l}"
            ))),
            None => Ok(()),
        }
    }
}

pub fn apply_gauge(model: &IsingModel, g: &Gauge) -> Result<IsingModel, ModelError> {
    g.covers(model.variables())?;
    let mut out = IsingModel::new();
    for &v in model.variables() {
        out.add_variable(v);
    }
    for (i, h) in model.linear_terms() {
        out.set_linear(i, g.signs[&i].as_f64() * h)?;
    }
    for ((i, j), v) in model.quadratic_terms() {
        out.set_quadratic(i, j, (g.signs[&i] * g.signs[&j]).as_f64() * v)?;
    }
    Ok(out)
}

/// Maps a state of the gauged model back to the original: `z_i = g_i z'_i`.
///
/// The map is an involution, so it also carries original states forward.
/// Any cached energy is kept, since gauging preserves it.
pub fn ungauge_sample(z: &Sample, g: &Gauge) -> Result<Sample, ModelError> {
    let assignment = z
        .assignment()
        .iter()
        .map(|(&l, &s)| match g.sign(l) {
            Some(sign) => Ok((l, sign * s)),
            None => Err(ModelError::DomainMismatch(format!(
                "gauge has no sign for variable {l}"
            ))),
        })
        .collect::<Result<_, _>>()?;
    let out = Sample::new(assignment);
    Ok(match z.energy() {
        Some(e) => out.with_energy(e),
        None => out,
    })
}
