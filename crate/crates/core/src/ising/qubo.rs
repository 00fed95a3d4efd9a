use std::collections::{BTreeMap, BTreeSet};

use super::{ordered, IsingModel, Label, ModelError};

/// Binary quadratic form `sum_{i<=j} x_i Q_ij x_j` plus a constant offset.
///
/// The offset links the two representations: for `z = 2x - 1`,
/// `qubo_energy(x) + offset` equals the Ising energy of `z`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuboModel {
    variables: BTreeSet<Label>,
    q: BTreeMap<(Label, Label), f64>,
    pub offset: f64,
}

impl QuboModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, label: Label) {
        self.variables.insert(label);
    }

    /// Adds `delta` to `Q_ij`; `i == j` addresses the linear (diagonal) term.
    pub fn add(&mut self, i: Label, j: Label, delta: f64) -> Result<(), ModelError> {
        let key = if i == j { (i, i) } else { ordered(i, j)? };
        self.variables.insert(key.0);
        self.variables.insert(key.1);
        let value = self.get(key.0, key.1) + delta;
        if !value.is_finite() {
            return Err(ModelError::NonFinite {
                at: format!("Q[{},{}]", key.0, key.1),
                value,
            });
        }
        if value == 0.0 {
            self.q.remove(&key);
        } else {
            self.q.insert(key, value);
        }
        Ok(())
    }

    pub fn get(&self, i: Label, j: Label) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.q.get(&key).copied().unwrap_or(0.0)
    }

    pub fn variables(&self) -> &BTreeSet<Label> {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    /// Nonzero entries with `i <= j`.
    pub fn terms(&self) -> impl Iterator<Item = ((Label, Label), f64)> + '_ {
        self.q.iter().map(|(&k, &v)| (k, v))
    }
}

/// `sum_{i<=j} x_i Q_ij x_j`. The offset is not included.
pub fn qubo_energy(qubo: &QuboModel, x: &BTreeMap<Label, bool>) -> Result<f64, ModelError> {
    if x.len() != qubo.variables.len() || !x.keys().zip(&qubo.variables).all(|(a, b)| a == b) {
        return Err(ModelError::DomainMismatch(
            "binary assignment does not cover exactly the QUBO variables".into(),
        ));
    }
    Ok(qubo
        .terms()
        .filter(|((i, j), _)| x[i] && x[j])
        .map(|(_, v)| v)
        .sum())
}

/// Rewrites an Ising model over binary variables `x = (z + 1) / 2`.
pub fn ising_to_qubo(model: &IsingModel) -> QuboModel {
    let mut qubo = QuboModel::new();
    for &v in model.variables() {
        qubo.add_variable(v);
    }
    let mut offset = 0.0;
    // Finite inputs keep every sum finite except on overflow, which the
    // model's own range makes unreachable in practice.
    for (i, h) in model.linear_terms() {
        qubo.add(i, i, 2.0 * h).expect("finite");
        offset -= h;
    }
    for ((i, j), v) in model.quadratic_terms() {
        qubo.add(i, j, 4.0 * v).expect("finite");
        qubo.add(i, i, -2.0 * v).expect("finite");
        qubo.add(j, j, -2.0 * v).expect("finite");
        offset += v;
    }
    qubo.offset = offset;
    qubo
}

/// Inverse of [`ising_to_qubo`]: returns the Ising model and the constant `c`
/// with `qubo_energy(x) + qubo.offset = ising_energy(z) + c`.
pub fn qubo_to_ising(qubo: &QuboModel) -> (IsingModel, f64) {
    let mut model = IsingModel::new();
    for &v in qubo.variables() {
        model.add_variable(v);
    }
    let mut offset = qubo.offset;
    for ((i, j), q) in qubo.terms() {
        if i == j {
            model.add_linear(i, q / 2.0).expect("finite");
            offset += q / 2.0;
        } else {
            model.add_quadratic(i, j, q / 4.0).expect("finite");
            model.add_linear(i, q / 4.0).expect("finite");
            model.add_linear(j, q / 4.0).expect("finite");
            offset += q / 4.0;
        }
    }
    (model, offset)
}
