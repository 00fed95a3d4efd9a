use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution as _, Uniform};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{IsingModel, Label, ModelError};
use crate::rng::{derive_seed, rng_from_seed, Rng as Generator};

/// Coefficient distribution for random benchmark problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// Uniform over `{-1, +1}`.
    Binary,
    /// Uniform on `[-1, +1]`.
    Uniform,
    /// Standard normal.
    Normal,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [Self::Binary, Self::Uniform, Self::Normal];

    /// Stable code used in seed derivation.
    pub fn code(self) -> u64 {
        match self {
            Self::Binary => 0,
            Self::Uniform => 1,
            Self::Normal => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Binary => "binary",
            Self::Uniform => "uniform",
            Self::Normal => "normal",
        }
    }

    fn draw(self, rng: &mut Generator) -> f64 {
        match self {
            Self::Binary => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::Uniform => Uniform::new_inclusive(-1.0, 1.0).sample(rng),
            Self::Normal => rng.sample(StandardNormal),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(Self::Binary),
            "uniform" => Ok(Self::Uniform),
            "normal" => Ok(Self::Normal),
            other => Err(ModelError::InvalidSpec(format!(
                "unknown distribution '{other}' (expected binary, uniform or normal)"
            ))),
        }
    }
}

/// Parameters of a random Ising instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub num_vars: usize,
    /// Independent inclusion probability of each of the `N(N-1)/2` edges.
    pub sparsity: f64,
    pub distribution: Distribution,
    pub seed: u64,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.num_vars == 0 {
            return Err(ModelError::InvalidSpec(
                "num_vars must be at least 1".into(),
            ));
        }
        if Label::try_from(self.num_vars).is_err() {
            return Err(ModelError::InvalidSpec(
                "num_vars exceeds the label range".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(ModelError::InvalidSpec(format!(
                "sparsity {} is outside [0, 1]",
                self.sparsity
            )));
        }
        Ok(())
    }
}

const EDGE_STREAM: u64 = 0;
const BIAS_STREAM: u64 = 1;
const COUPLER_STREAM: u64 = 2;

/// Generates a random model with labels `0..N`.
///
/// Three child streams of `spec.seed` are used: edge decisions are drawn for
/// pairs `(i, j)`, `i < j`, in lexicographic order; biases are drawn for every
/// variable in label order; coupler values are drawn for the selected edges in
/// the same lexicographic order.
pub fn random_model(spec: &ProblemSpec) -> Result<IsingModel, ModelError> {
    spec.validate()?;
    let n = spec.num_vars as Label;
    let mut edge_rng = rng_from_seed(derive_seed(spec.seed, EDGE_STREAM));
    let mut bias_rng = rng_from_seed(derive_seed(spec.seed, BIAS_STREAM));
    let mut coupler_rng = rng_from_seed(derive_seed(spec.seed, COUPLER_STREAM));

    let mut model = IsingModel::new();
    for i in 0..n {
        model.set_linear(i, spec.distribution.draw(&mut bias_rng))?;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if edge_rng.gen_bool(spec.sparsity) {
                model.set_quadratic(i, j, spec.distribution.draw(&mut coupler_rng))?;
            }
        }
    }
    Ok(model)
}
