//! Greedy variable fixing driven by sampler statistics.
//!
//! Each stage draws `n` reads of the current Hamiltonian and treats every spin
//! column as a ±1 random variable. Its uncertainty is
//! `u(z_i) = 1 - |sum_j z_i^j| / n`; spins with `u <= theta` are fixed to the
//! sign of the column sum and substituted into the Hamiltonian. Because
//! `theta < 0.5`, a fixable column never sums to zero. The loop ends when a
//! stage fixes nothing, no variables remain, or `max_stages` is reached.
//! Leftover spins are assigned by MQC over the last stage's reads.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::ising::{IsingModel, Label, ModelError, Sample, SampleSet, Spin};
use crate::postprocess::{mqc_reduce, sqc, MqcPolicy, PostprocessError};
use crate::rng::derive_seed;
use crate::samplers::{Sampler, SamplerError};

#[derive(Debug, Error)]
pub enum QagaError {
    #[error("invalid QAGA configuration: {0}")]
    InvalidConfig(String),
    #[error("variable {0} is not in the sample set")]
    UnknownLabel(Label),
    #[error("column of variable {0} sums to zero; its majority sign is undefined")]
    ZeroColumnSum(Label),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Postprocess(#[from] PostprocessError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QagaConfig {
    /// Uncertainty threshold in `[0, 0.5)`.
    pub theta: f64,
    /// Reads per stage.
    pub num_reads: usize,
    pub max_stages: usize,
    /// Polish the assembled solution with [`sqc`].
    pub final_local_search: bool,
    /// Stage `t` samples with `derive_seed(seed, t)`.
    pub seed: u64,
}

impl Default for QagaConfig {
    fn default() -> Self {
        Self {
            theta: 0.0,
            num_reads: 1000,
            max_stages: 64,
            final_local_search: true,
            seed: 0,
        }
    }
}

impl QagaConfig {
    pub fn validate(&self) -> Result<(), QagaError> {
        if !(0.0..0.5).contains(&self.theta) {
            return Err(QagaError::InvalidConfig(format!(
                "theta must lie in [0, 0.5), got {}",
                self.theta
            )));
        }
        if self.num_reads == 0 {
            return Err(QagaError::InvalidConfig(
                "num_reads must be at least 1".into(),
            ));
        }
        if self.max_stages == 0 {
            return Err(QagaError::InvalidConfig(
                "max_stages must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One sample-fix-contract iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub t: usize,
    /// Variables before contraction.
    pub vars: usize,
    /// Couplers before contraction.
    pub couplers: usize,
    pub fixed: BTreeMap<Label, Spin>,
    /// Lowest original-model energy among this stage's reads, each completed
    /// with the spins fixed in earlier stages.
    pub best_energy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QagaResult {
    pub solution: Sample,
    /// Energy of `solution` on the original model.
    pub energy: f64,
    pub stages: Vec<StageRecord>,
    pub used_mqc_fallback: bool,
    /// The best sampled state beat the assembled solution and was returned.
    pub used_incumbent: bool,
}

pub fn estimate_uncertainty(samples: &SampleSet, label: Label) -> Result<f64, QagaError> {
    let sum = samples
        .column_sum(label)
        .ok_or(QagaError::UnknownLabel(label))?;
    Ok(1.0 - sum.unsigned_abs() as f64 / samples.num_reads() as f64)
}

pub fn majority_sign(samples: &SampleSet, label: Label) -> Result<Spin, QagaError> {
    let sum = samples
        .column_sum(label)
        .ok_or(QagaError::UnknownLabel(label))?;
    match sum.signum() {
        1 => Ok(Spin::Up),
        -1 => Ok(Spin::Down),
        _ => Err(QagaError::ZeroColumnSum(label)),
    }
}

/// Every variable with `u <= theta`, mapped to its majority sign.
pub fn select_fixable(samples: &SampleSet, theta: f64) -> BTreeMap<Label, Spin> {
    samples
        .variables()
        .iter()
        .filter_map(|&l| {
            let u = estimate_uncertainty(samples, l).ok()?;
            if u <= theta {
                majority_sign(samples, l).ok().map(|s| (l, s))
            } else {
                None
            }
        })
        .collect()
}

/// Substitutes fixed spins into `model`.
///
/// Returns the model over the unfixed variables and the constant `c` such that
/// `E_model(fixed ∪ r) = E_contracted(r) + c` for every assignment `r` of the
/// unfixed variables.
pub fn contract(
    model: &IsingModel,
    fixed: &BTreeMap<Label, Spin>,
) -> Result<(IsingModel, f64), QagaError> {
    if let Some(&l) = fixed.keys().find(|l| !model.contains(**l)) {
        return Err(QagaError::UnknownLabel(l));
    }
    let mut out = IsingModel::new();
    let mut offset = 0.0;
    for &v in model.variables() {
        if !fixed.contains_key(&v) {
            out.add_variable(v);
            out.set_linear(v, model.linear(v))?;
        }
    }
    for (&v, &s) in fixed {
        offset += s.as_f64() * model.linear(v);
    }
    for ((i, j), w) in model.quadratic_terms() {
        match (fixed.get(&i), fixed.get(&j)) {
            (None, None) => out.set_quadratic(i, j, w)?,
            (Some(&si), None) => out.add_linear(j, si.as_f64() * w)?,
            (None, Some(&sj)) => out.add_linear(i, sj.as_f64() * w)?,
            (Some(&si), Some(&sj)) => offset += (si * sj).as_f64() * w,
        }
    }
    Ok((out, offset))
}

fn merge(fixed: &BTreeMap<Label, Spin>, rest: &Sample) -> Sample {
    let mut full = fixed.clone();
    full.extend(rest.assignment().iter().map(|(&l, &s)| (l, s)));
    Sample::new(full)
}

/// Runs the greedy fixing loop on `model` with reads from `sampler`.
pub fn qaga_solve<S: Sampler + ?Sized>(
    model: &IsingModel,
    config: &QagaConfig,
    sampler: &S,
) -> Result<QagaResult, QagaError> {
    config.validate()?;
    let mut fixed: BTreeMap<Label, Spin> = BTreeMap::new();
    let mut current = model.clone();
    let mut stages = Vec::new();
    let mut last_reads: Option<SampleSet> = None;
    let mut incumbent: Option<Sample> = None;

    for t in 0..config.max_stages {
        if current.is_empty() {
            break;
        }
        let reads = sampler
            .sample(
                &current,
                config.num_reads,
                derive_seed(config.seed, t as u64),
            )?
            .evaluated(&current)?;

        let best_energy = match reads.best() {
            Some(best) => {
                let full = merge(&fixed, best).evaluated(model)?;
                let e = full.energy().expect("evaluated");
                if incumbent
                    .as_ref()
                    .is_none_or(|inc| e < inc.energy().expect("evaluated"))
                {
                    incumbent = Some(full);
                }
                Some(e)
            }
            None => None,
        };

        let newly_fixed = select_fixable(&reads, config.theta);
        stages.push(StageRecord {
            t,
            vars: current.num_vars(),
            couplers: current.num_couplers(),
            fixed: newly_fixed.clone(),
            best_energy,
        });
        last_reads = Some(reads);
        if newly_fixed.is_empty() {
            break;
        }
        let (next, _) = contract(&current, &newly_fixed)?;
        current = next;
        fixed.extend(newly_fixed);
    }

    let mut used_mqc_fallback = false;
    if !current.is_empty() {
        // After a no-fix stage the last reads already live on `current`; after
        // guard exhaustion they also cover the spins fixed in that stage.
        let reads = last_reads
            .as_ref()
            .expect("a non-empty model always runs at least one stage")
            .restricted(current.variables())?
            .evaluated(&current)?;
        let rest = mqc_reduce(&current, &reads, MqcPolicy::default())?;
        fixed.extend(rest.into_assignment());
        used_mqc_fallback = true;
    }

    let mut solution = Sample::new(fixed);
    if config.final_local_search {
        solution = sqc(model, &solution)?;
    }
    let mut solution = solution.evaluated(model)?;
    let mut energy = solution.energy().expect("evaluated");

    let mut used_incumbent = false;
    if let Some(inc) = incumbent {
        let inc_energy = inc.energy().expect("evaluated");
        if inc_energy < energy {
            solution = inc;
            energy = inc_energy;
            used_incumbent = true;
        }
    }

    Ok(QagaResult {
        solution,
        energy,
        stages,
        used_mqc_fallback,
        used_incumbent,
    })
}

/// Per-stage sizes and fixing counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageTrace {
    pub stage_count: usize,
    pub sizes: Vec<(usize, usize)>,
    pub fixed_counts: Vec<usize>,
    pub used_mqc_fallback: bool,
}

pub fn stage_trace(result: &QagaResult) -> StageTrace {
    StageTrace {
        stage_count: result.stages.len(),
        sizes: result.stages.iter().map(|s| (s.vars, s.couplers)).collect(),
        fixed_counts: result.stages.iter().map(|s| s.fixed.len()).collect(),
        used_mqc_fallback: result.used_mqc_fallback,
    }
}

/// Labels covered by a result's solution.
pub fn solution_labels(result: &QagaResult) -> BTreeSet<Label> {
    result.solution.labels().collect()
}
