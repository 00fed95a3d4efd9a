use rand::Rng;
use rayon::prelude::*;

use super::{empty_reads, Sampler, SamplerError};
use crate::ising::indexed::IndexedModel;
use crate::ising::{normalize, IsingModel, SampleSet};
use crate::rng::{derive_seed, rng_from_seed};

/// Metropolis annealing parameters.
///
/// The defaults are engineering choices for a classical stand-in; they reliably
/// reach the ground state of small (N <= 12) instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaConfig {
    pub num_sweeps: usize,
    pub beta_initial: f64,
    pub beta_final: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            num_sweeps: 1000,
            beta_initial: 0.1,
            beta_final: 10.0,
        }
    }
}

impl SaConfig {
    pub fn new(
        num_sweeps: usize,
        beta_initial: f64,
        beta_final: f64,
    ) -> Result<Self, SamplerError> {
        let config = Self {
            num_sweeps,
            beta_initial,
            beta_final,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.num_sweeps == 0 {
            return Err(SamplerError::InvalidConfig(
                "num_sweeps must be at least 1".into(),
            ));
        }
        if !(self.beta_initial > 0.0 && self.beta_initial.is_finite()) {
            return Err(SamplerError::InvalidConfig(
                "beta_initial must be positive".into(),
            ));
        }
        if !(self.beta_final > self.beta_initial && self.beta_final.is_finite()) {
            return Err(SamplerError::InvalidConfig(
                "beta_final must exceed beta_initial".into(),
            ));
        }
        Ok(())
    }

    /// Inverse temperature of each sweep, geometric from `beta_initial` to
    /// `beta_final` inclusive. A single sweep runs at `beta_initial`.
    pub fn schedule(&self) -> Vec<f64> {
        if self.num_sweeps == 1 {
            return vec![self.beta_initial];
        }
        let ratio = self.beta_final / self.beta_initial;
        let last = (self.num_sweeps - 1) as f64;
        (0..self.num_sweeps)
            .map(|k| self.beta_initial * ratio.powf(k as f64 / last))
            .collect()
    }
}

/// Independent single-spin-flip Metropolis chains, one per read.
///
/// The model is first scaled into the annealer range (see
/// [`normalize`](crate::ising::normalize)) so one schedule fits all inputs.
/// Read `r` uses the child seed `derive_seed(seed, r)`, which keeps output
/// identical whether chains run in parallel or not.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimulatedAnnealing {
    pub config: SaConfig,
}

impl SimulatedAnnealing {
    pub fn new(config: SaConfig) -> Result<Self, SamplerError> {
        config.validate()?;
        Ok(Self { config })
    }
}

fn run_chain(idx: &IndexedModel, schedule: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let n = idx.len();
    let mut spins: Vec<f64> = (0..n)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let mut fields = idx.local_fields(&spins);
    for &beta in schedule {
        for k in 0..n {
            let delta = -2.0 * spins[k] * fields[k];
            let accept = delta <= 0.0 || {
                let x = beta * delta;
                // exp(-40) is below any uniform draw that matters.
                x < 40.0 && rng.gen::<f64>() < (-x).exp()
            };
            if accept {
                spins[k] = -spins[k];
                let change = 2.0 * spins[k];
                for (j, w) in idx.neighbors(k) {
                    fields[j] += change * w;
                }
            }
        }
    }
    spins
}

impl Sampler for SimulatedAnnealing {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        self.config.validate()?;
        if num_reads == 0 {
            return Err(SamplerError::ZeroReads);
        }
        if model.is_empty() {
            return empty_reads(num_reads);
        }
        let (scaled, _) = normalize(model);
        let idx = IndexedModel::new(&scaled);
        let schedule = self.config.schedule();
        let samples = (0..num_reads)
            .into_par_iter()
            .map(|r| idx.to_sample(&run_chain(&idx, &schedule, derive_seed(seed, r as u64))))
            .collect();
        Ok(SampleSet::for_model(model, samples)?)
    }
}
