//! Samplers stand in for the annealer: each call returns `num_reads` spin
//! assignments over exactly the model's variables, reproducibly for a seed.

mod exact;
mod gauge;
mod remote;
mod sa;

use std::sync::Arc;

use thiserror::Error;

use crate::ising::{IsingModel, ModelError, SampleSet};

pub use exact::{ExactSampler, MAX_EXACT_VARS};
pub use gauge::{split_reads, GaugeAveraged};
pub use remote::RemoteSampler;
pub use sa::{SaConfig, SimulatedAnnealing};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("num_reads must be at least 1")]
    ZeroReads,
    #[error("exact enumeration is limited to {max} variables, model has {actual}")]
    TooManyVariables { actual: usize, max: usize },
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("transport error talking to {endpoint}: {message}")]
    Transport { endpoint: String, message: String },
    #[error("request to {endpoint} timed out")]
    Timeout { endpoint: String },
    #[error("remote sampler returned HTTP {status}")]
    HttpStatus { status: u16, payload: String },
    #[error("malformed response: {message}")]
    MalformedResponse { message: String, payload: String },
    #[error("response does not match the model: {message}")]
    DomainMismatch { message: String, payload: String },
}

impl SamplerError {
    /// The raw remote payload, when the error came from a response body.
    pub fn payload(&self) -> Option<&str> {
        match self {
            Self::HttpStatus { payload, .. }
            | Self::MalformedResponse { payload, .. }
            | Self::DomainMismatch { payload, .. } => Some(payload),
            _ => None,
        }
    }
}

pub trait Sampler: Send + Sync {
    /// Draws `num_reads` samples of `model`. Output is a pure function of the
    /// arguments.
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError>;
}

impl<S: Sampler + ?Sized> Sampler for &S {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        (**self).sample(model, num_reads, seed)
    }
}

impl<S: Sampler + ?Sized> Sampler for Box<S> {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        (**self).sample(model, num_reads, seed)
    }
}

impl<S: Sampler + ?Sized> Sampler for Arc<S> {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        (**self).sample(model, num_reads, seed)
    }
}

/// Sample set of `num_reads` empty assignments for a model without variables.
pub(crate) fn empty_reads(num_reads: usize) -> Result<SampleSet, SamplerError> {
    let samples = vec![crate::ising::Sample::new(Default::default()).with_energy(0.0); num_reads];
    Ok(SampleSet::new(Default::default(), samples)?)
}
