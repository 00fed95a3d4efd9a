use std::time::Duration;

use super::{Sampler, SamplerError};
use crate::ising::io::{remote_request_json, sampleset_from_json};
use crate::ising::{IsingModel, ModelError, SampleSet};

/// Client for an HTTP annealing service.
///
/// The request body is the model document with `num_reads` and `seed` added;
/// the response must be a sample-set document. Energies in the response are
/// ignored and recomputed locally.
#[derive(Clone, Debug)]
pub struct RemoteSampler {
    pub endpoint: String,
    pub timeout: Duration,
}

impl RemoteSampler {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout,
        }
    }

    fn transport(&self, e: reqwest::Error) -> SamplerError {
        if e.is_timeout() {
            SamplerError::Timeout {
                endpoint: self.endpoint.clone(),
            }
        } else {
            SamplerError::Transport {
                endpoint: self.endpoint.clone(),
                message: e.to_string(),
            }
        }
    }
}

impl Sampler for RemoteSampler {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        if num_reads == 0 {
            return Err(SamplerError::ZeroReads);
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(self.timeout)
            .build()
            .map_err(|e| self.transport(e))?;
        let response = client
            .post(&self.endpoint)
            .header("content-type", "application/json")
            .body(remote_request_json(model, num_reads, seed))
            .send()
            .map_err(|e| self.transport(e))?;
        let status = response.status();
        let payload = response.text().map_err(|e| self.transport(e))?;
        if !status.is_success() {
            return Err(SamplerError::HttpStatus {
                status: status.as_u16(),
                payload,
            });
        }
        let parsed = match sampleset_from_json(&payload) {
            Ok(p) => p,
            Err(e) => {
                return Err(SamplerError::MalformedResponse {
                    message: e.to_string(),
                    payload,
                })
            }
        };
        if parsed.samples.len() != num_reads {
            return Err(SamplerError::MalformedResponse {
                message: format!("expected {num_reads} samples, got {}", parsed.samples.len()),
                payload,
            });
        }
        match parsed.validate(model) {
            Ok(set) => Ok(set),
            Err(ModelError::DomainMismatch(message)) => {
                Err(SamplerError::DomainMismatch { message, payload })
            }
            Err(e) => Err(SamplerError::MalformedResponse {
                message: e.to_string(),
                payload,
            }),
        }
    }
}
