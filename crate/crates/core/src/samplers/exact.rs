use rand::Rng;

use super::{empty_reads, Sampler, SamplerError};
use crate::ising::indexed::IndexedModel;
use crate::ising::{IsingModel, SampleSet};
use crate::rng::rng_from_seed;

/// Hard limit on enumeration size.
pub const MAX_EXACT_VARS: usize = 24;

/// States within this absolute energy of the minimum count as ground states.
const GROUND_TOLERANCE: f64 = 1e-9;

/// Brute-force sampler: enumerates every configuration and draws reads
/// uniformly from the set of global minimizers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactSampler;

impl ExactSampler {
    /// Every global minimizer, as bit patterns over label order (bit `k` set
    /// means the `k`-th variable is `+1`), with the ground energy.
    pub(crate) fn ground_states(idx: &IndexedModel) -> (Vec<u32>, f64) {
        let n = idx.len();
        // Gray-code walk with incremental local fields; candidates are then
        // re-evaluated from scratch to shed accumulated rounding.
        let mut spins = vec![-1.0; n];
        let mut fields = idx.local_fields(&spins);
        let mut energy = idx.energy(&spins);
        let scale = 1.0
            + idx.linear.iter().map(|h| h.abs()).sum::<f64>()
            + (0..n)
                .flat_map(|k| idx.neighbors(k).map(|(_, w)| w.abs()))
                .sum::<f64>();
        let slack = 1e-9 * scale;

        let mut best = energy;
        let mut candidates = vec![(0u32, energy)];
        for step in 1u64..(1u64 << n) {
            let k = step.trailing_zeros() as usize;
            energy -= 2.0 * spins[k] * fields[k];
            spins[k] = -spins[k];
            for (j, w) in idx.neighbors(k) {
                fields[j] += 2.0 * w * spins[k];
            }
            if energy <= best + slack {
                candidates.push(((step ^ (step >> 1)) as u32, energy));
                if energy < best {
                    best = energy;
                    candidates.retain(|&(_, e)| e <= best + slack);
                }
            }
        }

        let exact: Vec<(u32, f64)> = candidates
            .into_iter()
            .map(|(bits, _)| {
                let s: Vec<f64> = (0..n)
                    .map(|k| if bits >> k & 1 == 1 { 1.0 } else { -1.0 })
                    .collect();
                (bits, idx.energy(&s))
            })
            .collect();
        let ground = exact.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
        let states = exact
            .into_iter()
            .filter(|&(_, e)| e <= ground + GROUND_TOLERANCE)
            .map(|(b, _)| b)
            .collect();
        (states, ground)
    }
}

impl Sampler for ExactSampler {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        if num_reads == 0 {
            return Err(SamplerError::ZeroReads);
        }
        if model.num_vars() > MAX_EXACT_VARS {
            return Err(SamplerError::TooManyVariables {
                actual: model.num_vars(),
                max: MAX_EXACT_VARS,
            });
        }
        if model.is_empty() {
            return empty_reads(num_reads);
        }
        let idx = IndexedModel::new(model);
        let (ground, _) = Self::ground_states(&idx);
        let mut rng = rng_from_seed(seed);
        let samples = (0..num_reads)
            .map(|_| {
                let bits = ground[rng.gen_range(0..ground.len())];
                let spins: Vec<f64> = (0..idx.len())
                    .map(|k| if bits >> k & 1 == 1 { 1.0 } else { -1.0 })
                    .collect();
                idx.to_sample(&spins)
            })
            .collect();
        Ok(SampleSet::for_model(model, samples)?)
    }
}
