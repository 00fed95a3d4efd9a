use super::{Sampler, SamplerError};
use crate::ising::{apply_gauge, ungauge_sample, Gauge, IsingModel, SampleSet};
use crate::rng::derive_seed;

/// Spin-reversal averaging around an inner sampler.
///
/// Gauge `0` is the identity and its inner call receives the caller's seed
/// unchanged. Gauge `g >= 1` is drawn from `derive_seed(seed, 2g + 1)` and its
/// inner call is seeded with `derive_seed(seed, 2g)`. Reads are split with
/// [`split_reads`]. Fresh gauges are therefore drawn on every call.
#[derive(Clone, Debug)]
pub struct GaugeAveraged<S> {
    pub inner: S,
    pub num_gauges: usize,
}

impl<S: Sampler> GaugeAveraged<S> {
    pub fn new(inner: S, num_gauges: usize) -> Result<Self, SamplerError> {
        if num_gauges == 0 {
            return Err(SamplerError::InvalidConfig(
                "at least one gauge is required".into(),
            ));
        }
        Ok(Self { inner, num_gauges })
    }
}

/// Splits `num_reads` over `parts` as evenly as possible; the first
/// `num_reads % parts` parts get one extra read.
pub fn split_reads(num_reads: usize, parts: usize) -> Vec<usize> {
    let base = num_reads / parts;
    let extra = num_reads % parts;
    (0..parts).map(|g| base + usize::from(g < extra)).collect()
}

impl<S: Sampler> Sampler for GaugeAveraged<S> {
    fn sample(
        &self,
        model: &IsingModel,
        num_reads: usize,
        seed: u64,
    ) -> Result<SampleSet, SamplerError> {
        if self.num_gauges == 0 {
            return Err(SamplerError::InvalidConfig(
                "at least one gauge is required".into(),
            ));
        }
        if num_reads < self.num_gauges {
            return Err(SamplerError::InvalidConfig(format!(
                "num_reads ({num_reads}) must be at least the number of gauges ({})",
                self.num_gauges
            )));
        }
        let mut samples = Vec::with_capacity(num_reads);
        for (g, reads) in split_reads(num_reads, self.num_gauges)
            .into_iter()
            .enumerate()
        {
            let (gauge, inner_seed) = if g == 0 {
                (Gauge::identity(model.variables()), seed)
            } else {
                let g = g as u64;
                (
                    Gauge::random(model.variables(), derive_seed(seed, 2 * g + 1)),
                    derive_seed(seed, 2 * g),
                )
            };
            let gauged = apply_gauge(model, &gauge)?;
            let set = self.inner.sample(&gauged, reads, inner_seed)?;
            for s in set.iter() {
                samples.push(ungauge_sample(s, &gauge)?);
            }
        }
        Ok(SampleSet::for_model(model, samples)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{random_model, Distribution, ProblemSpec};
    use crate::samplers::{ExactSampler, SaConfig, SimulatedAnnealing};

    fn model() -> IsingModel {
        random_model(&ProblemSpec {
            num_vars: 10,
            sparsity: 0.5,
            distribution: Distribution::Normal,
            seed: 17,
        })
        .unwrap()
    }

    #[test]
    fn splits_reads() {
        assert_eq!(split_reads(1000, 10), vec![100; 10]);
        assert_eq!(split_reads(7, 3), vec![3, 2, 2]);
        assert_eq!(split_reads(5, 5), vec![1; 5]);
    }

    #[test]
    fn single_gauge_is_the_inner_sampler() {
        let m = model();
        let sa = SimulatedAnnealing::new(SaConfig::new(30, 0.1, 5.0).unwrap()).unwrap();
        let wrapped = GaugeAveraged::new(sa, 1).unwrap();
        assert_eq!(
            wrapped.sample(&m, 12, 4).unwrap(),
            sa.sample(&m, 12, 4).unwrap()
        );
    }

    #[test]
    fn energies_are_on_the_original_model() {
        let m = model();
        let sa = SimulatedAnnealing::new(SaConfig::new(30, 0.1, 5.0).unwrap()).unwrap();
        let set = GaugeAveraged::new(sa, 10)
            .unwrap()
            .sample(&m, 1000, 1)
            .unwrap();
        assert_eq!(set.num_reads(), 1000);
        for s in set.iter() {
            assert_eq!(s.energy(), Some(m.energy_of(s.assignment()).unwrap()));
        }
    }

    #[test]
    fn exact_inner_still_returns_ground_states() {
        let m = model();
        let ground = ExactSampler
            .sample(&m, 1, 0)
            .unwrap()
            .lowest_energy()
            .unwrap();
        let set = GaugeAveraged::new(ExactSampler, 4)
            .unwrap()
            .sample(&m, 9, 3)
            .unwrap();
        for s in set.iter() {
            assert!((s.energy().unwrap() - ground).abs() < 1e-9);
        }
    }

    #[test]
    fn too_few_reads() {
        let wrapped = GaugeAveraged::new(ExactSampler, 10).unwrap();
        assert!(matches!(
            wrapped.sample(&model(), 9, 0),
            Err(SamplerError::InvalidConfig(_))
        ));
        assert!(GaugeAveraged::new(ExactSampler, 0).is_err());
    }
}
