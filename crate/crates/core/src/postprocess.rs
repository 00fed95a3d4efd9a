//! Sample post-processing: multi-qubit correction (MQC) and single-qubit
//! correction (SQC).
//!
//! MQC combines two reads. Spins where they agree are kept. The spins where
//! they disagree split into connected components of the coupling graph; no
//! coupler joins two different components, so each component can take either
//! parent's values independently and the cheaper side is chosen per component.
//! The offspring is never worse than either parent.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ising::indexed::IndexedModel;
use crate::ising::{connected_components, IsingModel, Label, ModelError, Sample, SampleSet, Spin};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PostprocessError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot reduce an empty sample set")]
    EmptySampleSet,
}

/// Which parent supplies a component when both sides cost the same.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    KeepFirst,
    KeepSecond,
}

/// MQC reconstruction choices. Reduction is always a sequential tournament
/// over the sample set in its given order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MqcPolicy {
    pub tie_break: TieBreak,
}

type Adjacency = BTreeMap<Label, Vec<(Label, f64)>>;

/// Energy terms that involve `component`, with `values` supplying every spin.
fn component_energy(
    model: &IsingModel,
    adjacency: &Adjacency,
    component: &BTreeSet<Label>,
    values: impl Fn(Label) -> Spin,
) -> f64 {
    let mut e = 0.0;
    for &i in component {
        let si = values(i).as_f64();
        e += model.linear(i) * si;
        for &(j, w) in adjacency.get(&i).map(Vec::as_slice).unwrap_or_default() {
            // Internal couplers are visited from both ends; count them once.
            if component.contains(&j) && j < i {
                continue;
            }
            e += w * si * values(j).as_f64();
        }
    }
    e
}

fn mqc_pair_with(
    model: &IsingModel,
    adjacency: &Adjacency,
    a: &Sample,
    b: &Sample,
    policy: MqcPolicy,
) -> Sample {
    let disagree: BTreeSet<Label> = a
        .assignment()
        .iter()
        .filter(|(l, &s)| b.assignment()[l] != s)
        .map(|(&l, _)| l)
        .collect();
    let mut child = a.assignment().clone();
    for component in connected_components(model, &disagree) {
        let from_a = component_energy(model, adjacency, &component, |l| a.assignment()[&l]);
        let from_b = component_energy(model, adjacency, &component, |l| {
            if component.contains(&l) {
                b.assignment()[&l]
            } else {
                a.assignment()[&l]
            }
        });
        let take_b = match policy.tie_break {
            TieBreak::KeepFirst => from_b < from_a,
            TieBreak::KeepSecond => from_b <= from_a,
        };
        if take_b {
            for l in component {
                child.insert(l, b.assignment()[&l]);
            }
        }
    }
    Sample::new(child)
}

/// Recombines two reads of `model`; the result carries its energy.
pub fn mqc_pair(
    model: &IsingModel,
    a: &Sample,
    b: &Sample,
    policy: MqcPolicy,
) -> Result<Sample, PostprocessError> {
    model.check_domain(a.assignment())?;
    model.check_domain(b.assignment())?;
    let adjacency = model.adjacency();
    Ok(mqc_pair_with(model, &adjacency, a, b, policy).evaluated(model)?)
}

/// Folds [`mqc_pair`] over the reads in order.
pub fn mqc_reduce(
    model: &IsingModel,
    samples: &SampleSet,
    policy: MqcPolicy,
) -> Result<Sample, PostprocessError> {
    let mut reads = samples.iter();
    let first = reads.next().ok_or(PostprocessError::EmptySampleSet)?;
    model.check_domain(first.assignment())?;
    let adjacency = model.adjacency();
    let mut acc = first.clone();
    for next in reads {
        acc = mqc_pair_with(model, &adjacency, &acc, next, policy);
    }
    Ok(acc.evaluated(model)?)
}

/// Flips below this energy change are treated as non-improving.
const IMPROVEMENT_EPS: f64 = 1e-12;

/// Steepest single-spin descent to a 1-flip local minimum.
///
/// Each step flips the spin with the largest energy decrease, the smallest
/// label winning ties, until no flip lowers the energy.
pub fn sqc(model: &IsingModel, z: &Sample) -> Result<Sample, PostprocessError> {
    model.check_domain(z.assignment())?;
    let idx = IndexedModel::new(model);
    let mut spins = idx.spins_of(z);
    let mut fields = idx.local_fields(&spins);
    loop {
        let mut best: Option<(usize, f64)> = None;
        for k in 0..idx.len() {
            let delta = -2.0 * spins[k] * fields[k];
            if delta < -IMPROVEMENT_EPS && best.is_none_or(|(_, d)| delta < d) {
                best = Some((k, delta));
            }
        }
        let Some((k, _)) = best else { break };
        spins[k] = -spins[k];
        for (j, w) in idx.neighbors(k) {
            fields[j] += 2.0 * w * spins[k];
        }
        // Refresh to keep incremental rounding from accumulating.
        fields[k] = idx.local_field(k, &spins);
    }
    Ok(idx.to_sample(&spins).evaluated(model)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(values: &[(Label, i64)]) -> Sample {
        Sample::from_values(values.iter().copied()).unwrap()
    }

    fn two_chains() -> IsingModel {
        let mut m = IsingModel::from_parts([], [((1, 2), -1.0), ((3, 4), -1.0)]).unwrap();
        for l in 1..=4 {
            m.add_variable(l);
        }
        m
    }

    #[test]
    fn identical_parents() {
        let m = two_chains();
        let a = s(&[(1, 1), (2, 1), (3, -1), (4, 1)]);
        let child = mqc_pair(&m, &a, &a, MqcPolicy::default()).unwrap();
        assert_eq!(child.assignment(), a.assignment());
    }

    #[test]
    fn independent_components_beat_both_parents() {
        let m = two_chains();
        let a = s(&[(1, 1), (2, 1), (3, -1), (4, 1)]);
        let b = s(&[(1, -1), (2, 1), (3, 1), (4, 1)]);
        assert_eq!(m.energy_of(a.assignment()).unwrap(), 0.0);
        assert_eq!(m.energy_of(b.assignment()).unwrap(), 0.0);
        let child = mqc_pair(&m, &a, &b, MqcPolicy::default()).unwrap();
        assert_eq!(
            child.assignment(),
            s(&[(1, 1), (2, 1), (3, 1), (4, 1)]).assignment()
        );
        assert_eq!(child.energy(), Some(-2.0));
    }

    #[test]
    fn single_component_takes_better_parent() {
        let m = IsingModel::from_parts([], [((1, 2), -1.0), ((2, 3), -1.0)]).unwrap();
        let a = s(&[(1, 1), (2, 1), (3, -1)]);
        let b = s(&[(1, -1), (2, -1), (3, -1)]);
        let child = mqc_pair(&m, &a, &b, MqcPolicy::default()).unwrap();
        assert_eq!(child.assignment(), b.assignment());
        assert_eq!(child.energy(), Some(-2.0));
    }

    #[test]
    fn tie_break_policy() {
        let mut m = IsingModel::new();
        m.add_variable(1);
        let a = s(&[(1, 1)]);
        let b = s(&[(1, -1)]);
        let first = mqc_pair(&m, &a, &b, MqcPolicy::default()).unwrap();
        assert_eq!(first.get(1), Some(Spin::Up));
        let second = mqc_pair(
            &m,
            &a,
            &b,
            MqcPolicy {
                tie_break: TieBreak::KeepSecond,
            },
        )
        .unwrap();
        assert_eq!(second.get(1), Some(Spin::Down));
    }

    #[test]
    fn reduce_examples() {
        let m = two_chains();
        let a = s(&[(1, 1), (2, 1), (3, -1), (4, 1)]);
        let b = s(&[(1, -1), (2, 1), (3, 1), (4, 1)]);
        let one = SampleSet::for_model(&m, vec![a.clone()]).unwrap();
        assert_eq!(
            mqc_reduce(&m, &one, MqcPolicy::default())
                .unwrap()
                .assignment(),
            a.assignment()
        );
        let two = SampleSet::for_model(&m, vec![a, b]).unwrap();
        let out = mqc_reduce(&m, &two, MqcPolicy::default()).unwrap();
        assert_eq!(out.energy(), Some(-2.0));
    }

    #[test]
    fn domain_errors() {
        let m = two_chains();
        let short = s(&[(1, 1)]);
        let full = s(&[(1, 1), (2, 1), (3, 1), (4, 1)]);
        assert!(mqc_pair(&m, &short, &full, MqcPolicy::default()).is_err());
        assert!(sqc(&m, &short).is_err());
    }

    #[test]
    fn sqc_descends_to_ground() {
        let m = IsingModel::from_parts([(1, -2.0), (2, 0.0)], [((1, 2), 1.0)]).unwrap();
        let start = s(&[(1, -1), (2, -1)]);
        assert_eq!(m.energy_of(start.assignment()).unwrap(), 3.0);
        let out = sqc(&m, &start).unwrap();
        assert_eq!(out.assignment(), s(&[(1, 1), (2, -1)]).assignment());
        assert_eq!(out.energy(), Some(-3.0));
        // Already a local minimum: unchanged.
        assert_eq!(sqc(&m, &out).unwrap(), out);
    }

    #[test]
    fn sqc_prefers_largest_decrease_then_smallest_label() {
        // Flipping 2 gains 4, flipping 1 or 3 gains 2 each.
        let m = IsingModel::from_parts([(1, 1.0), (2, 2.0), (3, 1.0)], []).unwrap();
        let start = s(&[(1, 1), (2, 1), (3, 1)]);
        let out = sqc(&m, &start).unwrap();
        assert_eq!(out.energy(), Some(-4.0));
        // Equal gains: flipping 1 or 2 from (+1,+1) both reach -1, and either
        // flip blocks the other. The smallest label goes first.
        let m = IsingModel::from_parts([], [((1, 2), 1.0)]).unwrap();
        let out = sqc(&m, &s(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(out.assignment(), s(&[(1, -1), (2, 1)]).assignment());
        // Largest decrease wins: from (+1,-1), flipping 1 gains 8, flipping 2 gains 4.
        let m = IsingModel::from_parts([(1, 1.0), (2, 1.0)], [((1, 2), -3.0)]).unwrap();
        let out = sqc(&m, &s(&[(1, 1), (2, -1)])).unwrap();
        assert_eq!(out.energy(), Some(-5.0));
    }
}
