//! Dense, index-addressed view of an [`IsingModel`] for inner loops.

use std::collections::BTreeMap;

use super::{IsingModel, Label, Sample, Spin};

/// Variables in label order with a CSR neighbor structure.
#[derive(Clone, Debug)]
pub(crate) struct IndexedModel {
    pub labels: Vec<Label>,
    pub linear: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl IndexedModel {
    pub fn new(model: &IsingModel) -> Self {
        let labels: Vec<Label> = model.variables().iter().copied().collect();
        let index: BTreeMap<Label, usize> =
            labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        let n = labels.len();
        let linear = labels.iter().map(|&l| model.linear(l)).collect();

        let mut degree = vec![0usize; n];
        for ((i, j), _) in model.quadratic_terms() {
            degree[index[&i]] += 1;
            degree[index[&j]] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for k in 0..n {
            offsets[k + 1] = offsets[k] + degree[k];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for ((i, j), v) in model.quadratic_terms() {
            let (a, b) = (index[&i], index[&j]);
            neighbors[fill[a]] = b;
            weights[fill[a]] = v;
            fill[a] += 1;
            neighbors[fill[b]] = a;
            weights[fill[b]] = v;
            fill[b] += 1;
        }
        Self {
            labels,
            linear,
            offsets,
            neighbors,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn neighbors(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[k]..self.offsets[k + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `h_k + sum_j J_kj s_j`.
    pub fn local_field(&self, k: usize, spins: &[f64]) -> f64 {
        self.linear[k] + self.neighbors(k).map(|(j, w)| w * spins[j]).sum::<f64>()
    }

    pub fn local_fields(&self, spins: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.local_field(k, spins))
            .collect()
    }

    pub fn energy(&self, spins: &[f64]) -> f64 {
        let mut e = 0.0;
        for k in 0..self.len() {
            e += self.linear[k] * spins[k];
            for (j, w) in self.neighbors(k) {
                if j > k {
                    e += w * spins[k] * spins[j];
                }
            }
        }
        e
    }

    /// Spins of `sample` as `±1.0` in label order. The sample must cover the model.
    pub fn spins_of(&self, sample: &Sample) -> Vec<f64> {
        self.labels
            .iter()
            .map(|&l| sample.assignment()[&l].as_f64())
            .collect()
    }

    pub fn to_sample(&self, spins: &[f64]) -> Sample {
        Sample::new(
            self.labels
                .iter()
                .zip(spins)
                .map(|(&l, &s)| (l, Spin::from_bit(s > 0.0)))
                .collect(),
        )
    }
}
