//! Reference implementations used as test oracles. Energies here are computed
//! from the raw coefficient lists with plain loops, never through the crate's
//! own evaluation code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::Range;

use qaga_core::{IsingModel, Label, Spin};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense copy of a model's coefficients, indexed by label position.
pub struct Dense {
    pub labels: Vec<Label>,
    pub h: Vec<f64>,
    pub j: Vec<(usize, usize, f64)>,
}

impl Dense {
    pub fn of(model: &IsingModel) -> Dense {
        let labels: Vec<Label> = model.variables().iter().copied().collect();
        let pos: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        let h = labels.iter().map(|&l| model.linear(l)).collect();
        let j = model
            .quadratic_terms()
            .map(|((a, b), w)| (pos[&a], pos[&b], w))
            .collect();
        Dense { labels, h, j }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn energy(&self, z: &[i8]) -> f64 {
        let mut e = 0.0;
        for (k, &h) in self.h.iter().enumerate() {
            e += h * f64::from(z[k]);
        }
        for &(a, b, w) in &self.j {
            e += w * f64::from(z[a]) * f64::from(z[b]);
        }
        e
    }

    pub fn energy_of(&self, z: &BTreeMap<Label, Spin>) -> f64 {
        let v: Vec<i8> = self.labels.iter().map(|l| z[l].value()).collect();
        self.energy(&v)
    }

    /// Spins for bit pattern `mask` (bit k set means position k is +1).
    pub fn spins(&self, mask: u64) -> Vec<i8> {
        (0..self.n())
            .map(|k| if mask >> k & 1 == 1 { 1 } else { -1 })
            .collect()
    }

    pub fn assignment(&self, z: &[i8]) -> BTreeMap<Label, Spin> {
        self.labels
            .iter()
            .zip(z)
            .map(|(&l, &s)| (l, Spin::from_value(s.into()).unwrap()))
            .collect()
    }

    /// Minimum energy and the masks attaining it within `tol`.
    pub fn brute_force(&self, tol: f64) -> (f64, Vec<u64>) {
        let energies: Vec<f64> = (0..1u64 << self.n())
            .map(|m| self.energy(&self.spins(m)))
            .collect();
        let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let argmin = (0..energies.len() as u64)
            .filter(|&m| energies[m as usize] <= min + tol)
            .collect();
        (min, argmin)
    }
}

/// Random model on `n` scattered labels with a coupling density drawn from
/// `density`; coefficients are uniform in [-2, 2] with some exact zeros.
pub fn random_model<R: Rng>(rng: &mut R, n: usize, density: Range<f64>) -> IsingModel {
    let density = rng.gen_range(density);
    let mut labels: Vec<Label> = Vec::with_capacity(n);
    while labels.len() < n {
        let l = rng.gen_range(0..1000);
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    labels.shuffle(rng);
    let mut m = IsingModel::new();
    for &l in &labels {
        m.add_variable(l);
        if rng.gen_bool(0.8) {
            m.set_linear(l, rng.gen_range(-2.0..2.0)).unwrap();
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                m.set_quadratic(labels[a], labels[b], rng.gen_range(-2.0..2.0))
                    .unwrap();
            }
        }
    }
    m
}

pub fn random_assignment<R: Rng>(rng: &mut R, model: &IsingModel) -> BTreeMap<Label, Spin> {
    model
        .variables()
        .iter()
        .map(|&l| (l, if rng.gen() { Spin::Up } else { Spin::Down }))
        .collect()
}
