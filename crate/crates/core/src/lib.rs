//! Sampler-assisted greedy minimization of Ising and QUBO Hamiltonians.
//!
//! The crate is organized around a sparse [`IsingModel`] and a pluggable
//! [`Sampler`] that stands in for a physical annealer. The greedy driver in
//! [`qaga`] repeatedly samples the current Hamiltonian, fixes every spin whose
//! sample column is (nearly) unanimous, and contracts the model until nothing
//! more can be fixed. Remaining spins are assigned by multi-qubit correction
//! and the result is polished by single-spin descent ([`postprocess`]).
//!
//! [`bench`] holds the experiment harness used by the `qaga` command-line tool.

pub mod bench;
pub mod ising;
pub mod postprocess;
pub mod qaga;
pub mod rng;
pub mod samplers;

pub use ising::{
    apply_gauge, connected_components, ising_energy, ising_to_qubo, normalize, qubo_energy,
    qubo_to_ising, random_model, ungauge_sample, Distribution, Gauge, IsingModel, Label,
    ModelError, ProblemSpec, QuboModel, Sample, SampleSet, Spin,
};
pub use postprocess::{mqc_pair, mqc_reduce, sqc, MqcPolicy, PostprocessError, TieBreak};
pub use qaga::{
    contract, estimate_uncertainty, majority_sign, qaga_solve, select_fixable, stage_trace,
    QagaConfig, QagaError, QagaResult, StageRecord, StageTrace,
};
pub use samplers::{
    ExactSampler, GaugeAveraged, RemoteSampler, SaConfig, Sampler, SamplerError, SimulatedAnnealing,
};
