//! Experiment harness: QAGA against gauge-averaged sampling (QA) and MQC over
//! random problems, and mean stage counts across thresholds.
//!
//! Seeds are split as follows. A problem's seed is
//! `derive_path(master, [distribution code, sparsity.to_bits(), index])`
//! with codes binary = 0, uniform = 1, normal = 2. The model is generated from
//! that seed; the QA baseline samples with `derive_seed(problem, 1)` and QAGA
//! runs with `derive_seed(problem, 2)`. Changing one problem's index therefore
//! leaves every other problem untouched.

mod records;

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use records::{
    counts_to_csv, persist_results, read_records_csv, records_to_csv, PersistedFiles,
};

use crate::ising::{random_model, Distribution, IsingModel, ModelError, ProblemSpec};
use crate::postprocess::{mqc_reduce, MqcPolicy, PostprocessError};
use crate::qaga::{qaga_solve, QagaConfig, QagaError};
use crate::rng::{derive_path, derive_seed};
use crate::samplers::{
    ExactSampler, GaugeAveraged, SaConfig, Sampler, SamplerError, SimulatedAnnealing,
};

/// Energies closer than this are a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("CSV error in {path}: {message}")]
    Csv { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Qaga(#[from] QagaError),
    #[error(transparent)]
    Postprocess(#[from] PostprocessError),
}

/// Inner sampler used by every method of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplerChoice {
    Sa {
        num_sweeps: usize,
        beta_initial: f64,
        beta_final: f64,
    },
    Exact,
}

impl Default for SamplerChoice {
    fn default() -> Self {
        Self::from(SaConfig::default())
    }
}

impl From<SaConfig> for SamplerChoice {
    fn from(c: SaConfig) -> Self {
        Self::Sa {
            num_sweeps: c.num_sweeps,
            beta_initial: c.beta_initial,
            beta_final: c.beta_final,
        }
    }
}

impl SamplerChoice {
    pub fn build(&self) -> Result<Box<dyn Sampler>, SamplerError> {
        Ok(match *self {
            Self::Sa {
                num_sweeps,
                beta_initial,
                beta_final,
            } => Box::new(SimulatedAnnealing::new(SaConfig::new(
                num_sweeps,
                beta_initial,
                beta_final,
            )?)?),
            Self::Exact => Box::new(ExactSampler),
        })
    }
}

/// Outcome from QAGA's side of a pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Win,
    Tie,
    Loss,
}

impl Verdict {
    /// Compares QAGA's energy against a baseline's.
    pub fn of(qaga: f64, baseline: f64) -> Verdict {
        if (qaga - baseline).abs() <= TIE_TOLERANCE {
            Verdict::Tie
        } else if qaga < baseline {
            Verdict::Win
        } else {
            Verdict::Loss
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    QagaVsQa,
    QagaVsMqc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentAConfig {
    pub num_problems: usize,
    pub num_vars: usize,
    pub sparsities: Vec<f64>,
    pub distributions: Vec<Distribution>,
    pub num_reads: usize,
    pub num_gauges: usize,
    pub theta: f64,
    pub max_stages: usize,
    pub final_local_search: bool,
    pub sampler: SamplerChoice,
    pub master_seed: u64,
    /// Wall times make reports non-reproducible, so they are opt-in.
    pub record_timing: bool,
}

pub const DEFAULT_SPARSITIES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_THETAS: [f64; 4] = [0.25, 0.15, 0.05, 0.0];

impl Default for ExperimentAConfig {
    fn default() -> Self {
        Self {
            num_problems: 100,
            num_vars: 50,
            sparsities: DEFAULT_SPARSITIES.to_vec(),
            distributions: Distribution::ALL.to_vec(),
            num_reads: 1000,
            num_gauges: 10,
            theta: 0.0,
            max_stages: 64,
            final_local_search: true,
            sampler: SamplerChoice::default(),
            master_seed: 0,
            record_timing: false,
        }
    }
}

fn validate_common(
    num_problems: usize,
    num_vars: usize,
    sparsities: &[f64],
    num_reads: usize,
    num_gauges: usize,
) -> Result<(), BenchError> {
    let bad = |m: &str| Err(BenchError::InvalidConfig(m.to_string()));
    if num_problems == 0 {
        return bad("num_problems must be at least 1");
    }
    if num_vars == 0 {
        return bad("num_vars must be at least 1");
    }
    if sparsities.is_empty() {
        return bad("the sparsity list is empty");
    }
    if sparsities.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return bad("sparsities must lie in [0, 1]");
    }
    if num_gauges == 0 {
        return bad("at least one gauge is required");
    }
    if num_reads < num_gauges {
        return bad("num_reads must be at least the number of gauges");
    }
    Ok(())
}

impl ExperimentAConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        validate_common(
            self.num_problems,
            self.num_vars,
            &self.sparsities,
            self.num_reads,
            self.num_gauges,
        )?;
        if self.distributions.is_empty() {
            return Err(BenchError::InvalidConfig(
                "the distribution list is empty".into(),
            ));
        }
        self.qaga_config(0).validate()?;
        self.sampler.build()?;
        Ok(())
    }

    fn qaga_config(&self, seed: u64) -> QagaConfig {
        QagaConfig {
            theta: self.theta,
            num_reads: self.num_reads,
            max_stages: self.max_stages,
            final_local_search: self.final_local_search,
            seed,
        }
    }
}

pub fn problem_seed(master: u64, distribution: Distribution, sparsity: f64, index: usize) -> u64 {
    derive_path(
        master,
        &[distribution.code(), sparsity.to_bits(), index as u64],
    )
}

const QA_STREAM: u64 = 1;
const QAGA_STREAM: u64 = 2;

/// One problem of experiment A.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub distribution: Distribution,
    pub sparsity: f64,
    pub problem: usize,
    pub problem_seed: u64,
    pub qa_energy: f64,
    pub mqc_energy: f64,
    pub qaga_energy: f64,
    pub qaga_vs_qa: Verdict,
    pub qaga_vs_mqc: Verdict,
    pub stages: usize,
    pub used_mqc_fallback: bool,
    pub used_incumbent: bool,
    pub wall_time_ms: Option<f64>,
}

impl ComparisonRecord {
    pub fn is_consistent(&self) -> bool {
        self.qaga_vs_qa == Verdict::of(self.qaga_energy, self.qa_energy)
            && self.qaga_vs_mqc == Verdict::of(self.qaga_energy, self.mqc_energy)
            && self.mqc_energy <= self.qa_energy + TIE_TOLERANCE
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFailure {
    pub distribution: Distribution,
    pub sparsity: f64,
    pub problem: usize,
    pub problem_seed: u64,
    pub error: String,
}

/// Win/tie/loss counts of one pairing in one (distribution, sparsity) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCounts {
    pub pairing: Pairing,
    pub distribution: Distribution,
    pub sparsity: f64,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentAReport {
    pub config: ExperimentAConfig,
    pub records: Vec<ComparisonRecord>,
    pub failures: Vec<ProblemFailure>,
    pub cells: Vec<CellCounts>,
}

impl ExperimentAReport {
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            config: &'a ExperimentAConfig,
            cells: &'a [CellCounts],
            failures: &'a [ProblemFailure],
            num_records: usize,
        }
        serde_json::to_string_pretty(&Summary {
            config: &self.config,
            cells: &self.cells,
            failures: &self.failures,
            num_records: self.records.len(),
        })
        .expect("reports serialize")
    }

    /// Text table in the layout of a win/tie/loss bar chart: one block per
    /// pairing and distribution, one column per sparsity.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for pairing in [Pairing::QagaVsQa, Pairing::QagaVsMqc] {
            let baseline = match pairing {
                Pairing::QagaVsQa => "QA",
                Pairing::QagaVsMqc => "MQC",
            };
            for &d in &self.config.distributions {
                let _ = writeln!(out, "QAGA vs {baseline} ({d} coefficients)");
                let _ = write!(out, "{:>12}", "s");
                for s in &self.config.sparsities {
                    let _ = write!(out, "{s:>8}");
                }
                out.push('\n');
                for (name, pick) in [
                    (format!("{baseline} better"), 2usize),
                    ("tie".to_string(), 1),
                    ("QAGA better".to_string(), 0),
                ] {
                    let _ = write!(out, "{name:>12}");
                    for &s in &self.config.sparsities {
                        let cell = self.cells.iter().find(|c| {
                            c.pairing == pairing && c.distribution == d && c.sparsity == s
                        });
                        let v = cell.map_or(0, |c| [c.wins, c.ties, c.losses][pick]);
                        let _ = write!(out, "{v:>8}");
                    }
                    out.push('\n');
                }
                out.push('\n');
            }
        }
        out
    }
}

fn run_problem_a(
    config: &ExperimentAConfig,
    distribution: Distribution,
    sparsity: f64,
    index: usize,
) -> Result<ComparisonRecord, BenchError> {
    let start = Instant::now();
    let seed = problem_seed(config.master_seed, distribution, sparsity, index);
    let model = random_model(&ProblemSpec {
        num_vars: config.num_vars,
        sparsity,
        distribution,
        seed,
    })?;
    let sampler = GaugeAveraged::new(config.sampler.build()?, config.num_gauges)?;

    let qa_reads = sampler.sample(&model, config.num_reads, derive_seed(seed, QA_STREAM))?;
    let qa_energy = qa_reads
        .lowest_energy()
        .expect("sampler energies are evaluated");
    let mqc_energy = mqc_reduce(&model, &qa_reads, MqcPolicy::default())?
        .energy()
        .expect("evaluated");

    let qaga = qaga_solve(
        &model,
        &config.qaga_config(derive_seed(seed, QAGA_STREAM)),
        &sampler,
    )?;

    Ok(ComparisonRecord {
        distribution,
        sparsity,
        problem: index,
        problem_seed: seed,
        qa_energy,
        mqc_energy,
        qaga_energy: qaga.energy,
        qaga_vs_qa: Verdict::of(qaga.energy, qa_energy),
        qaga_vs_mqc: Verdict::of(qaga.energy, mqc_energy),
        stages: qaga.stages.len(),
        used_mqc_fallback: qaga.used_mqc_fallback,
        used_incumbent: qaga.used_incumbent,
        wall_time_ms: config
            .record_timing
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

fn tally(
    records: &[ComparisonRecord],
    distributions: &[Distribution],
    sparsities: &[f64],
) -> Vec<CellCounts> {
    let mut cells = Vec::new();
    for pairing in [Pairing::QagaVsQa, Pairing::QagaVsMqc] {
        for &distribution in distributions {
            for &sparsity in sparsities {
                let mut cell = CellCounts {
                    pairing,
                    distribution,
                    sparsity,
                    wins: 0,
                    ties: 0,
                    losses: 0,
                };
                for r in records
                    .iter()
                    .filter(|r| r.distribution == distribution && r.sparsity == sparsity)
                {
                    let v = match pairing {
                        Pairing::QagaVsQa => r.qaga_vs_qa,
                        Pairing::QagaVsMqc => r.qaga_vs_mqc,
                    };
                    match v {
                        Verdict::Win => cell.wins += 1,
                        Verdict::Tie => cell.ties += 1,
                        Verdict::Loss => cell.losses += 1,
                    }
                }
                cells.push(cell);
            }
        }
    }
    cells
}

/// Runs every (distribution, sparsity, problem) job. Problems run in parallel
/// and are merged in job order. Per-problem errors become failures.
pub fn run_experiment_a(config: &ExperimentAConfig) -> Result<ExperimentAReport, BenchError> {
    config.validate()?;
    let jobs: Vec<(Distribution, f64, usize)> = config
        .distributions
        .iter()
        .flat_map(|&d| {
            config
                .sparsities
                .iter()
                .flat_map(move |&s| (0..config.num_problems).map(move |p| (d, s, p)))
        })
        .collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(d, s, p)| run_problem_a(config, d, s, p).map_err(|e| (d, s, p, e)))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err((distribution, sparsity, problem, e)) => failures.push(ProblemFailure {
                distribution,
                sparsity,
                problem,
                problem_seed: problem_seed(config.master_seed, distribution, sparsity, problem),
                error: e.to_string(),
            }),
        }
    }
    let cells = tally(&records, &config.distributions, &config.sparsities);
    Ok(ExperimentAReport {
        config: config.clone(),
        records,
        failures,
        cells,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentBConfig {
    pub thetas: Vec<f64>,
    pub num_problems: usize,
    pub num_vars: usize,
    pub sparsities: Vec<f64>,
    pub num_reads: usize,
    pub num_gauges: usize,
    pub max_stages: usize,
    pub final_local_search: bool,
    pub sampler: SamplerChoice,
    pub master_seed: u64,
}

impl Default for ExperimentBConfig {
    fn default() -> Self {
        Self {
            thetas: DEFAULT_THETAS.to_vec(),
            num_problems: 100,
            num_vars: 50,
            sparsities: DEFAULT_SPARSITIES.to_vec(),
            num_reads: 1000,
            num_gauges: 10,
            max_stages: 64,
            final_local_search: true,
            sampler: SamplerChoice::default(),
            master_seed: 0,
        }
    }
}

impl ExperimentBConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        validate_common(
            self.num_problems,
            self.num_vars,
            &self.sparsities,
            self.num_reads,
            self.num_gauges,
        )?;
        if self.thetas.is_empty() {
            return Err(BenchError::InvalidConfig("the theta list is empty".into()));
        }
        if self.max_stages == 0 {
            return Err(BenchError::InvalidConfig(
                "max_stages must be at least 1".into(),
            ));
        }
        if let Some(t) = self.thetas.iter().find(|t| !(0.0..0.5).contains(*t)) {
            return Err(BenchError::InvalidConfig(format!(
                "theta {t} is outside [0, 0.5)"
            )));
        }
        self.sampler.build()?;
        Ok(())
    }
}

/// Mean QAGA stage counts: rows are thetas, columns sparsities. Problems use
/// normal coefficients and the same seeds as experiment A's normal problems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTable {
    pub config: ExperimentBConfig,
    pub thetas: Vec<f64>,
    pub sparsities: Vec<f64>,
    /// `mean_stages[row][column]`; `None` when every problem in the cell failed.
    pub mean_stages: Vec<Vec<Option<f64>>>,
    pub failures: Vec<ProblemFailure>,
}

impl StageTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta");
        for s in &self.sparsities {
            let _ = write!(out, ",{s}");
        }
        out.push('\n');
        for (t, row) in self.thetas.iter().zip(&self.mean_stages) {
            let _ = write!(out, "{t}");
            for v in row {
                match v {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("{:>8} |", "theta");
        for s in &self.sparsities {
            let _ = write!(out, "{s:>8}");
        }
        out.push('\n');
        for (t, row) in self.thetas.iter().zip(&self.mean_stages) {
            let _ = write!(out, "{t:>8.2} |");
            for v in row {
                match v {
                    Some(v) => {
                        let _ = write!(out, "{v:>8.2}");
                    }
                    None => {
                        let _ = write!(out, "{:>8}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

fn run_problem_b(
    config: &ExperimentBConfig,
    model: &IsingModel,
    theta: f64,
    seed: u64,
) -> Result<usize, BenchError> {
    let sampler = GaugeAveraged::new(config.sampler.build()?, config.num_gauges)?;
    let qaga_config = QagaConfig {
        theta,
        num_reads: config.num_reads,
        max_stages: config.max_stages,
        final_local_search: config.final_local_search,
        seed: derive_seed(seed, QAGA_STREAM),
    };
    Ok(qaga_solve(model, &qaga_config, &sampler)?.stages.len())
}

pub fn run_experiment_b(config: &ExperimentBConfig) -> Result<StageTable, BenchError> {
    config.validate()?;
    let jobs: Vec<(usize, usize, usize)> = (0..config.thetas.len())
        .flat_map(|t| {
            (0..config.sparsities.len())
                .flat_map(move |s| (0..config.num_problems).map(move |p| (t, s, p)))
        })
        .collect();
    let outcomes: Vec<Result<usize, ProblemFailure>> = jobs
        .par_iter()
        .map(|&(t, s, p)| {
            let sparsity = config.sparsities[s];
            let seed = problem_seed(config.master_seed, Distribution::Normal, sparsity, p);
            let fail = |e: BenchError| ProblemFailure {
                distribution: Distribution::Normal,
                sparsity,
                problem: p,
                problem_seed: seed,
                error: format!("theta {}: {e}", config.thetas[t]),
            };
            let model = random_model(&ProblemSpec {
                num_vars: config.num_vars,
                sparsity,
                distribution: Distribution::Normal,
                seed,
            })
            .map_err(|e| fail(e.into()))?;
            run_problem_b(config, &model, config.thetas[t], seed).map_err(fail)
        })
        .collect();

    let mut sums = vec![vec![(0usize, 0usize); config.sparsities.len()]; config.thetas.len()];
    let mut failures = Vec::new();
    for (&(t, s, _), outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(stages) => {
                sums[t][s].0 += stages;
                sums[t][s].1 += 1;
            }
            Err(f) => failures.push(f),
        }
    }
    let mean_stages = sums
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(total, count)| (count > 0).then(|| total as f64 / count as f64))
                .collect()
        })
        .collect();
    Ok(StageTable {
        config: config.clone(),
        thetas: config.thetas.clone(),
        sparsities: config.sparsities.clone(),
        mean_stages,
        failures,
    })
}
