//! `qaga`: generate random Ising problems, solve them, and run the
//! comparison experiments.
//!
//! Exit codes: 0 on success, 1 when some problems failed (failures are
//! recorded in the output), 2 on usage, parse or validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qaga_core::bench::{
    persist_results, records_to_csv, run_experiment_a, run_experiment_b, ExperimentAConfig,
    ExperimentBConfig, SamplerChoice,
};
use qaga_core::ising::io::{model_from_json, model_to_json};
use qaga_core::{
    mqc_reduce, qaga_solve, random_model, sqc, stage_trace, Distribution, ExactSampler,
    GaugeAveraged, IsingModel, MqcPolicy, ProblemSpec, QagaConfig, RemoteSampler, SaConfig, Sample,
    Sampler, SimulatedAnnealing,
};

#[derive(Parser)]
#[command(
    name = "qaga",
    version,
    about = "Sampler-assisted greedy Ising minimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random model and write it as JSON.
    Generate(GenerateArgs),
    /// Solve one model with a chosen method.
    Solve(SolveArgs),
    /// Win/tie/loss comparison of QAGA against QA and MQC.
    Expa(ExpaArgs),
    /// Mean QAGA stage counts over thresholds and sparsities.
    Expb(ExpbArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DistributionArg {
    Binary,
    Uniform,
    Normal,
}

impl From<DistributionArg> for Distribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::Binary => Distribution::Binary,
            DistributionArg::Uniform => Distribution::Uniform,
            DistributionArg::Normal => Distribution::Normal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    Sa,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Qa,
    Mqc,
    Qaga,
    Sa,
    Exact,
    SqcPolish,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Number of variables.
    #[arg(long = "n", default_value_t = 50)]
    num_vars: usize,
    /// Edge inclusion probability.
    #[arg(long, default_value_t = 1.0)]
    sparsity: f64,
    #[arg(long, value_enum, default_value_t = DistributionArg::Normal)]
    distribution: DistributionArg,
}

#[derive(Args, Clone)]
struct SaArgs {
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0.1)]
    beta_initial: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_final: f64,
}

impl SaArgs {
    fn config(&self) -> SaConfig {
        SaConfig {
            num_sweeps: self.sweeps,
            beta_initial: self.beta_initial,
            beta_final: self.beta_final,
        }
    }

    fn choice(&self, sampler: SamplerArg) -> SamplerChoice {
        match sampler {
            SamplerArg::Sa => self.config().into(),
            SamplerArg::Exact => SamplerChoice::Exact,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only JSON is supported for models.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SolveArgs {
    /// Model JSON file. When omitted a random model is generated from the
    /// problem flags and `--seed`.
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Method::Qaga)]
    method: Method,
    /// Inner sampler for qa, mqc and qaga.
    #[arg(long, value_enum, default_value_t = SamplerArg::Sa)]
    sampler: SamplerArg,
    /// Use a remote sampler at this URL instead of `--sampler`.
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long, default_value_t = 30.0)]
    timeout_secs: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    #[arg(long, default_value_t = 10)]
    gauges: usize,
    #[arg(long, default_value_t = 64)]
    max_stages: usize,
    /// Skip the final single-spin descent in qaga.
    #[arg(long)]
    no_local_search: bool,
    #[command(flatten)]
    sa: SaArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ExpaArgs {
    #[arg(long, default_value_t = 100)]
    problems: usize,
    #[arg(long = "n", default_value_t = 50)]
    num_vars: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.25, 0.5, 0.75, 1.0])]
    sparsities: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [DistributionArg::Binary, DistributionArg::Uniform, DistributionArg::Normal])]
    distributions: Vec<DistributionArg>,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    #[arg(long, default_value_t = 10)]
    gauges: usize,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 64)]
    max_stages: usize,
    #[arg(long)]
    no_local_search: bool,
    #[arg(long, value_enum, default_value_t = SamplerArg::Sa)]
    sampler: SamplerArg,
    #[command(flatten)]
    sa: SaArgs,
    /// Record per-problem wall time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for records.csv, counts.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format: csv prints the records, json the summary.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ExpbArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.15, 0.05, 0.0])]
    thetas: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    problems: usize,
    #[arg(long = "n", default_value_t = 50)]
    num_vars: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.25, 0.5, 0.75, 1.0])]
    sparsities: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    #[arg(long, default_value_t = 10)]
    gauges: usize,
    #[arg(long, default_value_t = 64)]
    max_stages: usize,
    #[arg(long)]
    no_local_search: bool,
    #[arg(long, value_enum, default_value_t = SamplerArg::Sa)]
    sampler: SamplerArg,
    #[command(flatten)]
    sa: SaArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for stages.csv and stages.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.into()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    if args.format != Format::Json {
        return Err(usage(anyhow!("models are only written as JSON")));
    }
    let spec = ProblemSpec {
        num_vars: args.problem.num_vars,
        sparsity: args.problem.sparsity,
        distribution: args.problem.distribution.into(),
        seed: args.seed,
    };
    let model = random_model(&spec).map_err(usage)?;
    emit(args.out.as_deref(), &(model_to_json(&model, 0.0) + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn load_model(args: &SolveArgs) -> Result<(IsingModel, f64)> {
    match &args.model {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(usage)?;
            model_from_json(&text)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(usage)
        }
        None => {
            let spec = ProblemSpec {
                num_vars: args.problem.num_vars,
                sparsity: args.problem.sparsity,
                distribution: args.problem.distribution.into(),
                seed: args.seed,
            };
            Ok((random_model(&spec).map_err(usage)?, 0.0))
        }
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let qaga_config = QagaConfig {
        theta: args.theta,
        num_reads: args.reads,
        max_stages: args.max_stages,
        final_local_search: !args.no_local_search,
        seed: args.seed,
    };
    if args.method == Method::Qaga {
        qaga_config.validate().map_err(usage)?;
    }
    let (model, offset) = load_model(&args)?;

    let inner: Box<dyn Sampler> = match (&args.endpoint, args.sampler) {
        (Some(url), _) => Box::new(RemoteSampler::new(
            url.clone(),
            Duration::from_secs_f64(args.timeout_secs),
        )),
        (None, SamplerArg::Exact) => Box::new(ExactSampler),
        (None, SamplerArg::Sa) => {
            Box::new(SimulatedAnnealing::new(args.sa.config()).map_err(usage)?)
        }
    };

    let mut trace = None;
    let solution: Sample = match args.method {
        Method::Exact => ExactSampler
            .sample(&model, 1, args.seed)
            .map_err(usage)?
            .samples()[0]
            .clone(),
        Method::Sa | Method::SqcPolish => {
            let reads = inner.sample(&model, args.reads, args.seed)?;
            let best = reads.best().expect("energies are evaluated").clone();
            if args.method == Method::SqcPolish {
                sqc(&model, &best)?
            } else {
                best
            }
        }
        Method::Qa | Method::Mqc => {
            let qa = GaugeAveraged::new(inner, args.gauges).map_err(usage)?;
            let reads = qa
                .sample(&model, args.reads, args.seed)
                .map_err(|e| match e {
                    qaga_core::SamplerError::InvalidConfig(_) => usage(e),
                    other => other.into(),
                })?;
            if args.method == Method::Mqc {
                mqc_reduce(&model, &reads, MqcPolicy::default())?
            } else {
                reads.best().expect("energies are evaluated").clone()
            }
        }
        Method::Qaga => {
            let qa = GaugeAveraged::new(inner, args.gauges).map_err(usage)?;
            if args.reads < args.gauges {
                return Err(usage(anyhow!("--reads must be at least --gauges")));
            }
            let result = qaga_solve(&model, &qaga_config, &qa)?;
            let sol = result.solution.clone();
            trace = Some(result);
            sol
        }
    };
    let energy = model.energy_of(solution.assignment())?;
    eprintln!("energy: {energy}");
    if let Some(r) = &trace {
        let t = stage_trace(r);
        eprintln!(
            "stages: {} (fixed per stage: {:?}), mqc fallback: {}, incumbent: {}",
            t.stage_count, t.fixed_counts, r.used_mqc_fallback, r.used_incumbent
        );
    }

    let text = match args.format {
        Format::Json => {
            let report = serde_json::json!({
                "method": format!("{:?}", args.method).to_lowercase(),
                "energy": energy,
                "energy_with_offset": energy + offset,
                "solution": solution
                    .assignment()
                    .iter()
                    .map(|(l, s)| (l.to_string(), serde_json::Value::from(s.value())))
                    .collect::<serde_json::Map<_, _>>(),
                "stages": trace.as_ref().map(|r| &r.stages),
                "used_mqc_fallback": trace.as_ref().map(|r| r.used_mqc_fallback),
                "used_incumbent": trace.as_ref().map(|r| r.used_incumbent),
            });
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("label,spin\n");
            for (l, v) in solution.assignment() {
                s.push_str(&format!("{l},{}\n", v.value()));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn expa(args: ExpaArgs) -> Result<ExitCode> {
    let config = ExperimentAConfig {
        num_problems: args.problems,
        num_vars: args.num_vars,
        sparsities: args.sparsities,
        distributions: args.distributions.into_iter().map(Into::into).collect(),
        num_reads: args.reads,
        num_gauges: args.gauges,
        theta: args.theta,
        max_stages: args.max_stages,
        final_local_search: !args.no_local_search,
        sampler: args.sa.choice(args.sampler),
        master_seed: args.seed,
        record_timing: args.timing,
    };
    config.validate().map_err(usage)?;
    let report = run_experiment_a(&config)?;
    if let Some(dir) = &args.out {
        persist_results(&report, dir)?;
    }
    eprint!("{}", report.render_table());
    match args.format {
        Format::Csv => print!("{}", records_to_csv(&report.records)?),
        Format::Json => println!("{}", report.summary_json()),
    }
    for f in &report.failures {
        eprintln!(
            "failed: {} s={} problem {}: {}",
            f.distribution, f.sparsity, f.problem, f.error
        );
    }
    Ok(if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn expb(args: ExpbArgs) -> Result<ExitCode> {
    let config = ExperimentBConfig {
        thetas: args.thetas,
        num_problems: args.problems,
        num_vars: args.num_vars,
        sparsities: args.sparsities,
        num_reads: args.reads,
        num_gauges: args.gauges,
        max_stages: args.max_stages,
        final_local_search: !args.no_local_search,
        sampler: args.sa.choice(args.sampler),
        master_seed: args.seed,
    };
    config.validate().map_err(usage)?;
    let table = run_experiment_b(&config)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let csv = dir.join("stages.csv");
        fs::write(&csv, table.to_csv()).with_context(|| format!("writing {}", csv.display()))?;
        let json = dir.join("stages.json");
        fs::write(&json, table.to_json() + "\n")
            .with_context(|| format!("writing {}", json.display()))?;
    }
    eprint!("{}", table.render_table());
    match args.format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => println!("{}", table.to_json()),
    }
    for f in &table.failures {
        eprintln!(
            "failed: s={} problem {}: {}",
            f.sparsity, f.problem, f.error
        );
    }
    Ok(if table.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Expa(a) => expa(a),
        Command::Expb(a) => expb(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
