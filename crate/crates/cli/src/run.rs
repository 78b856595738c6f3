use std::fs;

use serde::{Deserialize, Serialize};
use walsh_hardy::counterexamples::{
    a02_block_experiment, block_strong_table, divergence_experiment, norm_convergence_experiment, random_example,
    strong_sum_experiment, upper_bound_experiment, DivergenceConfig, LambdaSchedule, NormKind, Phi, ScheduleKind,
};
use walsh_hardy::dyadic::{cells, check_resolution, highest_bit, max_resolution, variation};
use walsh_hardy::hardy::random_atom;
use walsh_hardy::kernels::{
    kernel_bounds_report, lebesgue_cesaro, lebesgue_constant, lebesgue_constant_cells, DirichletMethod, FejerMethod,
};
use walsh_hardy::operators::{IndexFamily, OperatorKind};
use walsh_hardy::random::seeded_rng;
use walsh_hardy::suites::{parse_suites, run_suites, SuiteConfig};
use walsh_hardy::{dirichlet, fejer_kernel, DyadicFunction, ExperimentTable};

use crate::args::{
    Cli, Command, ExperimentArgs, ExperimentKind, Format, KernelArgs, KernelKind, LebesgueArgs, ReportArgs,
    VerifyArgs,
};
use crate::emit::{emit, Output};
use crate::error::CliError;

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    }
    let parallel = cli.jobs.is_some_and(|j| j > 1);
    let (output, default_format) = match &cli.command {
        Command::Kernel(args) => (kernel(args)?, Format::Csv),
        Command::Lebesgue(args) => (lebesgue(args)?, Format::Csv),
        Command::Verify(args) => (verify(args, cli.seed, parallel)?, Format::Text),
        Command::Experiment(args) => (experiment(args, cli.seed)?, Format::Csv),
        Command::Report(args) => (report(args)?, Format::Text),
    };
    emit(&output, cli.format.unwrap_or(default_format), cli.out.as_deref())?;
    match output.failed_checks() {
        0 => Ok(()),
        n => Err(CliError::Assertion(n)),
    }
}

fn require_index(flag: &str, n: Option<u64>) -> Result<u64, CliError> {
    match n {
        Some(0) => Err(CliError::usage(flag, "must be at least 1")),
        Some(n) => Ok(n),
        None => Err(CliError::Usage(format!("--{flag} is required"))),
    }
}

fn kernel(args: &KernelArgs) -> Result<Output, CliError> {
    check_resolution(args.resolution)?;
    if args.kind == KernelKind::Report {
        let ns: Vec<u64> = match (args.n, args.n_max) {
            (Some(n), None) => vec![require_index("n", Some(n))?],
            (None, Some(m)) => (1..=require_index("n-max", Some(m))?).collect(),
            (None, None) => (1..=cells(args.resolution).min(1024)).collect(),
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --n or --n-max".into())),
        };
        return Ok(Output::kernels(kernel_bounds_report(&ns, args.resolution)?, args.resolution));
    }
    if args.n_max.is_some() {
        return Err(CliError::Usage("--n-max only applies to `kernel report`".into()));
    }
    let n = require_index("n", args.n)?;
    let (name, values) = match args.kind {
        KernelKind::Dirichlet => {
            let method = match args.method.as_deref().unwrap_or("recursive") {
                "direct" => DirichletMethod::Direct,
                "lemma1" => DirichletMethod::Lemma1,
                "recursive" => DirichletMethod::Recursive,
                other => return Err(CliError::usage("method", format!("unknown Dirichlet method `{other}`"))),
            };
            ("dirichlet", dirichlet(n, args.resolution, method)?)
        }
        _ => {
            let method = match args.method.as_deref().unwrap_or("lemma3") {
                "direct" => FejerMethod::Direct,
                "weighted" => FejerMethod::Weighted,
                "lemma3" => FejerMethod::Lemma3,
                other => return Err(CliError::usage("method", format!("unknown Fejér method `{other}`"))),
            };
            ("fejer", fejer_kernel(n, args.resolution, method)?)
        }
    };
    let mut table = ExperimentTable::new(format!("{name}_kernel"));
    table.meta.resolution = Some(args.resolution);
    table.note("n", n);
    for (x, &v) in values.values().iter().enumerate() {
        table.push(x as u64, n, name, v);
    }
    Ok(Output::table(table))
}

fn lebesgue(args: &LebesgueArgs) -> Result<Output, CliError> {
    if let Some(n) = args.n {
        let n = require_index("n", Some(n))?;
        let mut table = ExperimentTable::new("lebesgue_constant");
        table.push(0, n, "lebesgue", lebesgue_constant(n)?);
        table.push(0, n, "variation", variation(n) as f64);
        if highest_bit(n)? < max_resolution() {
            table.push(0, n, "lebesgue_cells", lebesgue_constant_cells(n)?);
        }
        return Ok(Output::table(table));
    }
    if args.n_max < 16 {
        return Err(CliError::usage("n-max", "must be at least 16"));
    }
    Ok(Output::table(lebesgue_cesaro(args.n_max)?))
}

fn verify(args: &VerifyArgs, seed: u64, parallel: bool) -> Result<Output, CliError> {
    let suites = parse_suites(&args.suite)
        .ok_or_else(|| CliError::Usage(format!("unknown suite `{}`", args.suite)))?;
    check_resolution(args.resolution)?;
    let cfg = SuiteConfig {
        resolution: args.resolution,
        seed,
        max_n: args.max_n,
    };
    let reports = run_suites(&suites, &cfg, parallel)?;
    Ok(Output::suites(reports, args.resolution, seed))
}

/// Experiment parameters, as flags or as a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    pub p: f64,
    pub family: String,
    pub build_family: String,
    pub schedule: String,
    pub phi: String,
    pub operator: String,
    pub norm: String,
    pub resolution: Option<u32>,
    pub k_min: Option<u32>,
    pub samples: usize,
    pub n_max: Option<u64>,
    pub m_max: u32,
    pub source: String,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            p: 0.5,
            family: "pow2_plus1".into(),
            build_family: "pow2_plus1".into(),
            schedule: "thm411b".into(),
            phi: "const".into(),
            operator: "partial_sum".into(),
            norm: "weak_lp".into(),
            resolution: None,
            k_min: None,
            samples: 8,
            n_max: None,
            m_max: 10,
            source: "atom".into(),
        }
    }
}

impl ExperimentParams {
    fn merge(mut self, args: &ExperimentArgs) -> Self {
        if let Some(v) = args.p {
            self.p = v;
        }
        for (slot, flag) in [
            (&mut self.family, &args.family),
            (&mut self.build_family, &args.build_family),
            (&mut self.schedule, &args.schedule),
            (&mut self.phi, &args.phi),
            (&mut self.operator, &args.operator),
            (&mut self.norm, &args.norm),
            (&mut self.source, &args.source),
        ] {
            if let Some(v) = flag {
                *slot = v.clone();
            }
        }
        self.resolution = args.resolution.or(self.resolution);
        self.k_min = args.k_min.or(self.k_min);
        self.samples = args.samples.unwrap_or(self.samples);
        self.n_max = args.n_max.or(self.n_max);
        self.m_max = args.m_max.unwrap_or(self.m_max);
        self
    }

    fn family(&self, flag: &str, name: &str) -> Result<IndexFamily, CliError> {
        IndexFamily::parse(name).ok_or_else(|| CliError::usage(flag, format!("unknown family `{name}`")))
    }

    fn schedule(&self) -> Result<LambdaSchedule, CliError> {
        let kind = ScheduleKind::parse(&self.schedule)
            .ok_or_else(|| CliError::usage("schedule", format!("unknown schedule `{}`", self.schedule)))?;
        Ok(LambdaSchedule::new(kind, self.p, self.phi()?))
    }

    fn phi(&self) -> Result<Phi, CliError> {
        Phi::parse(&self.phi).ok_or_else(|| CliError::usage("phi", format!("unknown growth function `{}`", self.phi)))
    }

    fn operator(&self) -> Result<OperatorKind, CliError> {
        match self.operator.as_str() {
            "partial_sum" => Ok(OperatorKind::PartialSum),
            "fejer" => Ok(OperatorKind::Fejer),
            other => Err(CliError::usage("operator", format!("unknown operator `{other}`"))),
        }
    }

    fn norm(&self) -> Result<NormKind, CliError> {
        NormKind::parse(&self.norm).ok_or_else(|| CliError::usage("norm", format!("unknown norm `{}`", self.norm)))
    }

    fn resolution(&self, default: u32) -> Result<u32, CliError> {
        let r = self.resolution.unwrap_or(default);
        check_resolution(r)?;
        if r < 2 {
            return Err(CliError::usage("resolution", "must be at least 2"));
        }
        Ok(r)
    }
}

/// Default resolution for experiments.
const EXPERIMENT_RESOLUTION: u32 = 14;
/// Default resolution for the upper-bound sweep, which visits every index.
const UPPER_BOUND_RESOLUTION: u32 = 10;

fn experiment(args: &ExperimentArgs, seed: u64) -> Result<Output, CliError> {
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?
        }
        None => ExperimentParams::default(),
    };
    let params = base.merge(args);
    if !(params.p > 0.0 && params.p.is_finite()) {
        return Err(CliError::usage("p", "must be positive"));
    }

    let table = match args.kind {
        ExperimentKind::Divergence => divergence_experiment(&DivergenceConfig {
            p: params.p,
            family: params.family("family", &params.family)?,
            build_family: params.family("build-family", &params.build_family)?,
            schedule: params.schedule()?,
            kind: params.operator()?,
            norm: params.norm()?,
            resolution: params.resolution(EXPERIMENT_RESOLUTION)?,
            k_min: params.k_min.unwrap_or(3),
        })?,
        ExperimentKind::UpperBound => upper_bound_experiment(
            params.p,
            params.operator()?,
            params.resolution(UPPER_BOUND_RESOLUTION)?,
            params.samples,
            seed,
        )?,
        ExperimentKind::NormConvergence => norm_convergence_experiment(
            params.p,
            &params.family("family", &params.family)?,
            &params.schedule()?,
            params.operator()?,
            params.resolution(EXPERIMENT_RESOLUTION)?,
            params.k_min.unwrap_or(2),
        )?,
        ExperimentKind::StrongSum => {
            let r = params.resolution(EXPERIMENT_RESOLUTION)?;
            let mut rng = seeded_rng(seed);
            let f = match params.source.as_str() {
                "constant" => DyadicFunction::constant(r, 1.0)?,
                "atom" => random_atom(&mut rng, params.p, r)?.0,
                "build" => random_example(&mut rng, params.p, r, 6)?.function,
                other => return Err(CliError::usage("source", format!("unknown source `{other}`"))),
            };
            let mut t = strong_sum_experiment(params.p, params.operator()?, &f, params.n_max.unwrap_or(cells(r - 1)))?;
            t.meta.seed = Some(seed);
            t.note("source", &params.source);
            t
        }
        ExperimentKind::BlockStrong => {
            if params.m_max < 2 || params.m_max >= max_resolution() {
                return Err(CliError::usage("m-max", format!("must lie in [2, {})", max_resolution())));
            }
            block_strong_table(2..=params.m_max)?
        }
        ExperimentKind::A02Blocks => a02_block_experiment(params.p, params.phi()?, params.resolution(12)?)?,
    };
    Ok(Output::table(table))
}

fn report(args: &ReportArgs) -> Result<Output, CliError> {
    let text = fs::read_to_string(&args.input).map_err(|source| CliError::Io {
        path: args.input.display().to_string(),
        source,
    })?;
    Output::from_json(&text)
}
