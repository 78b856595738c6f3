//! Named verification suites. Each suite runs a group of numerical checks
//! and reports every check with its computed value, its bound and a verdict.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counterexamples::{
    a02_block_experiment, block_strong_statistic, build_example_martingale, divergence_experiment,
    fejer_block_identity_error, fejer_nonconvergence, half_atom, modulus_law_ratio, norm_convergence_experiment, norm_convergence_table, random_example,
    strong_sum_experiment, strong_sum_sources, upper_bound_experiment, DivergenceConfig, LambdaSchedule, NormKind,
    Phi, ScheduleKind,
};
use crate::dyadic::{cells, check_resolution, variation};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::hardy::{atom_check, atomic_ratio, hp_norm, lp_norm, random_atom, weak_lp_norm, AtomSpec};
use crate::kernels::{
    dirichlet, dirichlet_reflection, fejer_bounds, fejer_kernel, fejer_pow2_closed, lebesgue_cesaro,
    lebesgue_constant, lebesgue_constant_cells, local_fejer_integral_ratio, DirichletMethod, FejerMethod,
    VARIATION_CESARO_LIMIT,
};
use crate::operators::{classical_modulus, partial_sum, tail, IndexFamily, OperatorKind};
use crate::random::{random_function, seeded_rng, DEFAULT_SEED};
use crate::table::{spread_ratio, strictly_decreasing, strictly_increasing};
use crate::walsh::{analyze, walsh_function, walsh_sign, DyadicFunction};

/// Smallest resolution the suites accept.
pub const MIN_SUITE_RESOLUTION: u32 = 6;
/// Default resolution for suites.
pub const DEFAULT_SUITE_RESOLUTION: u32 = 12;
/// Default upper end of the Lebesgue-constant sweep.
pub const DEFAULT_MAX_N: u64 = 4096;
/// Resolution at which the sampled upper-bound and atomic ratios are frozen.
const SAMPLED_RATIO_RESOLUTION: u32 = 10;
/// Resolution at which the norm-convergence ratio is frozen.
const NORM_RATIO_RESOLUTION: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma0,
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Lemma6,
    Lemma7,
    Watari,
    Atoms,
    Example221,
    Thm41,
    Thm42,
    Thm51,
    Thm52,
    Thm531,
    Thm532,
}

impl Suite {
    pub const ALL: [Suite; 17] = [
        Suite::Lemma0,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Lemma5,
        Suite::Lemma6,
        Suite::Lemma7,
        Suite::Watari,
        Suite::Atoms,
        Suite::Example221,
        Suite::Thm41,
        Suite::Thm42,
        Suite::Thm51,
        Suite::Thm52,
        Suite::Thm531,
        Suite::Thm532,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma0 => "lemma0",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::Lemma6 => "lemma6",
            Suite::Lemma7 => "lemma7",
            Suite::Watari => "watari",
            Suite::Atoms => "atoms",
            Suite::Example221 => "example221",
            Suite::Thm41 => "thm41",
            Suite::Thm42 => "thm42",
            Suite::Thm51 => "thm51",
            Suite::Thm52 => "thm52",
            Suite::Thm531 => "thm531",
            Suite::Thm532 => "thm532",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// One-line summary of what the suite checks.
    pub fn description(&self) -> &'static str {
        match self {
            Suite::Lemma0 => "Dirichlet shift and reflection identities",
            Suite::Lemma1 => "Dirichlet kernels from dyadic blocks, closed and recursive",
            Suite::Lemma2 => "Two-sided Lebesgue-constant bounds by variation, Cesàro averages",
            Suite::Lemma3 => "Fejér kernel decomposition over set bits",
            Suite::Lemma4 => "Closed form of dyadic Fejér kernels",
            Suite::Lemma5 => "Local integrals of Fejér kernels on shifted dyadic intervals",
            Suite::Lemma6 => "Pointwise run majorant of n|K_n|",
            Suite::Lemma7 => "Pointwise lower bound of n|K_n| near each run",
            Suite::Watari => "Dyadic modulus of continuity sandwich",
            Suite::Atoms => "Atoms, H_p and weak-L_p quasi-norms",
            Suite::Example221 => "Haar-pair martingale spectrum, partial-sum and modulus laws",
            Suite::Thm41 => "Partial sums on H_p: growth rates and divergence along 2^k + 1",
            Suite::Thm42 => "Norm convergence of partial sums via the H_p modulus",
            Suite::Thm51 => "Fejér means on H_p: growth rates and divergence along 2^k + 1",
            Suite::Thm52 => "Norm convergence of Fejér means",
            Suite::Thm531 => "Strong summability of Fejér means at p = 1/2",
            Suite::Thm532 => "Failure of plain Fejér strong sums for L_{1/2} atoms",
        }
    }
}

/// Parses a suite list: a single suite name or `all`.
pub fn parse_suites(name: &str) -> Option<Vec<Suite>> {
    if name == "all" {
        Some(Suite::ALL.to_vec())
    } else {
        Suite::parse(name).map(|s| vec![s])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub resolution: u32,
    pub seed: u64,
    pub max_n: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_SUITE_RESOLUTION,
            seed: DEFAULT_SEED,
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        check_resolution(self.resolution)?;
        if self.resolution < MIN_SUITE_RESOLUTION {
            return Err(Error::InvalidParameter(format!(
                "suites need resolution >= {MIN_SUITE_RESOLUTION} (got {})",
                self.resolution
            )));
        }
        if self.max_n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= bound`.
    pub fn at_most(name: &str, statement: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }

    /// Passes when `value >= bound`.
    pub fn at_least(name: &str, statement: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            value,
            bound,
            passed: value >= bound,
        }
    }

    /// Passes when the predicate holds; value is 1 or 0.
    pub fn holds(name: &str, statement: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: 1.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub description: String,
    pub resolution: u32,
    pub seed: u64,
    pub elapsed_ms: u128,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let checks = match suite {
        Suite::Lemma0 => lemma0(cfg)?,
        Suite::Lemma1 => lemma1(cfg)?,
        Suite::Lemma2 => lemma2(cfg)?,
        Suite::Lemma3 => lemma3(cfg)?,
        Suite::Lemma4 => lemma4(cfg)?,
        Suite::Lemma5 => lemma5(cfg)?,
        Suite::Lemma6 => lemma6(cfg)?,
        Suite::Lemma7 => lemma7(cfg)?,
        Suite::Watari => watari(cfg)?,
        Suite::Atoms => atoms(cfg)?,
        Suite::Example221 => example221(cfg)?,
        Suite::Thm41 => thm41(cfg)?,
        Suite::Thm42 => thm42(cfg)?,
        Suite::Thm51 => thm51(cfg)?,
        Suite::Thm52 => thm52(cfg)?,
        Suite::Thm531 => thm531(cfg)?,
        Suite::Thm532 => thm532(cfg)?,
    };
    Ok(SuiteReport {
        suite,
        description: suite.description().into(),
        resolution: cfg.resolution,
        seed: cfg.seed,
        elapsed_ms: start.elapsed().as_millis(),
        checks,
    })
}

/// Runs several suites, concurrently when `parallel` is set. Reports come
/// back in the order of `suites`.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig, parallel: bool) -> Result<Vec<SuiteReport>> {
    cfg.validate()?;
    if parallel {
        suites.par_iter().map(|&s| run_suite(s, cfg)).collect()
    } else {
        suites.iter().map(|&s| run_suite(s, cfg)).collect()
    }
}

/// Resolution for the exact kernel sweeps.
fn kernel_resolution(cfg: &SuiteConfig) -> u32 {
    cfg.resolution.min(10)
}

/// `D_n` and `K_n` for `n = 0..=n_max` by running sums of characters.
struct KernelTables {
    dirichlet: Vec<Vec<f64>>,
    fejer: Vec<Vec<f64>>,
}

impl KernelTables {
    fn build(resolution: u32, n_max: u64) -> Self {
        let size = cells(resolution) as usize;
        let mut d = vec![0.0f64; size];
        let mut acc = vec![0.0f64; size];
        let mut dirichlet = vec![d.clone()];
        let mut fejer = vec![d.clone()];
        for n in 1..=n_max {
            for (x, (dv, av)) in d.iter_mut().zip(acc.iter_mut()).enumerate() {
                *dv += walsh_sign(n - 1, x as u64);
                *av += *dv;
            }
            dirichlet.push(d.clone());
            fejer.push(acc.iter().map(|v| v / n as f64).collect());
        }
        Self { dirichlet, fejer }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lemma0(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = kernel_resolution(cfg);
    let top = cells(r);
    let tables = KernelTables::build(r, top);
    let d = &tables.dirichlet;

    let mut shift: f64 = 0.0;
    for m in 0..r {
        let lo = cells(m);
        let w = walsh_function(lo, r)?;
        for j in 0..=lo.min(top - lo) {
            let rhs: Vec<f64> = d[lo as usize]
                .iter()
                .zip(w.values())
                .zip(&d[j as usize])
                .map(|((a, s), b)| a + s * b)
                .collect();
            shift = shift.max(max_diff(&d[(lo + j) as usize], &rhs));
        }
    }

    let mut reflection: f64 = 0.0;
    for n in 0..=r {
        for j in 0..cells(n) {
            let lhs = dirichlet_reflection(n, j, r)?;
            reflection = reflection.max(max_diff(lhs.values(), &d[(cells(n) - j) as usize]));
        }
    }
    Ok(vec![
        Check::at_most(
            "shift",
            format!("D_{{2^m + j}} = D_{{2^m}} + w_{{2^m}} D_j for 0 <= j <= 2^m, 2^m + j <= {top}"),
            shift,
            0.0,
        ),
        Check::at_most(
            "reflection",
            format!("D_{{2^n - j}} = D_{{2^n}} - w_{{2^n - 1}} D_j for 0 <= j < 2^n <= {top}"),
            reflection,
            0.0,
        ),
    ])
}

fn lemma1(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = kernel_resolution(cfg);
    let n_max = cells(r - 1);
    let tables = KernelTables::build(r, n_max);
    let worst = |method| -> Result<f64> {
        (1..=n_max)
            .into_par_iter()
            .map(|n| Ok(max_diff(dirichlet(n, r, method)?.values(), &tables.dirichlet[n as usize])))
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
    };
    Ok(vec![
        Check::at_most(
            "block_form",
            format!("D_n = w_n sum_k n_k (D_{{2^{{k+1}}}} - D_{{2^k}}) for n <= {n_max}"),
            worst(DirichletMethod::Lemma1)?,
            0.0,
        ),
        Check::at_most(
            "recursive_form",
            format!("D_n = D_{{2^|n|}} + w_{{2^|n|}} D_{{n - 2^|n|}} for n <= {n_max}"),
            worst(DirichletMethod::Recursive)?,
            0.0,
        ),
    ])
}

/// Grid points at which the Cesàro errors must decrease.
pub const CESARO_GRID: [u64; 4] = [1 << 10, 1 << 14, 1 << 18, 1 << 20];

/// `|error|` values of one Cesàro statistic at [`CESARO_GRID`].
pub fn cesaro_errors(statistic: &str, limit: f64) -> Result<Vec<f64>> {
    let table = lebesgue_cesaro(*CESARO_GRID.last().unwrap_or(&16))?;
    let column = table.column(statistic);
    Ok(CESARO_GRID
        .iter()
        .filter_map(|g| column.iter().find(|(n, _)| n == g).map(|&(_, v)| (v - limit).abs()))
        .collect())
}

fn lemma2(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n_max = cfg.max_n;
    let rows: Vec<(u64, f64, f64)> = (1..=n_max)
        .into_par_iter()
        .map(|n| Ok((n, lebesgue_constant_cells(n)?, variation(n) as f64)))
        .collect::<Result<_>>()?;
    let lower = rows.iter().map(|&(_, l, v)| l / (v / 8.0)).fold(f64::INFINITY, f64::min);
    let upper = rows.iter().map(|&(_, l, v)| l / v).fold(0.0, f64::max);
    let closed = rows
        .iter()
        .map(|&(n, l, _)| lebesgue_constant(n).map(|c| (c - l).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let lebesgue = cesaro_errors("cesaro_lebesgue", crate::kernels::CESARO_LIMIT)?;
    let var = cesaro_errors("cesaro_variation", VARIATION_CESARO_LIMIT)?;
    Ok(vec![
        Check::at_least(
            "lower_bound",
            format!("min over n <= {n_max} of ||D_n||_1 / (V(n)/8)"),
            lower,
            1.0,
        ),
        Check::at_most("upper_bound", format!("max over n <= {n_max} of ||D_n||_1 / V(n)"), upper, 1.0),
        Check::at_most(
            "closed_form",
            format!("closed-form Lebesgue constant equals the cell sum for n <= {n_max}"),
            closed,
            1e-10,
        ),
        Check::holds(
            "cesaro_lebesgue_monotone",
            "|(1/(n ln n)) sum_{k<=n} ||D_k||_1 - 1/(4 ln 2)| decreases over n = 2^10, 2^14, 2^18, 2^20",
            lebesgue.len() == CESARO_GRID.len() && strictly_decreasing(&lebesgue),
        ),
        Check::at_most(
            "cesaro_lebesgue_final",
            "|(1/(n ln n)) sum_{k<=n} ||D_k||_1 - 1/(4 ln 2)| at n = 2^20",
            lebesgue.last().copied().unwrap_or(f64::INFINITY),
            fixtures::CESARO_FINAL_ERROR,
        ),
        Check::holds(
            "cesaro_variation_monotone",
            "|(1/(n ln n)) sum_{k<=n} V(k) - 1/(2 ln 2)| decreases over n = 2^10, 2^14, 2^18, 2^20",
            var.len() == CESARO_GRID.len() && strictly_decreasing(&var),
        ),
    ])
}

fn lemma3(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = kernel_resolution(cfg);
    let n_max = cells(r - 1);
    let tables = KernelTables::build(r, n_max);
    let worst = |method| -> Result<f64> {
        (1..=n_max)
            .into_par_iter()
            .map(|n| Ok(max_diff(fejer_kernel(n, r, method)?.values(), &tables.fejer[n as usize])))
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
    };
    Ok(vec![
        Check::at_most(
            "set_bit_decomposition",
            format!("n K_n = sum over set bits of 2^b K_{{2^b}} and prefix-weighted D_{{2^b}}, n <= {n_max}"),
            worst(FejerMethod::Lemma3)?,
            1e-10,
        ),
        Check::at_most(
            "weighted_synthesis",
            format!("K_n = sum_{{k<n}} (1 - k/n) w_k for n <= {n_max}"),
            worst(FejerMethod::Weighted)?,
            1e-10,
        ),
    ])
}

fn lemma4(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = kernel_resolution(cfg);
    let tables = KernelTables::build(r, cells(r - 1));
    let mut worst: f64 = 0.0;
    for m in 0..r {
        let closed = fejer_pow2_closed(m, r)?;
        worst = worst.max(max_diff(closed.values(), &tables.fejer[cells(m) as usize]));
    }
    Ok(vec![Check::at_most(
        "dyadic_fejer_closed_form",
        format!("K_{{2^m}} = (2^m + 1)/2 on I_m, 2^{{t-1}} on I_m(e_t), 0 elsewhere, m < {r}"),
        worst,
        1e-10,
    )])
}

fn fejer_index_limit(cfg: &SuiteConfig) -> u64 {
    cells(cfg.resolution).min(1024)
}

fn lemma5(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n_max = fejer_index_limit(cfg);
    let mut worst: f64 = 0.0;
    for level in 1..=6u32.min(cfg.resolution - 1) {
        if cells(level) < n_max {
            worst = worst.max(local_fejer_integral_ratio(level, n_max, cfg.resolution)?);
        }
    }
    Ok(vec![Check::at_most(
        "local_integrals",
        format!(
            "max of ∫_{{I_M}} |K_n(x + t)| dμ(t) against 2^{{l+k}}/(n 2^M) and 2^k/2^M, M <= 6, n <= {n_max}"
        ),
        worst,
        fixtures::LOCAL_FEJER_RATIO,
    )])
}

fn lemma6(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n_max = fejer_index_limit(cfg);
    let worst = (1..=n_max)
        .into_par_iter()
        .map(|n| Ok(fejer_bounds(n, cfg.resolution)?.majorant_ratio))
        .try_reduce(|| 0.0, |a: f64, b| Ok(a.max(b)))?;
    Ok(vec![Check::at_most(
        "run_majorant",
        format!("max of n|K_n| over its run majorant, n <= {n_max}"),
        worst,
        fixtures::FEJER_MAJORANT_RATIO,
    )])
}

/// Minimum of `n|K_n(x)| / bound(l)` over runs and the cells of
/// `I_{l+1}(e_{l-1} + e_l)`, for `n <= n_max` at the given resolution.
pub fn run_lower_bound_minimum(n_max: u64, resolution: u32) -> Result<f64> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| Ok(fejer_bounds(n, resolution)?.lower_ratio.unwrap_or(f64::INFINITY)))
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))
}

fn lemma7(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n_max = fejer_index_limit(cfg);
    Ok(vec![Check::at_least(
        "run_lower_bound",
        format!("n|K_n(x)| >= 2^{{2l}}/16 on I_{{l+1}}(e_{{l-1}} + e_l) for every run l >= 1, n <= {n_max}"),
        run_lower_bound_minimum(n_max, cfg.resolution)?,
        1.0,
    )])
}

/// Extremes of `||f - S_{2^n} f||_p / ω_p(2^{-n}, f)` over `count` seeded
/// random functions at resolution `N` and `n < N`.
pub fn watari_extremes(p: f64, resolution: u32, count: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = seeded_rng(seed);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for _ in 0..count {
        let f = random_function(resolution, &mut rng)?;
        for n in 0..resolution {
            let omega = classical_modulus(&f, n, p)?;
            if omega > 0.0 {
                let r = lp_norm(&tail(&f, n)?, p)? / omega;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    Ok((lo, hi))
}

fn watari(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n = cfg.resolution.min(8);
    let mut checks = Vec::new();
    for p in [1.0, 2.0] {
        let (lo, hi) = watari_extremes(p, n, 100, cfg.seed)?;
        checks.push(Check::at_least(
            &format!("lower_p{p}"),
            format!("||f - S_{{2^n}} f||_{p} >= ω_{p}(2^{{-n}}, f)/2, 100 functions at N = {n}"),
            lo,
            0.5,
        ));
        checks.push(Check::at_most(
            &format!("upper_p{p}"),
            format!("||f - S_{{2^n}} f||_{p} <= ω_{p}(2^{{-n}}, f), 100 functions at N = {n}"),
            hi,
            1.0,
        ));
    }
    Ok(checks)
}

fn atoms(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = cfg.resolution.min(10);
    let mut rng = seeded_rng(cfg.seed);

    let mut haar_ok = true;
    for p in [0.5, 1.0] {
        for m in 0..r {
            let spec = AtomSpec::haar_pair(p, 1 << m)?;
            let a = crate::hardy::make_atom(&spec, r)?;
            haar_ok &= atom_check(&a, p, spec.support()).passed();
        }
    }
    let mut random_ok = true;
    for p in [0.25, 0.5, 1.0] {
        for _ in 0..100 {
            let (a, support) = random_atom(&mut rng, p, r)?;
            random_ok &= atom_check(&a, p, support).passed();
        }
    }

    let mut half: f64 = 0.0;
    for k in 0..=r {
        let d = crate::kernels::dirichlet_pow2(k, r)?;
        let want = (-(k as f64)).exp2();
        half = half.max((lp_norm(&d, 0.5)? - want).abs() / want);
    }

    let mut weak_gap: f64 = f64::NEG_INFINITY;
    for _ in 0..200 {
        let f = random_function(r, &mut rng)?;
        for p in [0.5, 1.0, 2.0] {
            weak_gap = weak_gap.max(weak_lp_norm(&f, p)? - lp_norm(&f, p)?);
        }
    }

    let mut atomic: f64 = 0.0;
    for p in [0.5, 1.0] {
        for _ in 0..200 {
            let count = rng.random_range(1..=8);
            let list: Vec<DyadicFunction> =
                (0..count).map(|_| random_atom(&mut rng, p, SAMPLED_RATIO_RESOLUTION).map(|a| a.0)).collect::<Result<_>>()?;
            let mus: Vec<f64> = (0..count).map(|_| rng.random_range(-1.0..1.0)).collect();
            atomic = atomic.max(atomic_ratio(&list, &mus, p)?);
        }
    }

    Ok(vec![
        Check::holds("haar_pairs", "2^{m(1/p-1)}(D_{2^{m+1}} - D_{2^m}) is a p-atom for p in {1/2, 1}", haar_ok),
        Check::holds("random_atoms", "sampled atoms have support, zero mean and sup-norm bound", random_ok),
        Check::at_most("dirichlet_half_norm", "||D_{2^k}||_{1/2} = 2^{-k} (relative error)", half, 1e-12),
        Check::at_most("weak_below_strong", "||f||_{weak-L_p} - ||f||_p over 200 functions", weak_gap, 0.0),
        Check::at_most(
            "atomic_upper",
            "||sum μ_k a_k||^p_{H_p} / sum |μ_k|^p over up to 8 atoms",
            atomic,
            fixtures::ATOMIC_RATIO,
        ),
    ])
}

fn example221(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = cfg.resolution.min(14);
    let mut rng = seeded_rng(cfg.seed);
    let mut spectrum_exact = true;
    let mut modulus: f64 = 0.0;
    for p in [0.5, 1.0] {
        for _ in 0..25 {
            let mart = random_example(&mut rng, p, r, 6)?;
            spectrum_exact &= analyze(&mart.function) == mart.spectrum;
            modulus = modulus.max(modulus_law_ratio(&mart)?);
        }
    }

    let n = 10.min(r);
    let schedule = LambdaSchedule::new(ScheduleKind::Thm411b, 0.5, Phi::Const);
    let alphas = [3u64, cells(n / 2) | 1, cells(n - 1) | 12];
    let mart = build_example_martingale(0.5, &alphas, &schedule, n)?;
    let law = (0..=cells(n))
        .into_par_iter()
        .map(|j| mart.partial_sum_law(j)?.max_abs_diff(&partial_sum(&mart.function, j)?))
        .try_reduce(|| 0.0, |a: f64, b| Ok(a.max(b)))?;

    Ok(vec![
        Check::holds(
            "spectrum_law",
            format!("f^(j) = λ_k 2^{{(1/p-1)|α_k|}} on [2^|α_k|, 2^{{|α_k|+1}}) exactly, 50 builds at N = {r}"),
            spectrum_exact,
        ),
        Check::at_most(
            "partial_sum_laws",
            format!("block laws for S_j f against spectral partial sums, 3 atoms, j <= 2^{n}"),
            law,
            1e-10,
        ),
        Check::at_most(
            "modulus_law",
            "ω_{H_p}(2^{-n}, f) / (sum_{|α_k| >= n} |λ_k|^p)^{1/p}",
            modulus,
            fixtures::MODULUS_LAW,
        ),
    ])
}

/// The weak-L_p divergence table along `family`, built from atoms on the
/// `{2^k + 1}` family.
pub fn dichotomy_table(
    p: f64,
    kind: OperatorKind,
    family: IndexFamily,
    resolution: u32,
) -> Result<crate::table::ExperimentTable> {
    let schedule = match kind {
        OperatorKind::PartialSum => ScheduleKind::Thm411b,
        OperatorKind::Fejer => ScheduleKind::Thm512b,
    };
    divergence_experiment(&DivergenceConfig {
        p,
        family,
        build_family: IndexFamily::Pow2Plus1,
        schedule: LambdaSchedule::new(schedule, p, Phi::Const),
        kind,
        norm: NormKind::WeakLp,
        resolution,
        k_min: 3,
    })
}

/// Bounded-family spreads and divergence monotonicity for one operator.
fn dichotomy_checks(p: f64, kind: OperatorKind, resolution: u32, spread_bound: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for family in [IndexFamily::Pow2, IndexFamily::Pow2PlusHalf] {
        let t = dichotomy_table(p, kind, family.clone(), resolution)?;
        let spread = spread_ratio(&t.values("value")).unwrap_or(f64::INFINITY);
        checks.push(Check::at_most(
            &format!("bounded_{}", family.name()),
            format!("max/min of ||{} f||_{{weak-L_{p:.4}}} along {}", kind.name(), family.name()),
            spread,
            spread_bound,
        ));
    }
    let t = dichotomy_table(p, kind, IndexFamily::Pow2Plus1, resolution)?;
    checks.push(Check::holds(
        "divergent_pow2_plus1",
        format!(
            "||{} f||_{{weak-L_{p:.4}}} strictly increases along 2^k + 1, k = 3..{}",
            kind.name(),
            resolution - 1
        ),
        strictly_increasing(&t.values("value")),
    ));
    Ok(checks)
}

fn upper_check(name: &str, p: f64, kind: OperatorKind, rate: &str, cfg: &SuiteConfig, bound: f64) -> Result<Check> {
    let r = SAMPLED_RATIO_RESOLUTION;
    let t = upper_bound_experiment(p, kind, r, 8, cfg.seed)?;
    let worst = t.values("ratio").into_iter().fold(0.0, f64::max);
    Ok(Check::at_most(
        name,
        format!(
            "||{} f||_{{H_{p:.4}}} / ({rate} ||f||_{{H_{p:.4}}}) for n <= 2^{}",
            kind.name(),
            r - 1
        ),
        worst,
        bound,
    ))
}

fn thm41(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut checks = dichotomy_checks(0.5, OperatorKind::PartialSum, cfg.resolution, fixtures::DICHOTOMY_PARTIAL_SPREAD)?;
    checks.push(upper_check(
        "rate_p1",
        1.0,
        OperatorKind::PartialSum,
        "V(n)",
        cfg,
        fixtures::UPPER_PARTIAL_P1,
    )?);
    checks.push(upper_check(
        "rate_p_half",
        0.5,
        OperatorKind::PartialSum,
        "2^{d(n)}",
        cfg,
        fixtures::UPPER_PARTIAL_HALF,
    )?);
    Ok(checks)
}

fn thm42(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = cfg.resolution;
    let mut worst: f64 = 0.0;
    let mut decay = 1.0;
    for (p, family, kind) in [
        (0.5, IndexFamily::Pow2, ScheduleKind::Thm422b),
        (0.5, IndexFamily::Pow2Plus1, ScheduleKind::Thm422b),
        (1.0, IndexFamily::Pow2Plus1, ScheduleKind::Thm423b),
    ] {
        let t = norm_convergence_experiment(
            p,
            &family,
            &LambdaSchedule::new(kind, p, Phi::Const),
            OperatorKind::PartialSum,
            NORM_RATIO_RESOLUTION,
            2,
        )?;
        worst = worst.max(t.values("ratio").into_iter().fold(0.0, f64::max));
        if kind == ScheduleKind::Thm423b {
            decay = t.values("error").last().copied().unwrap_or(f64::INFINITY);
        }
    }
    let w1 = walsh_function(1, r)?;
    let trivial = norm_convergence_table(1.0, &IndexFamily::Pow2, &w1, OperatorKind::PartialSum, 2)?;
    let trivial_max = trivial.values("error").into_iter().fold(0.0, f64::max);
    Ok(vec![
        Check::at_most(
            "modulus_inequality",
            "||S_m f - f||_{H_p} / (rate(m) ω_{H_p}(2^{-|m|}, f)) along 2^k and 2^k + 1",
            worst,
            fixtures::NORM_CONVERGENCE_PARTIAL,
        ),
        Check::at_most(
            "bounded_variation_convergence",
            "||S_m f - f||_{H_1} at the last 2^k + 1 row for λ_k = 1/V(α_k)",
            decay,
            1e-12,
        ),
        Check::at_most("resolved_function", "||S_{2^k} w_1 - w_1||_{H_1} for 2^k >= 4", trivial_max, 0.0),
    ])
}

/// `∫|σ_{α_k} f|^{1/2} / V^{1/2}(α_k)` along `{2^k + 2^{k-2} + ..}` with
/// `λ_k = 1/V(α_k)`.
pub fn run_growth_ratios(resolution: u32) -> Result<Vec<f64>> {
    let t = divergence_experiment(&DivergenceConfig {
        p: 0.5,
        family: IndexFamily::Alternating,
        build_family: IndexFamily::Alternating,
        schedule: LambdaSchedule::new(ScheduleKind::Thm511b, 0.5, Phi::Const),
        kind: OperatorKind::Fejer,
        norm: NormKind::Lp,
        resolution,
        k_min: 2,
    })?;
    Ok(t.column("value")
        .iter()
        .map(|&(m, v)| v.sqrt() / (variation(m) as f64).sqrt())
        .collect())
}

fn thm51(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut checks = dichotomy_checks(1.0 / 3.0, OperatorKind::Fejer, cfg.resolution, fixtures::DICHOTOMY_FEJER_SPREAD)?;
    checks.push(upper_check(
        "rate_p_half",
        0.5,
        OperatorKind::Fejer,
        "V^2(n)",
        cfg,
        fixtures::UPPER_FEJER_HALF,
    )?);
    checks.push(upper_check(
        "rate_p_third",
        1.0 / 3.0,
        OperatorKind::Fejer,
        "2^{d(n)}",
        cfg,
        fixtures::UPPER_FEJER_THIRD,
    )?);
    let growth = run_growth_ratios(cfg.resolution)?;
    checks.push(Check::at_least(
        "run_growth",
        "min of ∫|σ_{α_k} f|^{1/2} / V^{1/2}(α_k) along 2^k + 2^{k-2} + ..",
        growth.into_iter().fold(f64::INFINITY, f64::min),
        fixtures::RUN_GROWTH_MIN,
    ));
    Ok(checks)
}

fn thm52(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = cfg.resolution;
    let w0 = DyadicFunction::constant(r, 1.0)?;
    let s0 = analyze(&w0);
    let mut fixed: f64 = 0.0;
    for n in 1..=cells(r - 1).min(256) {
        fixed = fixed.max(crate::operators::fejer_mean_spectral(&s0, n)?.max_abs_diff(&w0)?);
    }

    let t = norm_convergence_experiment(
        0.5,
        &IndexFamily::Pow2,
        &LambdaSchedule::new(ScheduleKind::Thm521b, 0.5, Phi::Const),
        OperatorKind::Fejer,
        r,
        2,
    )?;
    let errors = t.values("error");
    let trend = match (errors.first(), errors.last()) {
        (Some(&first), Some(&last)) if first > 0.0 => last / first,
        _ => f64::INFINITY,
    };

    let mut rng = seeded_rng(cfg.seed);
    let mut identity: f64 = 0.0;
    for p in [0.5, 1.0] {
        let mart = random_example(&mut rng, p, r.min(10), 6)?;
        identity = identity.max(fejer_block_identity_error(&mart)?);
    }

    let floor = fejer_nonconvergence(1.0 / 3.0, r)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(f64::INFINITY, f64::min);

    Ok(vec![
        Check::at_most("constants_fixed", "σ_n w_0 = w_0", fixed, 1e-12),
        Check::at_most(
            "block_identity",
            "σ_n f = (2^m/n) σ_{2^m} f + ((n - 2^m)/n) S_{2^m} f + (c_m/n) w_{2^m} (n - 2^m) K_{n - 2^m}",
            identity,
            1e-9,
        ),
        Check::at_most(
            "dyadic_convergence",
            "||σ_{2^k} f - f||_{H_{1/2}} last row over first row, λ_k = V^{-2}(α_k)",
            trend,
            1.0,
        ),
        Check::at_least(
            "nonconvergence",
            "min_k ||σ_{α_k} f - f||_{weak-L_{1/3}} for λ_k = 2^{-d(α_k)} along 2^k + 1",
            floor,
            fixtures::FEJER_NONCONVERGENCE_FLOOR,
        ),
    ])
}

fn thm531(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let r = cfg.resolution.min(14);
    let n_max = cells(r - 1);
    let sources = strong_sum_sources(0.5, r, 6, 6, cfg.seed)?;
    let mut worst: f64 = 0.0;
    for f in &sources {
        let t = strong_sum_experiment(0.5, OperatorKind::Fejer, f, n_max)?;
        worst = worst.max(t.values("normalised_sum").into_iter().fold(0.0, f64::max));
    }

    let w0 = DyadicFunction::constant(r, 1.0)?;
    let t = strong_sum_experiment(0.5, OperatorKind::Fejer, &w0, n_max.min(256))?;
    let harmonic = t
        .column("normalised_sum")
        .iter()
        .map(|&(n, v)| (v - (1..=n).map(|m| 1.0 / m as f64).sum::<f64>() / (n as f64).ln()).abs())
        .fold(0.0, f64::max);

    let mut checks = vec![
        Check::at_most(
            "strong_sum_bounded",
            format!("(1/ln n) sum_{{m<=n}} ||σ_m f||^{{1/2}}_{{H_{{1/2}}}}/m over ||f||^{{1/2}}_{{H_{{1/2}}}}, n <= 2^{}", r - 1),
            worst,
            fixtures::STRONG_SUM_RATIO,
        ),
        Check::at_most("constant_source", "normalised sum for w_0 equals H_n / ln n", harmonic, 1e-12),
    ];
    for phi in [Phi::Const, Phi::Power { beta: 0.25 }] {
        let t = a02_block_experiment(0.5, phi, r)?;
        checks.push(Check::holds(
            &format!("a02_blocks_{}", phi.label()),
            format!(
                "block sums of ||σ_n f||^{{1/2}}_{{weak-L_{{1/2}}}}/Φ(n) over A_{{0,2}} increase, Φ = {}",
                phi.label()
            ),
            strictly_increasing(&t.values("block_sum")),
        ));
    }
    Ok(checks)
}

/// `(m, T(m))` for `m = 2..=m_max`.
pub fn block_strong_series(m_max: u32) -> Result<Vec<(u32, f64)>> {
    (2..=m_max).map(|m| Ok((m, block_strong_statistic(m)?))).collect()
}

fn thm532(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let m_atoms = 12.min(cfg.resolution - 1);
    let mut atom_norm: f64 = 0.0;
    for m in 0..=m_atoms {
        atom_norm = atom_norm.max(hp_norm(&half_atom(m, m + 1)?, 0.5)?);
    }
    let m_max = 10.min(cfg.resolution - 1);
    let series = block_strong_series(m_max)?;
    let growth = series
        .iter()
        .filter(|(m, _)| *m >= 4)
        .map(|&(m, t)| t / (m as f64).ln())
        .fold(f64::INFINITY, f64::min);
    let values: Vec<f64> = series.iter().map(|&(_, t)| t).collect();
    Ok(vec![
        Check::at_most(
            "atom_norm",
            format!("||2^m (D_{{2^{{m+1}}}} - D_{{2^m}})||_{{H_{{1/2}}}} for m <= {m_atoms}"),
            atom_norm,
            1.0,
        ),
        Check::at_least(
            "log_growth",
            format!("min over 4 <= m <= {m_max} of T(m) / ln m"),
            growth,
            fixtures::BLOCK_STRONG_C,
        ),
        Check::holds("monotone", format!("T(m) strictly increases for 2 <= m <= {m_max}"), strictly_increasing(&values)),
    ])
}
