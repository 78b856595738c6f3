//! Martingales assembled from Haar-pair atoms under coefficient schedules,
//! and the growth-rate experiments run on them.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::{bit_spread, cells, highest_bit, in_a02, variation};
use crate::error::{Error, Result};
use crate::hardy::{check_exponent, haar_difference, hp_norm, lp_norm, lp_power, random_atom, weak_lp_norm};
use crate::kernels::{dirichlet, fejer_kernel, DirichletMethod, FejerMethod};
use crate::operators::{
    fejer_mean_spectral, modulus_continuity, partial_sum_spectral, IndexFamily, NormSpace, OperatorKind,
};
use crate::random::{random_function, seeded_rng, substream};
use crate::table::ExperimentTable;
use crate::walsh::{analyze, walsh_sign, DyadicFunction, SpectralVector};

/// Named non-decreasing growth functions `Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phi {
    Const,
    /// `n^beta`.
    Power { beta: f64 },
    /// `log^gamma(n + 2)`.
    LogPow { gamma: f64 },
}

impl Phi {
    pub fn eval(&self, n: u64) -> f64 {
        match *self {
            Phi::Const => 1.0,
            Phi::Power { beta } => (n as f64).powf(beta),
            Phi::LogPow { gamma } => ((n as f64) + 2.0).ln().powf(gamma),
        }
    }

    /// `const`, `power:<beta>` or `logpow:<gamma>`.
    pub fn parse(text: &str) -> Option<Self> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        match (head, arg) {
            ("const", None) => Some(Phi::Const),
            ("power", Some(a)) => a.parse().ok().map(|beta| Phi::Power { beta }),
            ("logpow", Some(a)) => a.parse().ok().map(|gamma| Phi::LogPow { gamma }),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Phi::Const => "const".into(),
            Phi::Power { beta } => format!("power:{beta}"),
            Phi::LogPow { gamma } => format!("logpow:{gamma}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `Φ^{1/2}(α) / 2^{d(α)(1/p-1)/2}`.
    Thm411b,
    /// `Φ^{1/2}(α) / V^{1/2}(α)`.
    Thm412b,
    /// `2^{-(1/p-1) d(α)}`.
    Thm422b,
    /// `1 / V(α)`.
    Thm423b,
    /// `Φ^{1/2}(α) / V(α)`.
    Thm511b,
    /// `Φ^{1/2}(α) / 2^{d(α)(1/p-2)/2}`.
    Thm512b,
    /// `V^{-2}(α)`.
    Thm521b,
    /// `2^{-(1/p-2) d(α)}`.
    Thm522b,
    /// `Φ^{1/(2p)}(2^{|α|+1}) / 2^{|α|(1/p-1)}`.
    Thm531b,
}

impl ScheduleKind {
    pub const ALL: [ScheduleKind; 9] = [
        ScheduleKind::Thm411b,
        ScheduleKind::Thm412b,
        ScheduleKind::Thm422b,
        ScheduleKind::Thm423b,
        ScheduleKind::Thm511b,
        ScheduleKind::Thm512b,
        ScheduleKind::Thm521b,
        ScheduleKind::Thm522b,
        ScheduleKind::Thm531b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Thm411b => "thm411b",
            ScheduleKind::Thm412b => "thm412b",
            ScheduleKind::Thm422b => "thm422b",
            ScheduleKind::Thm423b => "thm423b",
            ScheduleKind::Thm511b => "thm511b",
            ScheduleKind::Thm512b => "thm512b",
            ScheduleKind::Thm521b => "thm521b",
            ScheduleKind::Thm522b => "thm522b",
            ScheduleKind::Thm531b => "thm531b",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Subsequence-extraction rule applied when choosing `α_k` from a family.
    pub fn gap_rule(&self) -> GapRule {
        match self {
            ScheduleKind::Thm422b | ScheduleKind::Thm522b => GapRule::DoublingSpread,
            ScheduleKind::Thm423b | ScheduleKind::Thm521b => GapRule::SquaredVariation,
            _ => GapRule::DistinctLevels,
        }
    }
}

/// Greedy admission test for the next `α` after the previously kept one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRule {
    /// `|α_{k+1}| > |α_k|`.
    DistinctLevels,
    /// Distinct levels and `d(α_{k+1}) >= 2 d(α_k)`.
    DoublingSpread,
    /// Distinct levels and `V^2(α_k) <= V(α_{k+1})`.
    SquaredVariation,
}

impl GapRule {
    fn admits(&self, prev: u64, next: u64) -> Result<bool> {
        if highest_bit(next)? <= highest_bit(prev)? {
            return Ok(false);
        }
        Ok(match self {
            GapRule::DistinctLevels => true,
            GapRule::DoublingSpread => bit_spread(next)? >= 2 * bit_spread(prev)?,
            GapRule::SquaredVariation => {
                let v = variation(prev) as u64;
                v * v <= variation(next) as u64
            }
        })
    }
}

/// Default bound on `sum_k |λ_k|^p` accepted at build time.
pub const DEFAULT_SUMMABILITY_CAP: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub kind: ScheduleKind,
    pub p: f64,
    pub phi: Phi,
    pub cap: f64,
}

impl LambdaSchedule {
    pub fn new(kind: ScheduleKind, p: f64, phi: Phi) -> Self {
        Self {
            kind,
            p,
            phi,
            cap: DEFAULT_SUMMABILITY_CAP,
        }
    }

    pub fn label(&self) -> String {
        format!("{}[p={},phi={}]", self.kind.name(), self.p, self.phi.label())
    }

    pub fn lambda(&self, alpha: u64) -> Result<f64> {
        check_exponent(self.p)?;
        let p = self.p;
        let d = bit_spread(alpha)? as f64;
        let v = variation(alpha) as f64;
        let top = highest_bit(alpha)?;
        let phi = self.phi.eval(alpha);
        Ok(match self.kind {
            ScheduleKind::Thm411b => phi.sqrt() / (d * (1.0 / p - 1.0) / 2.0).exp2(),
            ScheduleKind::Thm412b => phi.sqrt() / v.sqrt(),
            ScheduleKind::Thm422b => (-(1.0 / p - 1.0) * d).exp2(),
            ScheduleKind::Thm423b => 1.0 / v,
            ScheduleKind::Thm511b => phi.sqrt() / v,
            ScheduleKind::Thm512b => phi.sqrt() / (d * (1.0 / p - 2.0) / 2.0).exp2(),
            ScheduleKind::Thm521b => 1.0 / (v * v),
            ScheduleKind::Thm522b => (-(1.0 / p - 2.0) * d).exp2(),
            ScheduleKind::Thm531b => {
                let phi_top = self.phi.eval(1u64 << (top + 1));
                phi_top.powf(1.0 / (2.0 * p)) / (top as f64 * (1.0 / p - 1.0)).exp2()
            }
        })
    }

    /// Greedy subsequence of `candidates` satisfying the schedule's gap rule.
    pub fn select(&self, candidates: &[u64]) -> Result<Vec<u64>> {
        let rule = self.kind.gap_rule();
        let mut out: Vec<u64> = Vec::new();
        for &c in candidates {
            if c == 0 {
                return Err(Error::ZeroIndex);
            }
            let keep = match out.last() {
                None => true,
                Some(&prev) => rule.admits(prev, c)?,
            };
            if keep {
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// `f = sum_k λ_k a_k` with Haar-pair atoms `a_k` of exponent `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleMartingale {
    pub p: f64,
    pub function: DyadicFunction,
    pub spectrum: SpectralVector,
    pub alphas: Vec<u64>,
    pub lambdas: Vec<f64>,
}

impl ExampleMartingale {
    pub fn resolution(&self) -> u32 {
        self.function.resolution()
    }

    pub fn levels(&self) -> Vec<u32> {
        self.alphas.iter().map(|&a| 63 - a.leading_zeros()).collect()
    }

    /// The common coefficient `λ_k 2^{(1/p-1)|α_k|}` on block `k`.
    pub fn block_coefficient(&self, k: usize) -> f64 {
        let m = self.levels()[k] as f64;
        self.lambdas[k] * (m * (1.0 / self.p - 1.0)).exp2()
    }

    /// `S_j f` assembled from the block structure: the completed blocks below
    /// `j`, plus `c_l w_{2^m} D_{j - 2^m}` when `j` falls inside block `l`.
    pub fn partial_sum_law(&self, j: u64) -> Result<DyadicFunction> {
        let resolution = self.resolution();
        let mut out = DyadicFunction::zeros(resolution)?;
        for (k, m) in self.levels().into_iter().enumerate() {
            let c = self.block_coefficient(k);
            let lo = 1u64 << m;
            if 2 * lo <= j {
                out.axpy(c, &haar_difference(m, resolution)?)?;
            } else if lo <= j {
                let r = j - lo;
                if r > 0 {
                    let d = dirichlet(r, resolution, DirichletMethod::Recursive)?;
                    let wd = DyadicFunction::from_fn(resolution, |x| walsh_sign(lo, x) * d.values()[x as usize])?;
                    out.axpy(c, &wd)?;
                }
            }
        }
        Ok(out)
    }
}

/// Builds `f = sum_k λ_k a_k` from the given `α_k` (strictly increasing
/// levels, all with `|α_k| + 1 <= N`). The returned spectrum is the block
/// law `f^(j) = λ_k 2^{(1/p-1)|α_k|}` on `[2^{|α_k|}, 2^{|α_k|+1})`.
pub fn build_example_martingale(
    p: f64,
    alphas: &[u64],
    schedule: &LambdaSchedule,
    resolution: u32,
) -> Result<ExampleMartingale> {
    check_exponent(p)?;
    let mut levels = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let m = highest_bit(a)?;
        if m + 1 > resolution {
            return Err(Error::LevelExceedsResolution { level: m + 1, resolution });
        }
        if levels.last().is_some_and(|&prev| m <= prev) {
            return Err(Error::InvalidParameter(format!(
                "alpha levels must strictly increase (|{a}| = {m})"
            )));
        }
        levels.push(m);
    }
    let lambdas = alphas.iter().map(|&a| schedule.lambda(a)).collect::<Result<Vec<f64>>>()?;
    let sum: f64 = lambdas.iter().map(|l| l.abs().powf(p)).sum();
    if sum > schedule.cap {
        return Err(Error::NotSummable { sum, cap: schedule.cap });
    }

    let mut function = DyadicFunction::zeros(resolution)?;
    let mut spectrum = SpectralVector::zeros(resolution)?;
    for (&m, &lambda) in levels.iter().zip(&lambdas) {
        let c = lambda * (m as f64 * (1.0 / p - 1.0)).exp2();
        function.axpy(c, &haar_difference(m, resolution)?)?;
        for v in &mut spectrum.coeffs_mut()[1 << m..1 << (m + 1)] {
            *v = c;
        }
    }
    Ok(ExampleMartingale {
        p,
        function,
        spectrum,
        alphas: alphas.to_vec(),
        lambdas,
    })
}

/// Members of `family` at levels `k_min..` that are resolvable as atoms at
/// resolution `N` (`|α| + 1 <= N`).
pub fn resolvable_members(family: &IndexFamily, k_min: u32, resolution: u32) -> Vec<u64> {
    (k_min..resolution)
        .filter_map(|k| family.member(k))
        .filter(|&m| m > 0 && highest_bit(m).is_ok_and(|t| t < resolution))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    WeakLp,
    Lp,
    Hp,
}

impl NormKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "weak_lp" | "weak" => Some(Self::WeakLp),
            "lp" => Some(Self::Lp),
            "hp" => Some(Self::Hp),
            _ => None,
        }
    }

    pub fn eval(&self, f: &DyadicFunction, p: f64) -> Result<f64> {
        match self {
            NormKind::WeakLp => weak_lp_norm(f, p),
            NormKind::Lp => lp_norm(f, p),
            NormKind::Hp => hp_norm(f, p),
        }
    }
}

/// Growth rate of `||T_n||_{H_p -> H_p}` (up to constants): `2^{d(n)(1/p-1)}`
/// or `V(n)` for partial sums, and `2^{d(n)(1/p-2)}`, `V^2(n)` or `1` for
/// Fejér means.
pub fn operator_rate(kind: OperatorKind, p: f64, n: u64) -> Result<f64> {
    let d = bit_spread(n)? as f64;
    let v = variation(n) as f64;
    Ok(match kind {
        OperatorKind::PartialSum if p < 1.0 => (d * (1.0 / p - 1.0)).exp2(),
        OperatorKind::PartialSum => v,
        OperatorKind::Fejer if p < 0.5 => (d * (1.0 / p - 2.0)).exp2(),
        OperatorKind::Fejer if p == 0.5 => v * v,
        OperatorKind::Fejer => 1.0,
    })
}

fn apply_spectral(kind: OperatorKind, s: &SpectralVector, n: u64) -> Result<DyadicFunction> {
    match kind {
        OperatorKind::PartialSum => partial_sum_spectral(s, n),
        OperatorKind::Fejer => fejer_mean_spectral(s, n),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceConfig {
    pub p: f64,
    /// Family along which the operator is evaluated.
    pub family: IndexFamily,
    /// Family from which the atoms `α_k` are drawn.
    pub build_family: IndexFamily,
    pub schedule: LambdaSchedule,
    pub kind: OperatorKind,
    pub norm: NormKind,
    pub resolution: u32,
    pub k_min: u32,
}

/// Rows `(k, m_k)` with `value = ||T_{m_k} f|| / Φ(m_k)` and
/// `rate = operator_rate(m_k) / Φ(m_k)`.
pub fn divergence_experiment(cfg: &DivergenceConfig) -> Result<ExperimentTable> {
    let n = cfg.resolution;
    let candidates = resolvable_members(&cfg.build_family, cfg.k_min, n);
    let alphas = cfg.schedule.select(&candidates)?;
    let mart = build_example_martingale(cfg.p, &alphas, &cfg.schedule, n)?;
    let rows: Vec<(u32, u64)> = (cfg.k_min..n)
        .filter_map(|k| cfg.family.member(k).map(|m| (k, m)))
        .filter(|&(_, m)| m >= 1 && m <= cells(n))
        .collect();

    let computed = rows
        .par_iter()
        .map(|&(k, m)| {
            let t = apply_spectral(cfg.kind, &mart.spectrum, m)?;
            let phi = cfg.schedule.phi.eval(m);
            let value = cfg.norm.eval(&t, cfg.p)? / phi;
            let rate = operator_rate(cfg.kind, cfg.p, m)? / phi;
            Ok((k, m, value, rate))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ExperimentTable::new("divergence");
    table.meta.p = Some(cfg.p);
    table.meta.resolution = Some(n);
    table.meta.schedule = Some(cfg.schedule.label());
    table.meta.truncation = Some(mart.alphas.len());
    table.note("family", cfg.family.name());
    table.note("build_family", cfg.build_family.name());
    table.note("operator", cfg.kind.name());
    table.note("norm", format!("{:?}", cfg.norm).to_lowercase());
    for (k, m, value, rate) in computed {
        table.push(k as u64, m, "value", value);
        table.push(k as u64, m, "rate", rate);
    }
    Ok(table)
}

/// Maximum over sampled `f` and `1 <= n <= 2^{N-1}` of
/// `||T_n f||_{H_p} / (rate(n) ||f||_{H_p})`, one row per `n`.
///
/// The sample consists of `w_0`, `samples` random p-atoms and `samples`
/// random functions drawn from `seed`.
pub fn upper_bound_experiment(
    p: f64,
    kind: OperatorKind,
    resolution: u32,
    samples: usize,
    seed: u64,
) -> Result<ExperimentTable> {
    check_exponent(p)?;
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut sources = vec![DyadicFunction::constant(resolution, 1.0)?];
    for _ in 0..samples {
        sources.push(random_atom(&mut rng, p, resolution)?.0);
        sources.push(random_function(resolution, &mut rng)?);
    }
    let prepared: Vec<(SpectralVector, f64)> = sources
        .iter()
        .map(|f| Ok((analyze(f), hp_norm(f, p)?)))
        .collect::<Result<_>>()?;

    let top = cells(resolution - 1);
    let rows = (1..=top)
        .into_par_iter()
        .map(|n| {
            let rate = operator_rate(kind, p, n)?;
            let mut worst: f64 = 0.0;
            for (s, norm) in &prepared {
                let t = apply_spectral(kind, s, n)?;
                worst = worst.max(hp_norm(&t, p)? / (rate * norm));
            }
            Ok((n, worst))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ExperimentTable::new("upper_bound");
    table.meta.p = Some(p);
    table.meta.resolution = Some(resolution);
    table.meta.seed = Some(seed);
    table.meta.truncation = Some(prepared.len());
    table.note("operator", kind.name());
    for (n, r) in rows {
        table.push(n, n, "ratio", r);
    }
    Ok(table)
}

/// Rows `(k, m_k)` with `error = ||T_{m_k} f - f||_{H_p}`,
/// `bound = rate(m_k) ω_{H_p}(2^{-|m_k|}, f)` and their ratio.
pub fn norm_convergence_experiment(
    p: f64,
    family: &IndexFamily,
    schedule: &LambdaSchedule,
    kind: OperatorKind,
    resolution: u32,
    k_min: u32,
) -> Result<ExperimentTable> {
    let candidates = resolvable_members(family, k_min, resolution);
    let alphas = schedule.select(&candidates)?;
    let mart = build_example_martingale(p, &alphas, schedule, resolution)?;
    let mut table = norm_convergence_table(p, family, &mart.function, kind, k_min)?;
    table.meta.schedule = Some(schedule.label());
    table.meta.truncation = Some(mart.alphas.len());
    Ok(table)
}

/// The convergence table for an arbitrary source function.
pub fn norm_convergence_table(
    p: f64,
    family: &IndexFamily,
    f: &DyadicFunction,
    kind: OperatorKind,
    k_min: u32,
) -> Result<ExperimentTable> {
    let resolution = f.resolution();
    let s = analyze(f);
    let rows: Vec<(u32, u64)> = (k_min..resolution)
        .filter_map(|k| family.member(k).map(|m| (k, m)))
        .filter(|&(_, m)| m >= 1 && m <= cells(resolution))
        .collect();
    let computed = rows
        .par_iter()
        .map(|&(k, m)| {
            let t = apply_spectral(kind, &s, m)?;
            let error = hp_norm(&t.sub(f)?, p)?;
            let omega = modulus_continuity(f, highest_bit(m)?, p, NormSpace::Hp)?;
            let bound = operator_rate(kind, p, m)? * omega;
            Ok((k, m, error, bound))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ExperimentTable::new("norm_convergence");
    table.meta.p = Some(p);
    table.meta.resolution = Some(resolution);
    table.note("family", family.name());
    table.note("operator", kind.name());
    for (k, m, error, bound) in computed {
        table.push(k as u64, m, "error", error);
        table.push(k as u64, m, "bound", bound);
        if bound > 0.0 {
            table.push(k as u64, m, "ratio", error / bound);
        }
    }
    Ok(table)
}

/// `||T_m f||_{H_p}^p` for `m = 1..=n_max`.
pub fn operator_hp_powers(f: &DyadicFunction, kind: OperatorKind, p: f64, n_max: u64) -> Result<Vec<f64>> {
    let s = analyze(f);
    (1..=n_max)
        .into_par_iter()
        .map(|m| Ok(hp_norm(&apply_spectral(kind, &s, m)?, p)?.powf(p)))
        .collect()
}

/// Normalised strong sums at `n = 2, 4, .., n_max`:
/// Fejér `(1/log^{[1/2+p]} n) sum_{m<=n} ||σ_m f||^p_{H_p} / m^{2-2p}` and
/// partial sums `(1/log^{[p]} n) sum_{k<=n} ||S_k f||^p_{H_p} / k^{2-p}`,
/// each divided by `||f||^p_{H_p}`.
pub fn strong_sum_experiment(
    p: f64,
    kind: OperatorKind,
    f: &DyadicFunction,
    n_max: u64,
) -> Result<ExperimentTable> {
    check_exponent(p)?;
    if n_max < 2 || n_max > cells(f.resolution()) {
        return Err(Error::InvalidParameter(format!(
            "n_max must lie in [2, 2^N] (got {n_max})"
        )));
    }
    let powers = operator_hp_powers(f, kind, p, n_max)?;
    let norm_p = hp_norm(f, p)?.powf(p);
    let (exponent, log_power) = match kind {
        OperatorKind::Fejer => (2.0 - 2.0 * p, (0.5 + p).floor()),
        OperatorKind::PartialSum => (2.0 - p, p.floor()),
    };

    let mut table = ExperimentTable::new("strong_sum");
    table.meta.p = Some(p);
    table.meta.resolution = Some(f.resolution());
    table.note("operator", kind.name());
    let mut acc = 0.0;
    let mut next = 2u64;
    let mut row = 0u64;
    for (i, &v) in powers.iter().enumerate() {
        let m = i as u64 + 1;
        acc += v / (m as f64).powf(exponent);
        if m == next || m == n_max {
            let normaliser = (m as f64).ln().powf(log_power);
            table.push(row, m, "normalised_sum", acc / normaliser / norm_p);
            row += 1;
            while next <= m {
                next *= 2;
            }
        }
    }
    Ok(table)
}

/// `f_m = 2^m (D_{2^{m+1}} - D_{2^m})`, the p = 1/2 Haar-pair atom.
pub fn half_atom(m: u32, resolution: u32) -> Result<DyadicFunction> {
    Ok(haar_difference(m, resolution)?.scale((m as f64).exp2()))
}

/// `T(m) = 2^{-(m+1)} sum_{2^m < k < 2^{m+1}} ∫ |σ_k f_m|^{1/2} dμ`, using
/// `|σ_{n + 2^m} f_m| = 2^m/(n + 2^m) |n K_n|` with `K_n` at level `m`.
pub fn block_strong_statistic(m: u32) -> Result<f64> {
    let lo = cells(m);
    let total: Result<Vec<f64>> = (1..lo)
        .into_par_iter()
        .map(|n| {
            let k = fejer_kernel(n, m, FejerMethod::Lemma3)?;
            let factor = lo as f64 / (n + lo) as f64 * n as f64;
            Ok(factor.sqrt() * lp_power(&k, 0.5))
        })
        .collect();
    Ok(total?.iter().sum::<f64>() / (2 * lo) as f64)
}

/// The same statistic computed literally from Fejér means of `f_m` at
/// resolution `m + 1`. Transform round-off below `1e-9` is flushed to zero
/// before taking square roots.
pub fn block_strong_statistic_literal(m: u32) -> Result<f64> {
    let f = half_atom(m, m + 1)?;
    let s = analyze(&f);
    let lo = cells(m);
    let mut total = 0.0;
    for k in lo + 1..2 * lo {
        let sigma = fejer_mean_spectral(&s, k)?.map(|v| if v.abs() < 1e-9 { 0.0 } else { v });
        total += lp_power(&sigma, 0.5);
    }
    Ok(total / (2 * lo) as f64)
}

pub fn block_strong_table(m_range: std::ops::RangeInclusive<u32>) -> Result<ExperimentTable> {
    let mut table = ExperimentTable::new("block_strong_sum");
    table.meta.p = Some(0.5);
    for m in m_range {
        let t = block_strong_statistic(m)?;
        table.push(m as u64, m as u64, "statistic", t);
        if m >= 2 {
            table.push(m as u64, m as u64, "per_log", t / (m as f64).ln());
        }
    }
    Ok(table)
}

/// Block sums `sum_{n in A_{0,2}, 2^k < n < 2^{k+1}} ||σ_n f||^p_{weak-L_p} / Φ(n)`
/// for the martingale with `α_k = 2^k + 5` under the `thm531b` schedule,
/// together with the number of indices per block and the reference growth
/// `2^{(1-p)(k+1)} / Φ^{1/2}(2^{k+1})`.
pub fn a02_block_experiment(p: f64, phi: Phi, resolution: u32) -> Result<ExperimentTable> {
    let schedule = LambdaSchedule::new(ScheduleKind::Thm531b, p, phi);
    let family = IndexFamily::Custom((0..resolution).map(|k| if k >= 3 { (1u64 << k) + 5 } else { 0 }).collect());
    let candidates: Vec<u64> = resolvable_members(&family, 3, resolution);
    let alphas = schedule.select(&candidates)?;
    let mart = build_example_martingale(p, &alphas, &schedule, resolution)?;

    let mut table = ExperimentTable::new("a02_blocks");
    table.meta.p = Some(p);
    table.meta.resolution = Some(resolution);
    table.meta.schedule = Some(schedule.label());
    table.meta.truncation = Some(mart.alphas.len());
    for level in mart.levels() {
        let lo = cells(level);
        let members: Vec<u64> = (lo + 1..2 * lo).filter(|&n| in_a02(n)).collect();
        let sum: f64 = members
            .par_iter()
            .map(|&n| {
                let sigma = fejer_mean_spectral(&mart.spectrum, n)?;
                Ok(weak_lp_norm(&sigma, p)?.powf(p) / phi.eval(n))
            })
            .collect::<Result<Vec<f64>>>()?
            .iter()
            .sum();
        let rate = ((1.0 - p) * (level as f64 + 1.0)).exp2() / phi.eval(2 * lo).sqrt();
        table.push(level as u64, lo, "count", members.len() as f64);
        table.push(level as u64, lo, "block_sum", sum);
        table.push(level as u64, lo, "rate", rate);
    }
    Ok(table)
}

/// `max_n ω_{H_p}(2^{-n}, f) / (sum_{|α_k| >= n} |λ_k|^p)^{1/p}` over the
/// levels `n` where the tail sum is positive.
pub fn modulus_law_ratio(mart: &ExampleMartingale) -> Result<f64> {
    let p = mart.p;
    let levels = mart.levels();
    let mut worst: f64 = 0.0;
    for n in 0..=mart.resolution() {
        let tail: f64 = levels
            .iter()
            .zip(&mart.lambdas)
            .filter(|(&m, _)| m >= n)
            .map(|(_, l)| l.abs().powf(p))
            .sum();
        if tail <= 0.0 {
            continue;
        }
        let omega = modulus_continuity(&mart.function, n, p, NormSpace::Hp)?;
        worst = worst.max(omega / tail.powf(1.0 / p));
    }
    Ok(worst)
}

/// Largest deviation over `2^m < n < 2^{m+1}` (all `m < N`) of `σ_n f` from
/// `(2^m/n) σ_{2^m} f + ((n - 2^m)/n) S_{2^m} f + (c_m/n) w_{2^m} (n - 2^m) K_{n - 2^m}`,
/// where `c_m` is the block coefficient on `[2^m, 2^{m+1})` (zero off the atoms).
pub fn fejer_block_identity_error(mart: &ExampleMartingale) -> Result<f64> {
    let resolution = mart.resolution();
    let levels = mart.levels();
    let coefficient = |m: u32| {
        levels
            .iter()
            .position(|&l| l == m)
            .map_or(0.0, |k| mart.block_coefficient(k))
    };
    let blocks: Vec<u32> = (1..resolution).collect();
    let per_block = blocks
        .par_iter()
        .map(|&m| {
            let lo = cells(m);
            let c = coefficient(m);
            let sigma_lo = fejer_mean_spectral(&mart.spectrum, lo)?;
            let s_lo = partial_sum_spectral(&mart.spectrum, lo)?;
            let mut worst: f64 = 0.0;
            for n in lo + 1..2 * lo {
                let r = n - lo;
                let nf = n as f64;
                let k = fejer_kernel(r, resolution, FejerMethod::Lemma3)?;
                let lhs = fejer_mean_spectral(&mart.spectrum, n)?;
                for (x, &v) in lhs.values().iter().enumerate() {
                    let rhs = lo as f64 / nf * sigma_lo.values()[x]
                        + r as f64 / nf * s_lo.values()[x]
                        + c / nf * walsh_sign(lo, x as u64) * r as f64 * k.values()[x];
                    worst = worst.max((v - rhs).abs());
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per_block.into_iter().fold(0.0, f64::max))
}

/// `(α_k, ||σ_{α_k} f - f||_{weak-L_p})` for the martingale with
/// `λ_k = 2^{-(1/p-2) d(α_k)}` built on `{2^k + 1}` (doubling-spread filter).
pub fn fejer_nonconvergence(p: f64, resolution: u32) -> Result<Vec<(u64, f64)>> {
    let schedule = LambdaSchedule::new(ScheduleKind::Thm522b, p, Phi::Const);
    let candidates = resolvable_members(&IndexFamily::Pow2Plus1, 1, resolution);
    let alphas = schedule.select(&candidates)?;
    let mart = build_example_martingale(p, &alphas, &schedule, resolution)?;
    mart.alphas
        .par_iter()
        .map(|&a| {
            let diff = fejer_mean_spectral(&mart.spectrum, a)?.sub(&mart.function)?;
            Ok((a, weak_lp_norm(&diff, p)?))
        })
        .collect()
}

/// Random Example-type martingale: up to `max_atoms` distinct levels below
/// `N`, random `α` at each level and a `thm422b` schedule.
pub fn random_example<R: Rng + ?Sized>(
    rng: &mut R,
    p: f64,
    resolution: u32,
    max_atoms: usize,
) -> Result<ExampleMartingale> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("need resolution >= 2".into()));
    }
    let count = rng.random_range(1..=max_atoms.min(resolution as usize - 1).max(1));
    let mut levels: Vec<u32> = Vec::new();
    while levels.len() < count {
        let m = rng.random_range(1..resolution);
        if !levels.contains(&m) {
            levels.push(m);
        }
    }
    levels.sort_unstable();
    let alphas: Vec<u64> = levels
        .iter()
        .map(|&m| (1u64 << m) | rng.random_range(0..(1u64 << m)))
        .collect();
    let mut schedule = LambdaSchedule::new(ScheduleKind::Thm422b, p, Phi::Const);
    schedule.cap = f64::INFINITY;
    build_example_martingale(p, &alphas, &schedule, resolution)
}

/// Seeds for the sample sources of the bounded strong-sum ratio.
pub fn strong_sum_sources(
    p: f64,
    resolution: u32,
    atoms: usize,
    builds: usize,
    seed: u64,
) -> Result<Vec<DyadicFunction>> {
    let mut out = Vec::new();
    for i in 0..atoms {
        let mut rng = seeded_rng(substream(seed, i as u64));
        out.push(random_atom(&mut rng, p, resolution)?.0);
    }
    for i in 0..builds {
        let mut rng = seeded_rng(substream(seed, (atoms + i) as u64));
        out.push(random_example(&mut rng, p, resolution, 6)?.function);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::hp_norm;
    use crate::operators::partial_sum;
    use crate::table::strictly_increasing;

    #[test]
    fn phi_family() {
        assert_eq!(Phi::Const.eval(100), 1.0);
        assert_eq!(Phi::Power { beta: 0.5 }.eval(16), 4.0);
        assert!((Phi::LogPow { gamma: 1.0 }.eval(0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(Phi::parse("power:0.5"), Some(Phi::Power { beta: 0.5 }));
        assert_eq!(Phi::parse("const"), Some(Phi::Const));
        assert_eq!(Phi::parse("logpow:2"), Some(Phi::LogPow { gamma: 2.0 }));
        assert_eq!(Phi::parse("power"), None);
        for phi in [Phi::Const, Phi::Power { beta: 0.3 }, Phi::LogPow { gamma: 1.5 }] {
            assert_eq!(Phi::parse(&phi.label()), Some(phi));
        }
    }

    #[test]
    fn schedule_formulas() {
        let alpha = 13; // d = 3, V = 4, |α| = 3
        let at = |kind, p, phi| LambdaSchedule::new(kind, p, phi).lambda(alpha).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * b.abs();
        assert!(close(at(ScheduleKind::Thm411b, 0.5, Phi::Const), (-1.5f64).exp2()));
        assert_eq!(at(ScheduleKind::Thm412b, 1.0, Phi::Power { beta: 1.0 }), (13.0f64 / 4.0).sqrt());
        assert_eq!(at(ScheduleKind::Thm422b, 0.5, Phi::Const), 0.125);
        assert_eq!(at(ScheduleKind::Thm423b, 1.0, Phi::Const), 0.25);
        assert_eq!(at(ScheduleKind::Thm511b, 0.5, Phi::Const), 0.25);
        assert!(close(at(ScheduleKind::Thm512b, 1.0 / 3.0, Phi::Const), (-1.5f64).exp2()));
        assert_eq!(at(ScheduleKind::Thm521b, 0.5, Phi::Const), 1.0 / 16.0);
        assert_eq!(at(ScheduleKind::Thm522b, 0.25, Phi::Const), 1.0 / 64.0);
        let t531 = at(ScheduleKind::Thm531b, 0.25, Phi::Power { beta: 0.5 });
        assert!((t531 - 16f64.powf(0.5 * 2.0) / 2f64.powf(9.0)).abs() < 1e-15);
        for k in ScheduleKind::ALL {
            assert_eq!(ScheduleKind::parse(k.name()), Some(k));
        }
    }

    #[test]
    fn gap_filters() {
        let s = LambdaSchedule::new(ScheduleKind::Thm422b, 0.5, Phi::Const);
        let picked = s.select(&[3, 5, 9, 17, 33, 65, 129, 257]).unwrap();
        let spreads: Vec<u32> = picked.iter().map(|&a| bit_spread(a).unwrap()).collect();
        assert!(spreads.windows(2).all(|w| w[1] >= 2 * w[0]));
        assert_eq!(picked, vec![3, 5, 17, 257]);

        let s = LambdaSchedule::new(ScheduleKind::Thm423b, 1.0, Phi::Const);
        let family: Vec<u64> = (1..12).filter_map(|k| IndexFamily::Alternating.member(k)).collect();
        let picked = s.select(&family).unwrap();
        for w in picked.windows(2) {
            let v = variation(w[0]);
            assert!(v * v <= variation(w[1]));
        }

        let s = LambdaSchedule::new(ScheduleKind::Thm411b, 0.5, Phi::Const);
        assert_eq!(s.select(&[4, 5, 8, 12, 16]).unwrap(), vec![4, 8, 16]);
    }

    #[test]
    fn single_atom_and_empty() {
        let s = LambdaSchedule::new(ScheduleKind::Thm411b, 0.5, Phi::Const);
        let mart = build_example_martingale(0.5, &[9], &s, 6).unwrap();
        let c = mart.block_coefficient(0);
        assert_eq!(c, mart.lambdas[0] * 8.0);
        for (j, &v) in analyze(&mart.function).coeffs().iter().enumerate() {
            assert_eq!(v, if (8..16).contains(&j) { c } else { 0.0 });
        }
        let empty = build_example_martingale(0.5, &[], &s, 6).unwrap();
        assert!(empty.function.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn build_rejections() {
        let s = LambdaSchedule::new(ScheduleKind::Thm411b, 0.5, Phi::Const);
        assert!(build_example_martingale(0.5, &[32], &s, 5).is_err());
        assert!(build_example_martingale(0.5, &[9, 12], &s, 6).is_err());
        let mut tight = s;
        tight.cap = 0.1;
        assert!(matches!(
            build_example_martingale(0.5, &[4, 8], &tight, 6),
            Err(Error::NotSummable { .. })
        ));
    }

    #[test]
    fn spectrum_law_is_exact_for_dyadic_lambdas() {
        let s = LambdaSchedule::new(ScheduleKind::Thm422b, 0.5, Phi::Const);
        for alphas in [vec![3u64, 9, 40], vec![2, 5, 17, 100, 300, 1500], vec![1, 4096 + 7]] {
            let mart = build_example_martingale(0.5, &alphas, &s, 14).unwrap();
            assert_eq!(analyze(&mart.function), mart.spectrum);
        }
    }

    #[test]
    fn partial_sum_laws() {
        let s = LambdaSchedule::new(ScheduleKind::Thm411b, 0.5, Phi::Const);
        let mart = build_example_martingale(0.5, &[5, 37, 300], &s, 10).unwrap();
        for j in 0..=1024u64 {
            let law = mart.partial_sum_law(j).unwrap();
            let generic = partial_sum(&mart.function, j).unwrap();
            assert!(law.max_abs_diff(&generic).unwrap() <= 1e-10, "j = {j}");
        }
    }

    #[test]
    fn upper_bound_trivial_source() {
        let t = upper_bound_experiment(1.0, OperatorKind::PartialSum, 4, 0, 1).unwrap();
        for v in t.values("ratio") {
            assert!(v <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn strong_sum_of_constant() {
        let f = DyadicFunction::constant(6, 1.0).unwrap();
        let t = strong_sum_experiment(0.5, OperatorKind::Fejer, &f, 64).unwrap();
        let vals = t.values("normalised_sum");
        for (&(n, v), expected) in t.column("normalised_sum").iter().zip(
            t.column("normalised_sum")
                .iter()
                .map(|&(n, _)| (1..=n).map(|m| 1.0 / m as f64).sum::<f64>() / (n as f64).ln()),
        ) {
            assert!((v - expected).abs() < 1e-12, "n = {n}");
        }
        assert!(vals.iter().all(|v| *v < 3.0));
    }

    #[test]
    fn half_atom_norm_is_at_most_one() {
        for m in 0..=10 {
            let f = half_atom(m, m + 2).unwrap();
            let h = hp_norm(&f, 0.5).unwrap();
            assert!(h <= 1.0 + 1e-12, "m = {m}: {h}");
        }
    }

    #[test]
    fn block_statistic_matches_literal() {
        for m in 1..=7 {
            let fast = block_strong_statistic(m).unwrap();
            let slow = block_strong_statistic_literal(m).unwrap();
            assert!((fast - slow).abs() <= 1e-10 * slow.max(1.0), "m = {m}");
        }
        let t = block_strong_table(2..=8).unwrap();
        assert!(strictly_increasing(&t.values("statistic")));
    }

    #[test]
    fn norm_convergence_trivial() {
        let f = crate::walsh::walsh_function(1, 8).unwrap();
        let t = norm_convergence_table(1.0, &IndexFamily::Pow2, &f, OperatorKind::PartialSum, 2).unwrap();
        assert!(t.values("error").iter().all(|&e| e == 0.0));
    }

    #[test]
    fn modulus_law_holds_with_unit_constant() {
        let mut rng = seeded_rng(31);
        for p in [0.5, 1.0] {
            for _ in 0..10 {
                let mart = random_example(&mut rng, p, 9, 6).unwrap();
                assert!(modulus_law_ratio(&mart).unwrap() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn fejer_block_identity_holds() {
        let mut rng = seeded_rng(5);
        for p in [0.5, 1.0] {
            let mart = random_example(&mut rng, p, 8, 4).unwrap();
            assert!(fejer_block_identity_error(&mart).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn rates() {
        assert_eq!(operator_rate(OperatorKind::PartialSum, 0.5, 33).unwrap(), 32.0);
        assert_eq!(operator_rate(OperatorKind::PartialSum, 1.0, 33).unwrap(), 4.0);
        assert_eq!(operator_rate(OperatorKind::Fejer, 0.5, 33).unwrap(), 16.0);
        assert_eq!(operator_rate(OperatorKind::Fejer, 0.25, 33).unwrap(), 1024.0);
        assert_eq!(operator_rate(OperatorKind::Fejer, 0.75, 33).unwrap(), 1.0);
    }
}
