//! Dirichlet and Fejér kernels, each by several independent routes, and
//! Lebesgue constants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::{cells, highest_bit, index_stats, variation, IntervalSpec};
use crate::error::{Error, Result};
use crate::table::ExperimentTable;
use crate::walsh::{synthesize, walsh_sign, DyadicFunction, SpectralVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirichletMethod {
    /// `sum_{i<n} w_i`.
    Direct,
    /// `w_n sum_k n_k (D_{2^{k+1}} - D_{2^k})`.
    Lemma1,
    /// `D_{j + 2^m} = D_{2^m} + w_{2^m} D_j` over the set bits, highest first.
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FejerMethod {
    /// `(1/n) sum_{k=1}^n D_k`.
    Direct,
    /// Synthesis of the coefficients `1 - k/n`, `k < n`.
    Weighted,
    /// Decomposition over the set bits into dyadic Fejér and Dirichlet kernels.
    Lemma3,
}

/// `1 / (4 ln 2)`.
pub const CESARO_LIMIT: f64 = 0.360_673_760_222_240_85;
/// `1 / (2 ln 2)`, the limit of `(1/(n ln n)) sum_{k<=n} V(k)`.
pub const VARIATION_CESARO_LIMIT: f64 = 0.721_347_520_444_481_7;

fn check_index(n: u64, resolution: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let limit = cells(resolution);
    if n > limit {
        return Err(Error::IndexOutOfRange { index: n, limit });
    }
    Ok(())
}

/// `D_{2^k}`: `2^k` on `I_k`, zero elsewhere.
pub fn dirichlet_pow2(k: u32, resolution: u32) -> Result<DyadicFunction> {
    if k > resolution {
        return Err(Error::LevelExceedsResolution { level: k, resolution });
    }
    let mask = cells(k) - 1;
    let height = cells(k) as f64;
    DyadicFunction::from_fn(resolution, |x| if x & mask == 0 { height } else { 0.0 })
}

pub fn dirichlet(n: u64, resolution: u32, method: DirichletMethod) -> Result<DyadicFunction> {
    check_index(n, resolution)?;
    match method {
        DirichletMethod::Direct => {
            DyadicFunction::from_fn(resolution, |x| (0..n).map(|i| walsh_sign(i, x)).sum())
        }
        DirichletMethod::Lemma1 => {
            let top = highest_bit(n)?;
            if top == resolution {
                return dirichlet_pow2(top, resolution);
            }
            DyadicFunction::from_fn(resolution, |x| {
                let mut acc = 0.0;
                for k in 0..=top {
                    if n >> k & 1 == 1 {
                        acc += pow2_kernel_at(k + 1, x) - pow2_kernel_at(k, x);
                    }
                }
                walsh_sign(n, x) * acc
            })
        }
        DirichletMethod::Recursive => {
            let mut out = DyadicFunction::zeros(resolution)?;
            let values = out.values_mut();
            let mut rest = n;
            let mut sign = vec![1.0f64; values.len()];
            while rest != 0 {
                let m = highest_bit(rest)?;
                let mask = cells(m) - 1;
                let height = cells(m) as f64;
                for (x, (v, s)) in values.iter_mut().zip(sign.iter_mut()).enumerate() {
                    if x as u64 & mask == 0 {
                        *v += *s * height;
                    }
                    if m < resolution {
                        *s *= walsh_sign(1 << m, x as u64);
                    }
                }
                rest -= 1 << m;
            }
            Ok(out)
        }
    }
}

#[inline]
fn pow2_kernel_at(k: u32, x: u64) -> f64 {
    if x & ((1u64 << k) - 1) == 0 {
        (1u64 << k) as f64
    } else {
        0.0
    }
}

/// `D_{2^n} - w_{2^n - 1} D_j`, the reflected kernel `D_{2^n - j}`.
pub fn dirichlet_reflection(n: u32, j: u64, resolution: u32) -> Result<DyadicFunction> {
    if n > resolution {
        return Err(Error::LevelExceedsResolution { level: n, resolution });
    }
    let top = cells(n);
    if j >= top {
        return Err(Error::IndexOutOfRange { index: j, limit: top });
    }
    let mut out = dirichlet_pow2(n, resolution)?;
    if j == 0 {
        return Ok(out);
    }
    let dj = dirichlet(j, resolution, DirichletMethod::Recursive)?;
    for (x, (v, d)) in out.values_mut().iter_mut().zip(dj.values()).enumerate() {
        *v -= walsh_sign(top - 1, x as u64) * d;
    }
    Ok(out)
}

/// Value of `K_{2^m}` at the point `x`.
#[inline]
pub fn fejer_pow2_at(m: u32, x: u64) -> f64 {
    let y = x & ((1u64 << m) - 1);
    if y == 0 {
        ((1u64 << m) as f64 + 1.0) / 2.0
    } else if y.is_power_of_two() {
        (y as f64) / 2.0
    } else {
        0.0
    }
}

/// `K_{2^m}` from its piecewise closed form: `2^{t-1}` on `I_m(e_t)` for
/// `t < m`, `(2^m + 1)/2` on `I_m`, zero elsewhere.
pub fn fejer_pow2_closed(m: u32, resolution: u32) -> Result<DyadicFunction> {
    if m > resolution {
        return Err(Error::LevelExceedsResolution { level: m, resolution });
    }
    DyadicFunction::from_fn(resolution, |x| fejer_pow2_at(m, x))
}

pub fn fejer_kernel(n: u64, resolution: u32, method: FejerMethod) -> Result<DyadicFunction> {
    check_index(n, resolution)?;
    match method {
        FejerMethod::Direct => {
            let size = cells(resolution) as usize;
            let mut d = vec![0.0f64; size];
            let mut acc = vec![0.0f64; size];
            for k in 1..=n {
                for (x, (dv, av)) in d.iter_mut().zip(acc.iter_mut()).enumerate() {
                    *dv += walsh_sign(k - 1, x as u64);
                    *av += *dv;
                }
            }
            let inv = 1.0 / n as f64;
            DyadicFunction::new(resolution, acc.into_iter().map(|v| v * inv).collect())
        }
        FejerMethod::Weighted => {
            let mut s = SpectralVector::zeros(resolution)?;
            let nf = n as f64;
            for (k, c) in s.coeffs_mut().iter_mut().take(n as usize).enumerate() {
                *c = (nf - k as f64) / nf;
            }
            Ok(synthesize(&s))
        }
        FejerMethod::Lemma3 => {
            let stats = index_stats(n)?;
            let bits = &stats.set_bits;
            let s = bits.len();
            let nf = n as f64;
            DyadicFunction::from_fn(resolution, |x| {
                let mut total = 0.0;
                // suffix[r] = prod_{j > r} w_{2^{n_j}}(x)
                let mut suffix = 1.0;
                for r in (0..s).rev() {
                    let b = bits[r];
                    total += suffix * cells(b) as f64 * fejer_pow2_at(b, x);
                    if r >= 1 {
                        total += suffix * stats.prefix_values[r] as f64 * pow2_kernel_at(b, x);
                    }
                    if b < resolution {
                        suffix *= walsh_sign(1 << b, x);
                    }
                }
                total / nf
            })
        }
    }
}

/// `L(n) = ||D_n||_1`, exact, in `O(log n)` operations.
///
/// On `I_j \ I_{j+1}` the kernel equals `w_n (n mod 2^j - n_j 2^j)` up to
/// sign, and on `I_{|n|+1}` it equals `n`.
pub fn lebesgue_constant(n: u64) -> Result<f64> {
    let top = highest_bit(n)?;
    let mut total = 0.0;
    for j in 0..=top {
        let low = (n & ((1u64 << j) - 1)) as f64;
        let bit = ((n >> j) & 1) as f64 * (1u64 << j) as f64;
        total += (low - bit).abs() * (-(j as f64) - 1.0).exp2();
    }
    Ok(total + n as f64 * (-(top as f64) - 1.0).exp2())
}

/// `||D_n||_1` by summing the materialised kernel at level `|n| + 1`.
pub fn lebesgue_constant_cells(n: u64) -> Result<f64> {
    let resolution = highest_bit(n)? + 1;
    let d = dirichlet(n, resolution, DirichletMethod::Recursive)?;
    Ok(d.abs().integral())
}

/// Cesàro averages of the variation and of the Lebesgue constants along a
/// doubling grid `16, 32, ..` up to `n_max` (and `n_max` itself).
///
/// Statistics per grid point: `cesaro_variation = (1/(n ln n)) sum V(k)`,
/// `cesaro_lebesgue = (1/(n ln n)) sum L(k)`, and the absolute deviations of
/// each from `1/(4 ln 2)`.
pub fn lebesgue_cesaro(n_max: u64) -> Result<ExperimentTable> {
    if n_max < 16 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least 16 (got {n_max})"
        )));
    }
    let mut grid: Vec<u64> = (4..64).map(|e| 1u64 << e).take_while(|&g| g <= n_max).collect();
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }

    let mut table = ExperimentTable::new("lebesgue_cesaro");
    let mut sum_v = 0u64;
    let mut sum_l = 0.0f64;
    let mut next = 0;
    for k in 1..=n_max {
        sum_v += variation(k) as u64;
        sum_l += lebesgue_constant(k)?;
        if k == grid[next] {
            let denom = k as f64 * (k as f64).ln();
            let cv = sum_v as f64 / denom;
            let cl = sum_l / denom;
            let row = next as u64;
            table.push(row, k, "cesaro_variation", cv);
            table.push(row, k, "cesaro_lebesgue", cl);
            table.push(row, k, "error_variation", (cv - CESARO_LIMIT).abs());
            table.push(row, k, "error_lebesgue", (cl - CESARO_LIMIT).abs());
            next += 1;
        }
    }
    table.note("limit", CESARO_LIMIT);
    Ok(table)
}

/// Summary of Dirichlet-kernel bounds at one index.
///
/// `lower_bound_ok` is `V(n)/8 <= l1_norm`, `upper_bound_ok` is
/// `l1_norm <= V(n)`, and `max_ratio` is the largest pointwise ratio of
/// `|n K_n|` to its run-wise majorant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub n: u64,
    pub l1_norm: f64,
    pub variation: u32,
    pub lower_bound_ok: bool,
    pub upper_bound_ok: bool,
    pub max_ratio: f64,
}

/// Fejér-kernel quantities at one index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FejerBounds {
    pub n: u64,
    /// `∫ |K_n| dμ`.
    pub fejer_l1: f64,
    /// `max_x |n K_n(x)| / majorant(x)` with the run-wise majorant.
    pub majorant_ratio: f64,
    /// Minimum over runs with `l_i >= 1` and cells of
    /// `I_{l_i+1}(e_{l_i-1} + e_{l_i})` of `n |K_n(x)| / bound(l_i)`, where
    /// `bound(l) = 2^{2l}/16` and `bound(1) = 7/8`.
    pub lower_ratio: Option<f64>,
}

/// The pointwise lower bound enforced on run `l` (`l >= 1`).
pub fn run_lower_bound(l: u32) -> f64 {
    let generic = (2.0 * l as f64).exp2() / 16.0;
    if l == 1 {
        generic.max(7.0 / 8.0)
    } else {
        generic
    }
}

pub fn fejer_bounds(n: u64, resolution: u32) -> Result<FejerBounds> {
    let k = fejer_kernel(n, resolution, FejerMethod::Weighted)?;
    let stats = index_stats(n)?;
    let nf = n as f64;
    let v = stats.variation as f64;

    let runs = stats.runs_descending();
    let mut majorant_ratio: f64 = 0.0;
    for (x, &kv) in k.values().iter().enumerate() {
        let x = x as u64;
        let mut rhs = v;
        for run in &runs {
            let (l, m) = (run.low, run.high);
            rhs += cells(l) as f64 * fejer_pow2_at(l, x).abs();
            rhs += cells(m) as f64 * fejer_pow2_at(m, x).abs();
            let dsum: f64 = (l..=m).map(|j| pow2_kernel_at(j, x)).sum();
            rhs += cells(l) as f64 * dsum;
        }
        majorant_ratio = majorant_ratio.max((nf * kv).abs() / rhs);
    }

    let mut lower_ratio: Option<f64> = None;
    for run in &stats.runs {
        let l = run.low;
        if l == 0 || l + 1 > resolution {
            continue;
        }
        let spec = IntervalSpec::ShiftEkEl { level: l + 1, k: l - 1, l };
        let bound = run_lower_bound(l);
        for x in spec.cells(resolution) {
            let r = nf * k.values()[x as usize].abs() / bound;
            lower_ratio = Some(lower_ratio.map_or(r, |m| m.min(r)));
        }
    }

    Ok(FejerBounds {
        n,
        fejer_l1: k.abs().integral(),
        majorant_ratio,
        lower_ratio,
    })
}

pub fn kernel_bounds_report(ns: &[u64], resolution: u32) -> Result<Vec<KernelReport>> {
    ns.par_iter()
        .map(|&n| {
            let l1 = lebesgue_constant(n)?;
            let v = variation(n);
            let fb = fejer_bounds(n, resolution)?;
            Ok(KernelReport {
                n,
                l1_norm: l1,
                variation: v,
                lower_bound_ok: v as f64 / 8.0 <= l1,
                upper_bound_ok: l1 <= v as f64,
                max_ratio: fb.majorant_ratio,
            })
        })
        .collect()
}

/// Largest normalised local integral `∫_{I_M} |K_n(x + t)| dμ(t)` over
/// `n in (2^M, n_max]`, taken against `2^{l+k}/(n 2^M)` for
/// `x in I_{l+1}(e_k + e_l)` and against `2^k / 2^M` for `x in I_M(e_k)`.
pub fn local_fejer_integral_ratio(level: u32, n_max: u64, resolution: u32) -> Result<f64> {
    if level > resolution {
        return Err(Error::LevelExceedsResolution { level, resolution });
    }
    let lo = cells(level) + 1;
    if n_max < lo {
        return Err(Error::EmptyIndexSet);
    }
    let ratios: Result<Vec<f64>> = (lo..=n_max)
        .into_par_iter()
        .map(|n| {
            let kn = fejer_kernel(n, resolution, FejerMethod::Weighted)?;
            let mask = cells(level) - 1;
            let mut local = vec![0.0f64; cells(level) as usize];
            let cell = kn.cell_measure();
            for (z, v) in kn.values().iter().enumerate() {
                local[(z as u64 & mask) as usize] += v.abs() * cell;
            }
            let scale = cells(level) as f64;
            let mut worst: f64 = 0.0;
            for l in 1..level {
                for k in 0..l.min(level - 1) {
                    let spec = IntervalSpec::ShiftEkEl { level: l + 1, k, l };
                    let bound = cells(l + k) as f64 / (n as f64 * scale);
                    for y in spec.cells(level) {
                        worst = worst.max(local[y as usize] / bound);
                    }
                }
            }
            for k in 0..level {
                let bound = cells(k) as f64 / scale;
                worst = worst.max(local[(1u64 << k) as usize] / bound);
            }
            Ok(worst)
        })
        .collect();
    Ok(ratios?.into_iter().fold(0.0, f64::max))
}
