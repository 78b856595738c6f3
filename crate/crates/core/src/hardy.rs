//! `L_p`, weak-`L_p` and martingale `H_p` quasi-norms at finite resolution,
//! and p-atoms.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::{cells, highest_bit, IntervalSpec};
use crate::error::{Error, Result};
use crate::kernels::dirichlet_pow2;
use crate::operators::{martingale_maximal, translate};
use crate::walsh::DyadicFunction;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `(∫ |f|^p dμ)^{1/p}`.
pub fn lp_norm(f: &DyadicFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_power(f, p).powf(1.0 / p))
}

/// `∫ |f|^p dμ`.
pub fn lp_power(f: &DyadicFunction, p: f64) -> f64 {
    let sum: f64 = if p == 1.0 {
        f.values().iter().map(|v| v.abs()).sum()
    } else if p == 0.5 {
        f.values().iter().map(|v| v.abs().sqrt()).sum()
    } else {
        f.values().iter().map(|v| v.abs().powf(p)).sum()
    };
    sum * f.cell_measure()
}

/// `sup_{λ>0} λ μ(|f| > λ)^{1/p}`, computed as the finite maximum over the
/// realised values `v` of `|f|` of `v μ(|f| >= v)^{1/p}`.
pub fn weak_lp_norm(f: &DyadicFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mut mags: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let cell = f.cell_measure();
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < mags.len() {
        let v = mags[i];
        if v == 0.0 {
            break;
        }
        let mut j = i;
        while j < mags.len() && mags[j] == v {
            j += 1;
        }
        best = best.max(v * (j as f64 * cell).powf(1.0 / p));
        i = j;
    }
    Ok(best)
}

/// `||f*||_p` with `f*` the martingale maximal function.
pub fn hp_norm(f: &DyadicFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    lp_norm(&martingale_maximal(f), p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomPayload {
    /// `2^{m(1/p-1)} (D_{2^{m+1}} - D_{2^m})` with `m = |alpha|`.
    HaarPair { alpha: u64 },
    /// Cell values at the target resolution.
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub p: f64,
    pub support_level: u32,
    pub base_point: u64,
    pub payload: AtomPayload,
}

impl AtomSpec {
    /// The Haar-pair atom of `alpha`, supported on `I_{|alpha|}`.
    pub fn haar_pair(p: f64, alpha: u64) -> Result<Self> {
        Ok(Self {
            p,
            support_level: highest_bit(alpha)?,
            base_point: 0,
            payload: AtomPayload::HaarPair { alpha },
        })
    }

    pub fn support(&self) -> IntervalSpec {
        IntervalSpec::AtPoint {
            level: self.support_level,
            point: self.base_point & (cells(self.support_level) - 1),
        }
    }
}

/// `D_{2^{m+1}} - D_{2^m}`: `2^m` on `I_{m+1}`, `-2^m` on `I_{m+1}(e_m)`.
pub fn haar_difference(m: u32, resolution: u32) -> Result<DyadicFunction> {
    dirichlet_pow2(m + 1, resolution)?.sub(&dirichlet_pow2(m, resolution)?)
}

pub fn make_atom(spec: &AtomSpec, resolution: u32) -> Result<DyadicFunction> {
    check_exponent(spec.p)?;
    if spec.support_level > resolution {
        return Err(Error::LevelExceedsResolution {
            level: spec.support_level,
            resolution,
        });
    }
    let atom = match &spec.payload {
        AtomPayload::HaarPair { alpha } => {
            let m = highest_bit(*alpha)?;
            if m + 1 > resolution {
                return Err(Error::LevelExceedsResolution { level: m + 1, resolution });
            }
            if m != spec.support_level {
                return Err(Error::InvalidParameter(format!(
                    "Haar-pair atom of |alpha| = {m} lives on level {m}, not {}",
                    spec.support_level
                )));
            }
            let scale = (m as f64 * (1.0 / spec.p - 1.0)).exp2();
            haar_difference(m, resolution)?.scale(scale)
        }
        AtomPayload::Explicit { values } => DyadicFunction::new(resolution, values.clone())?,
    };
    let shift = spec.base_point & (cells(spec.support_level) - 1);
    if shift == 0 {
        Ok(atom)
    } else {
        translate(&atom, shift)
    }
}

/// Outcome of checking the three p-atom conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub support_ok: bool,
    pub mean_zero_ok: bool,
    pub sup_norm_ok: bool,
    pub mean: f64,
    pub sup_norm: f64,
    pub sup_bound: f64,
}

impl AtomReport {
    pub fn passed(&self) -> bool {
        self.support_ok && self.mean_zero_ok && self.sup_norm_ok
    }
}

pub fn atom_check(a: &DyadicFunction, p: f64, support: IntervalSpec) -> AtomReport {
    let support_ok = support.level() <= a.resolution()
        && a
            .values()
            .iter()
            .enumerate()
            .all(|(j, &v)| v == 0.0 || support.contains(j as u64));
    let mean = a.integral();
    let sup_norm = a.sup_norm();
    let sup_bound = (support.level() as f64 / p).exp2();
    AtomReport {
        support_ok,
        mean_zero_ok: mean.abs() <= 1e-12,
        sup_norm_ok: sup_norm <= sup_bound * (1.0 + 1e-12),
        mean,
        sup_norm,
        sup_bound,
    }
}

/// A random p-atom at resolution `N >= 1`: random support `I_M(x)` with
/// `M < N` and values antisymmetric under flipping a random free coordinate,
/// so the mean vanishes exactly. Values are integers times a power of two,
/// with sup-norm between half and all of `μ(I)^{-1/p}`.
pub fn random_atom<R: Rng + ?Sized>(
    rng: &mut R,
    p: f64,
    resolution: u32,
) -> Result<(DyadicFunction, IntervalSpec)> {
    check_exponent(p)?;
    if resolution == 0 {
        return Err(Error::InvalidParameter("random atoms need resolution >= 1".into()));
    }
    let level = rng.random_range(0..resolution);
    let point = rng.random_range(0..cells(level));
    let support = IntervalSpec::AtPoint { level, point };
    let flip = 1u64 << rng.random_range(level..resolution);

    let mut ints = vec![0i64; cells(resolution) as usize];
    for j in support.cells(resolution) {
        if j & flip == 0 {
            let v = rng.random_range(-1024..=1024);
            ints[j as usize] = v;
            ints[(j | flip) as usize] = -v;
        }
    }
    let top = ints.iter().map(|v| v.abs()).max().unwrap_or(0).max(1) as f64;
    let bound = (level as f64 / p).exp2();
    let scale = (bound / top).log2().floor().exp2();
    let values = ints.into_iter().map(|v| v as f64 * scale).collect();
    Ok((DyadicFunction::new(resolution, values)?, support))
}

/// `||sum_k mu_k a_k||_{H_p}^p / sum_k |mu_k|^p`.
pub fn atomic_ratio(atoms: &[DyadicFunction], mus: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let first = atoms.first().ok_or(Error::EmptyIndexSet)?;
    let mut f = DyadicFunction::zeros(first.resolution())?;
    for (a, &mu) in atoms.iter().zip(mus) {
        f.axpy(mu, a)?;
    }
    let denom: f64 = mus.iter().map(|m| m.abs().powf(p)).sum();
    Ok(hp_norm(&f, p)?.powf(p) / denom)
}
