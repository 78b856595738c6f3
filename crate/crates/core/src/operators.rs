//! Partial sums, Fejér means, conditional expectations, translations,
//! maximal operators and moduli of continuity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::cells;
use crate::error::{Error, Result};
use crate::hardy::{hp_norm, lp_norm};
use crate::walsh::{analyze, synthesize, DyadicFunction, SpectralVector};

/// Named index families `{m_k}` used for subsequences of partial sums and
/// Fejér means.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexFamily {
    /// `2^k`.
    Pow2,
    /// `2^k + 1`.
    Pow2Plus1,
    /// `2^k + 2^{k-1}`.
    Pow2PlusHalf,
    /// `2^k + 2^{k-2} + 2^{k-4} + ..`, so that `V(m_k)` grows linearly in `k`.
    Alternating,
    /// An explicit list; member `k` is the `k`-th entry.
    Custom(Vec<u64>),
}

impl IndexFamily {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "pow2" => Some(Self::Pow2),
            "pow2_plus1" => Some(Self::Pow2Plus1),
            "pow2_plus_half" => Some(Self::Pow2PlusHalf),
            "alternating" => Some(Self::Alternating),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pow2 => "pow2",
            Self::Pow2Plus1 => "pow2_plus1",
            Self::Pow2PlusHalf => "pow2_plus_half",
            Self::Alternating => "alternating",
            Self::Custom(_) => "custom",
        }
    }

    /// The `k`-th member, if defined.
    pub fn member(&self, k: u32) -> Option<u64> {
        if k >= 63 {
            return None;
        }
        match self {
            Self::Pow2 => Some(1 << k),
            Self::Pow2Plus1 => (k >= 1).then(|| (1u64 << k) + 1),
            Self::Pow2PlusHalf => (k >= 1).then(|| (1u64 << k) + (1u64 << (k - 1))),
            Self::Alternating => Some((0..=k / 2).map(|i| 1u64 << (k - 2 * i)).sum()),
            Self::Custom(list) => list.get(k as usize).copied(),
        }
    }
}

/// Index set for maximal operators and experiments: the members `k_min..=k_max`
/// of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub family: IndexFamily,
    pub k_min: u32,
    pub k_max: u32,
}

impl OperatorConfig {
    pub fn new(family: IndexFamily, k_min: u32, k_max: u32) -> Self {
        Self { family, k_min, k_max }
    }

    /// `{2^k : 0 <= k <= N}`, the index set of the martingale maximal function.
    pub fn pow2_levels(resolution: u32) -> Self {
        Self::new(IndexFamily::Pow2, 0, resolution)
    }

    pub fn explicit(indices: Vec<u64>) -> Self {
        let k_max = indices.len().saturating_sub(1) as u32;
        Self::new(IndexFamily::Custom(indices), 0, k_max)
    }

    /// `(k, m_k)` pairs in increasing `k`.
    pub fn members(&self) -> Vec<(u32, u64)> {
        if let IndexFamily::Custom(list) = &self.family {
            if list.is_empty() {
                return Vec::new();
            }
        }
        (self.k_min..=self.k_max)
            .filter_map(|k| self.family.member(k).map(|m| (k, m)))
            .collect()
    }

    pub fn indices(&self) -> Vec<u64> {
        self.members().into_iter().map(|(_, m)| m).collect()
    }

    pub fn validate(&self, resolution: u32) -> Result<Vec<(u32, u64)>> {
        let members = self.members();
        if members.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let limit = cells(resolution);
        if let Some(&(_, m)) = members.iter().find(|(_, m)| *m > limit) {
            return Err(Error::IndexOutOfRange { index: m, limit });
        }
        Ok(members)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    PartialSum,
    Fejer,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PartialSum => "partial_sum",
            Self::Fejer => "fejer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSpace {
    Lp,
    Hp,
}

fn check_upper(n: u64, resolution: u32) -> Result<()> {
    let limit = cells(resolution);
    if n > limit {
        return Err(Error::IndexOutOfRange { index: n, limit });
    }
    Ok(())
}

/// `S_n` applied to a spectrum.
pub fn partial_sum_spectral(s: &SpectralVector, n: u64) -> Result<DyadicFunction> {
    check_upper(n, s.resolution())?;
    let mut t = s.clone();
    for c in t.coeffs_mut().iter_mut().skip(n as usize) {
        *c = 0.0;
    }
    Ok(synthesize(&t))
}

/// `S_n f = sum_{i<n} f^(i) w_i`.
pub fn partial_sum(f: &DyadicFunction, n: u64) -> Result<DyadicFunction> {
    partial_sum_spectral(&analyze(f), n)
}

/// `σ_n` applied to a spectrum: coefficients weighted by `(n - k)/n`, `k < n`.
pub fn fejer_mean_spectral(s: &SpectralVector, n: u64) -> Result<DyadicFunction> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    check_upper(n, s.resolution())?;
    let mut t = s.clone();
    let nf = n as f64;
    for (k, c) in t.coeffs_mut().iter_mut().enumerate() {
        if (k as u64) < n {
            *c *= (nf - k as f64) / nf;
        } else {
            *c = 0.0;
        }
    }
    Ok(synthesize(&t))
}

/// `σ_n f = (1/n) sum_{k=1}^n S_k f`.
pub fn fejer_mean(f: &DyadicFunction, n: u64) -> Result<DyadicFunction> {
    fejer_mean_spectral(&analyze(f), n)
}

/// Cell averages at every level: entry `k` has `2^k` values, the averages
/// of `f` over the cells `I_k(r)`, `r < 2^k`.
pub fn cell_averages(f: &DyadicFunction) -> Vec<Vec<f64>> {
    let n = f.resolution() as usize;
    let mut levels = vec![Vec::new(); n + 1];
    levels[n] = f.values().to_vec();
    for k in (0..n).rev() {
        let finer = &levels[k + 1];
        let half = finer.len() / 2;
        let coarse: Vec<f64> = (0..half).map(|r| 0.5 * (finer[r] + finer[r + half])).collect();
        levels[k] = coarse;
    }
    levels
}

/// `E_n f`: the average of `f` over the level-`n` cell containing each point.
pub fn condexp(f: &DyadicFunction, n: u32) -> Result<DyadicFunction> {
    let resolution = f.resolution();
    if n > resolution {
        return Err(Error::LevelExceedsResolution { level: n, resolution });
    }
    let averages = &cell_averages(f)[n as usize];
    let mask = cells(n) - 1;
    DyadicFunction::from_fn(resolution, |j| averages[(j & mask) as usize])
}

/// `f* = max_{0<=k<=N} |E_k f|`, the martingale maximal function.
pub fn martingale_maximal(f: &DyadicFunction) -> DyadicFunction {
    let levels = cell_averages(f);
    let mut out = f.abs();
    for (k, avg) in levels.iter().enumerate() {
        let mask = cells(k as u32) - 1;
        for (j, v) in out.values_mut().iter_mut().enumerate() {
            *v = v.max(avg[j & mask as usize].abs());
        }
    }
    out
}

fn apply(kind: OperatorKind, s: &SpectralVector, n: u64) -> Result<DyadicFunction> {
    match kind {
        OperatorKind::PartialSum => partial_sum_spectral(s, n),
        OperatorKind::Fejer => fejer_mean_spectral(s, n),
    }
}

/// Pointwise maximum of `|T_m f|` over the index set, with `T` the partial
/// sum or Fejér mean.
pub fn maximal(f: &DyadicFunction, cfg: &OperatorConfig, kind: OperatorKind) -> Result<DyadicFunction> {
    let members = cfg.validate(f.resolution())?;
    let s = analyze(f);
    let zero = DyadicFunction::zeros(f.resolution())?;
    members
        .par_iter()
        .map(|&(_, m)| apply(kind, &s, m).map(|g| g.abs()))
        .try_reduce(|| zero.clone(), |a, b| a.zip_with(&b, f64::max))
}

/// `g(x) = f(x ⊕ h)`.
pub fn translate(f: &DyadicFunction, h: u64) -> Result<DyadicFunction> {
    let limit = cells(f.resolution());
    if h >= limit {
        return Err(Error::IndexOutOfRange { index: h, limit });
    }
    let v = f.values();
    DyadicFunction::from_fn(f.resolution(), |x| v[(x ^ h) as usize])
}

/// `f - S_{2^n} f`.
pub fn tail(f: &DyadicFunction, n: u32) -> Result<DyadicFunction> {
    f.sub(&condexp(f, n)?)
}

/// `||f - S_{2^n} f||` in `L_p` or in `H_p`.
pub fn modulus_continuity(f: &DyadicFunction, n: u32, p: f64, space: NormSpace) -> Result<f64> {
    crate::hardy::check_exponent(p)?;
    let g = tail(f, n)?;
    match space {
        NormSpace::Lp => lp_norm(&g, p),
        NormSpace::Hp => hp_norm(&g, p),
    }
}

/// `sup_{h in I_n} ||f(· ⊕ h) - f||_p`.
pub fn classical_modulus(f: &DyadicFunction, n: u32, p: f64) -> Result<f64> {
    crate::hardy::check_exponent(p)?;
    let resolution = f.resolution();
    if n > resolution {
        return Err(Error::LevelExceedsResolution { level: n, resolution });
    }
    let step = cells(n);
    let mut best: f64 = 0.0;
    let mut h = 0;
    while h < cells(resolution) {
        let diff = translate(f, h)?.sub(f)?;
        best = best.max(lp_norm(&diff, p)?);
        h += step;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{dirichlet, DirichletMethod};
    use crate::random::{random_function, seeded_rng};
    use crate::walsh::walsh_function;
    use proptest::prelude::*;

    fn rf(resolution: u32, seed: u64) -> DyadicFunction {
        random_function(resolution, &mut seeded_rng(seed)).unwrap()
    }

    #[test]
    fn family_members() {
        assert_eq!(IndexFamily::Pow2.member(5), Some(32));
        assert_eq!(IndexFamily::Pow2Plus1.member(5), Some(33));
        assert_eq!(IndexFamily::Pow2PlusHalf.member(5), Some(48));
        assert_eq!(IndexFamily::Alternating.member(5), Some(32 + 8 + 2));
        assert_eq!(IndexFamily::Alternating.member(4), Some(16 + 4 + 1));
        assert_eq!(IndexFamily::Pow2Plus1.member(0), None);
        let cfg = OperatorConfig::explicit(vec![3, 9]);
        assert_eq!(cfg.indices(), vec![3, 9]);
        assert!(OperatorConfig::explicit(vec![]).validate(4).is_err());
        assert!(OperatorConfig::explicit(vec![17]).validate(4).is_err());
    }

    #[test]
    fn partial_sums_of_characters() {
        for k in 0..16 {
            let w = walsh_function(k, 4).unwrap();
            for n in 0..=16 {
                let s = partial_sum(&w, n).unwrap();
                let expected = if k < n { w.clone() } else { w.scale(0.0) };
                assert!(s.max_abs_diff(&expected).unwrap() < 1e-14);
            }
        }
        let f = rf(6, 1);
        assert!(partial_sum(&f, 64).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        assert!(partial_sum(&f, 65).is_err());
    }

    #[test]
    fn partial_sum_is_convolution_with_dirichlet() {
        let f = rf(4, 2);
        let d5 = dirichlet(5, 4, DirichletMethod::Direct).unwrap();
        let conv = DyadicFunction::from_fn(4, |x| {
            (0..16u64).map(|t| f.values()[t as usize] * d5.values()[(x ^ t) as usize]).sum::<f64>()
                / 16.0
        })
        .unwrap();
        assert!(partial_sum(&f, 5).unwrap().max_abs_diff(&conv).unwrap() <= 1e-10);
    }

    #[test]
    fn fejer_mean_examples() {
        let w0 = walsh_function(0, 4).unwrap();
        for n in 1..=16 {
            assert!(fejer_mean(&w0, n).unwrap().max_abs_diff(&w0).unwrap() < 1e-14);
        }
        let w3 = walsh_function(3, 4).unwrap();
        let s = fejer_mean(&w3, 4).unwrap();
        assert!(s.max_abs_diff(&w3.scale(0.25)).unwrap() < 1e-14);

        let f = rf(5, 3);
        let mut avg = DyadicFunction::zeros(5).unwrap();
        for k in 1..=7 {
            avg.axpy(1.0 / 7.0, &partial_sum(&f, k).unwrap()).unwrap();
        }
        assert!(fejer_mean(&f, 7).unwrap().max_abs_diff(&avg).unwrap() <= 1e-12);
        assert_eq!(fejer_mean(&f, 0), Err(Error::ZeroIndex));
    }

    #[test]
    fn condexp_examples() {
        let f = rf(6, 4);
        assert!(condexp(&f, 6).unwrap().max_abs_diff(&f).unwrap() < 1e-15);
        let e0 = condexp(&f, 0).unwrap();
        let mean = f.integral();
        assert!(e0.values().iter().all(|v| (v - mean).abs() < 1e-14));
        let s4 = partial_sum(&f, 4).unwrap();
        assert!(condexp(&f, 2).unwrap().max_abs_diff(&s4).unwrap() < 1e-12);
        assert!(condexp(&f, 7).is_err());
    }

    #[test]
    fn maximal_examples() {
        let f = rf(5, 5);
        let single = maximal(&f, &OperatorConfig::explicit(vec![11]), OperatorKind::PartialSum).unwrap();
        assert!(single.max_abs_diff(&partial_sum(&f, 11).unwrap().abs()).unwrap() < 1e-15);

        let c = DyadicFunction::constant(5, 2.0).unwrap();
        let m = maximal(&c, &OperatorConfig::pow2_levels(5), OperatorKind::PartialSum).unwrap();
        assert!(m.max_abs_diff(&c).unwrap() < 1e-14);

        let w3 = walsh_function(3, 4).unwrap();
        let star = maximal(&w3, &OperatorConfig::pow2_levels(4), OperatorKind::PartialSum).unwrap();
        assert!(star.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(maximal(&w3, &OperatorConfig::explicit(vec![]), OperatorKind::Fejer).is_err());
    }

    #[test]
    fn martingale_maximal_matches_pow2_maximal() {
        for seed in 0..10 {
            let f = rf(7, seed);
            let a = martingale_maximal(&f);
            let b = maximal(&f, &OperatorConfig::pow2_levels(7), OperatorKind::PartialSum).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn translation() {
        let f = rf(5, 6);
        assert_eq!(translate(&f, 0).unwrap(), f);
        for h in 0..32 {
            let twice = translate(&translate(&f, h).unwrap(), h).unwrap();
            assert_eq!(twice, f);
        }
        for n in 0..32u64 {
            let w = walsh_function(n, 5).unwrap();
            for h in 0..32u64 {
                let sign = crate::walsh::walsh_sign(n, h);
                assert_eq!(translate(&w, h).unwrap(), w.scale(sign));
            }
        }
        assert!(translate(&f, 32).is_err());
    }

    #[test]
    fn modulus_edge_cases() {
        let f = rf(6, 7);
        for space in [NormSpace::Lp, NormSpace::Hp] {
            assert_eq!(modulus_continuity(&f, 6, 1.0, space).unwrap(), 0.0);
            let w = walsh_function(5, 6).unwrap();
            assert!(modulus_continuity(&w, 3, 0.5, space).unwrap() < 1e-14);
            assert!(modulus_continuity(&f, 2, 0.0, space).is_err());
        }
    }

    #[test]
    fn hp_tail_ignores_coarse_levels() {
        let f = rf(7, 8);
        let g = tail(&f, 3).unwrap();
        let levels = cell_averages(&g);
        for avg in levels.iter().take(4) {
            assert!(avg.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn watari_sandwich() {
        let mut rng = seeded_rng(9);
        for _ in 0..20 {
            let f = random_function(8, &mut rng).unwrap();
            for p in [1.0, 2.0] {
                for n in 0..=8 {
                    let omega = classical_modulus(&f, n, p).unwrap();
                    let t = modulus_continuity(&f, n, p, NormSpace::Lp).unwrap();
                    assert!(0.5 * omega <= t + 1e-12 && t <= omega + 1e-12);
                }
            }
        }
    }

    #[test]
    fn fejer_error_shrinks_to_zero_at_full_resolution() {
        let f = rf(8, 10);
        let errors: Vec<f64> = (0..=8)
            .map(|k| fejer_mean(&f, 1 << k).unwrap().max_abs_diff(&f).unwrap())
            .collect();
        assert!(errors[8] < errors[0]);
        assert!(partial_sum(&f, 256).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn partial_sum_is_projection(seed in any::<u64>(), n in 0u64..=128) {
            let f = rf(7, seed);
            let once = partial_sum(&f, n).unwrap();
            let twice = partial_sum(&once, n).unwrap();
            prop_assert!(once.max_abs_diff(&twice).unwrap() < 1e-12);
        }

        #[test]
        fn martingale_property(seed in any::<u64>(), a in 0u32..=7, b in 0u32..=7) {
            let f = rf(7, seed);
            let lhs = condexp(&condexp(&f, b).unwrap(), a).unwrap();
            let rhs = condexp(&f, a.min(b)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
            let spectral = partial_sum(&partial_sum(&f, 1 << b).unwrap(), 1 << a).unwrap();
            prop_assert!(spectral.max_abs_diff(&rhs).unwrap() < 1e-12);
        }

        #[test]
        fn partial_sum_hp_split(seed in any::<u64>(), n in 1u64..=256, half in any::<bool>()) {
            let p = if half { 0.5 } else { 1.0 };
            let f = rf(8, seed);
            let sn = partial_sum(&f, n).unwrap();
            let lhs = hp_norm(&sn, p).unwrap().powf(p);
            let smax = maximal(&f, &OperatorConfig::pow2_levels(8), OperatorKind::PartialSum).unwrap();
            let rhs = lp_norm(&smax, p).unwrap().powf(p) + lp_norm(&sn, p).unwrap().powf(p);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn fejer_hp_split(seed in any::<u64>(), n in 1u64..=256, half in any::<bool>()) {
            let p = if half { 0.5 } else { 1.0 };
            let f = rf(8, seed);
            let sigma = fejer_mean(&f, n).unwrap();
            let lhs = hp_norm(&sigma, p).unwrap().powf(p);
            let levels = OperatorConfig::pow2_levels(8);
            let fmax = maximal(&f, &levels, OperatorKind::Fejer).unwrap();
            let smax = maximal(&f, &levels, OperatorKind::PartialSum).unwrap();
            let rhs = lp_norm(&fmax, p).unwrap().powf(p)
                + lp_norm(&smax, p).unwrap().powf(p)
                + lp_norm(&sigma, p).unwrap().powf(p);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
