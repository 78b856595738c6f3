//! Binary-expansion combinatorics of indices and dyadic interval geometry.
//!
//! Points of the dyadic group at resolution `N` are encoded as `u64` cell
//! indices whose bit `j` is the coordinate `x_j` (low bit = `x_0`). Group
//! addition is XOR. An interval `I_n(x)` is the set of cells agreeing with
//! `x` in the low `n` bits.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walsh::DyadicFunction;

/// Default cap on the resolution of any materialised function (2^20 cells).
pub const DEFAULT_MAX_RESOLUTION: u32 = 20;
/// Resolutions above this are never accepted, whatever the environment says.
pub const HARD_MAX_RESOLUTION: u32 = 26;
/// Environment variable overriding [`DEFAULT_MAX_RESOLUTION`].
pub const MAX_RESOLUTION_ENV: &str = "WALSH_HARDY_MAX_RESOLUTION";

/// Maximum resolution accepted by constructors, read once from
/// [`MAX_RESOLUTION_ENV`] and clamped to [`HARD_MAX_RESOLUTION`].
pub fn max_resolution() -> u32 {
    static MAX: OnceLock<u32> = OnceLock::new();
    *MAX.get_or_init(|| {
        std::env::var(MAX_RESOLUTION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(|v| v.min(HARD_MAX_RESOLUTION))
            .unwrap_or(DEFAULT_MAX_RESOLUTION)
    })
}

pub fn check_resolution(resolution: u32) -> Result<()> {
    let max = max_resolution();
    if resolution > max {
        return Err(Error::ResolutionTooLarge { resolution, max });
    }
    Ok(())
}

/// `|n|`: position of the highest set bit.
pub fn highest_bit(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(63 - n.leading_zeros())
}

/// `<n>`: position of the lowest set bit.
pub fn lowest_bit(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(n.trailing_zeros())
}

/// `d(n) = |n| - <n>`.
pub fn bit_spread(n: u64) -> Result<u32> {
    Ok(highest_bit(n)? - lowest_bit(n)?)
}

/// Variation `V(n) = n_0 + sum_{k>=1} |n_k - n_{k-1}|`, i.e. the number of
/// digit changes in the binary expansion read from below with an implicit
/// leading zero. `V(0) = 0`.
#[inline]
pub fn variation(n: u64) -> u32 {
    (n & 1) as u32 + (n ^ (n >> 1)).count_ones()
}

/// A maximal run of consecutive set bits `low..=high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub low: u32,
    pub high: u32,
}

impl Run {
    /// Value contributed by the run, `sum_{k=low}^{high} 2^k`.
    pub fn value(&self) -> u64 {
        let width = self.high - self.low + 1;
        let ones = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        ones << self.low
    }
}

/// Dyadic-run structure of a positive index together with the derived
/// statistics `|n|`, `<n>`, `d(n)` and `V(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub n: u64,
    pub abs: u32,
    pub low: u32,
    pub d: u32,
    pub variation: u32,
    /// Runs in ascending order; consecutive runs are separated by at least
    /// one clear bit, so `runs[i + 1].low >= runs[i].high + 2`.
    pub runs: Vec<Run>,
    /// Set bit positions, ascending.
    pub set_bits: Vec<u32>,
    /// `prefix_values[t] = sum_{j < t} 2^{set_bits[j]}`; in particular
    /// `prefix_values[0] = 0`.
    pub prefix_values: Vec<u64>,
    pub in_a02: bool,
}

impl BlockDecomposition {
    /// `n^{(i)}` for the 1-based set-bit index `i` (defined for `i >= 2`).
    pub fn prefix(&self, i: usize) -> Option<u64> {
        if i < 2 || i > self.set_bits.len() {
            return None;
        }
        Some(self.prefix_values[i - 1])
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// Runs highest first, as used by the pointwise Fejér kernel majorant.
    pub fn runs_descending(&self) -> Vec<Run> {
        self.runs.iter().rev().copied().collect()
    }

    pub fn reconstruct(&self) -> u64 {
        self.runs.iter().map(Run::value).sum()
    }
}

/// `n = 2^0 + 2^2 + (powers above 2)`.
#[inline]
pub fn in_a02(n: u64) -> bool {
    n & 0b111 == 0b101
}

pub fn index_stats(n: u64) -> Result<BlockDecomposition> {
    let abs = highest_bit(n)?;
    let low = lowest_bit(n)?;

    let mut runs = Vec::new();
    let mut rest = n;
    while rest != 0 {
        let start = rest.trailing_zeros();
        let len = (rest >> start).trailing_ones();
        let end = start + len - 1;
        runs.push(Run { low: start, high: end });
        rest &= !Run { low: start, high: end }.value();
    }

    let set_bits: Vec<u32> = (0..64).filter(|&k| n >> k & 1 == 1).collect();
    let mut prefix_values = Vec::with_capacity(set_bits.len());
    let mut acc = 0u64;
    for &b in &set_bits {
        prefix_values.push(acc);
        acc += 1u64 << b;
    }

    Ok(BlockDecomposition {
        n,
        abs,
        low,
        d: abs - low,
        variation: variation(n),
        runs,
        set_bits,
        prefix_values,
        in_a02: in_a02(n),
    })
}

/// Dyadic group addition (coordinatewise mod 2) of two points at resolution
/// `resolution`.
pub fn group_add(x: u64, y: u64, resolution: u32) -> Result<u64> {
    let limit = cells(resolution);
    for v in [x, y] {
        if v >= limit {
            return Err(Error::IndexOutOfRange { index: v, limit });
        }
    }
    Ok(x ^ y)
}

/// Number of cells `2^resolution`.
#[inline]
pub fn cells(resolution: u32) -> u64 {
    1u64 << resolution
}

/// A dyadic interval `I_n(x)` in one of the shapes used by kernel estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalSpec {
    /// `I_n = I_n(0)`.
    AtZero { level: u32 },
    /// `I_n(x)` for an arbitrary base point.
    AtPoint { level: u32, point: u64 },
    /// `I_n(e_k)`, `k < n`.
    ShiftEk { level: u32, k: u32 },
    /// `I_n(e_k + e_l)`, `k < l <= n`.
    ShiftEkEl { level: u32, k: u32, l: u32 },
}

impl IntervalSpec {
    pub fn level(&self) -> u32 {
        match *self {
            IntervalSpec::AtZero { level }
            | IntervalSpec::AtPoint { level, .. }
            | IntervalSpec::ShiftEk { level, .. }
            | IntervalSpec::ShiftEkEl { level, .. } => level,
        }
    }

    pub fn base_point(&self) -> u64 {
        match *self {
            IntervalSpec::AtZero { .. } => 0,
            IntervalSpec::AtPoint { point, .. } => point,
            IntervalSpec::ShiftEk { k, .. } => 1u64 << k,
            IntervalSpec::ShiftEkEl { k, l, .. } => (1u64 << k) | (1u64 << l),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            IntervalSpec::ShiftEk { level, k } if k >= level => Err(Error::InvalidInterval(
                format!("I_{level}(e_{k}) needs k < level"),
            )),
            IntervalSpec::ShiftEkEl { level, k, l } if !(k < l && l <= level) => {
                Err(Error::InvalidInterval(format!(
                    "I_{level}(e_{k}+e_{l}) needs k < l <= level"
                )))
            }
            IntervalSpec::AtZero { level }
            | IntervalSpec::AtPoint { level, .. }
            | IntervalSpec::ShiftEk { level, .. }
            | IntervalSpec::ShiftEkEl { level, .. }
                if level > 63 =>
            {
                Err(Error::InvalidInterval(format!("level {level} too large")))
            }
            _ => Ok(()),
        }
    }

    /// Low-bit mask selecting the coordinates fixed by the interval.
    #[inline]
    pub fn mask(&self) -> u64 {
        let level = self.level();
        if level >= 64 {
            u64::MAX
        } else {
            (1u64 << level) - 1
        }
    }

    #[inline]
    pub fn contains(&self, cell: u64) -> bool {
        let mask = self.mask();
        (cell & mask) == (self.base_point() & mask)
    }

    pub fn measure(&self) -> f64 {
        (-(self.level() as f64)).exp2()
    }

    /// Cells of the interval at the given resolution, ascending.
    pub fn cells(&self, resolution: u32) -> impl Iterator<Item = u64> {
        let level = self.level().min(resolution);
        let base = self.base_point() & ((1u64 << level) - 1);
        let step = 1u64 << level;
        let count = 1u64 << (resolution - level);
        (0..count).map(move |i| base + i * step)
    }
}

/// Indicator function of a dyadic interval at the given resolution.
pub fn interval_indicator(spec: IntervalSpec, resolution: u32) -> Result<DyadicFunction> {
    spec.validate()?;
    if spec.level() > resolution {
        return Err(Error::LevelExceedsResolution {
            level: spec.level(),
            resolution,
        });
    }
    DyadicFunction::from_fn(resolution, |j| if spec.contains(j) { 1.0 } else { 0.0 })
}

/// The pieces of the complement of `I_M`: every `I_{l+1}(e_k + e_l)` with
/// `0 <= k < l <= M - 1` followed by every `I_M(e_k)` with `k < M`.
pub fn complement_tiling(level: u32) -> Vec<IntervalSpec> {
    let mut out = Vec::new();
    for k in 0..level.saturating_sub(1) {
        for l in k + 1..level {
            out.push(IntervalSpec::ShiftEkEl { level: l + 1, k, l });
        }
    }
    for k in 0..level {
        out.push(IntervalSpec::ShiftEk { level, k });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variation_by_definition(n: u64) -> u32 {
        let bit = |k: u32| (n >> k & 1) as i64;
        let mut v = bit(0);
        for k in 1..64 {
            v += (bit(k) - bit(k - 1)).abs();
        }
        // the digit above bit 63 is an implicit zero
        v += bit(63);
        v as u32
    }

    #[test]
    fn single_bit_stats() {
        for m in 0..40 {
            let s = index_stats(1u64 << m).unwrap();
            assert_eq!(s.variation, 2);
            assert_eq!(s.d, 0);
            assert_eq!((s.abs, s.low), (m, m));
        }
    }

    #[test]
    fn pow2_plus_one_stats() {
        for m in 2..40 {
            let s = index_stats((1u64 << m) + 1).unwrap();
            assert_eq!(s.variation, 4);
            assert_eq!(s.d, m);
        }
    }

    #[test]
    fn thirteen_decomposes_by_hand() {
        let s = index_stats(13).unwrap();
        assert_eq!((s.abs, s.low, s.d), (3, 0, 3));
        assert_eq!(s.runs, vec![Run { low: 0, high: 0 }, Run { low: 2, high: 3 }]);
        assert!(s.in_a02);
        assert_eq!(s.prefix(2), Some(1));
        assert_eq!(s.prefix(3), Some(5));
        assert_eq!(s.prefix(1), None);
        assert_eq!(s.prefix(4), None);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(index_stats(0), Err(Error::ZeroIndex));
        assert_eq!(highest_bit(0), Err(Error::ZeroIndex));
        assert_eq!(lowest_bit(0), Err(Error::ZeroIndex));
    }

    #[test]
    fn runs_reconstruct_exhaustively() {
        for n in 1..=(1u64 << 20) {
            let s = index_stats(n).unwrap();
            assert_eq!(s.reconstruct(), n);
        }
    }

    #[test]
    fn variation_matches_definition_and_run_count() {
        for n in 1..=(1u64 << 16) {
            let s = index_stats(n).unwrap();
            assert_eq!(s.variation, variation_by_definition(n), "n = {n}");
            let runs = s.run_count() as u32;
            assert_eq!(s.variation, 2 * runs);
            assert!(runs <= s.variation && s.variation <= 2 * runs + 1);
            assert!(1u64 << s.abs <= n && (n >> s.abs) == 1);
            for w in s.runs.windows(2) {
                assert!(w[1].low >= w[0].high + 2);
            }
        }
        assert_eq!(variation(u64::MAX), variation_by_definition(u64::MAX));
    }

    #[test]
    fn a02_membership() {
        assert!(in_a02(5));
        assert!(in_a02(5 + 8));
        assert!(!in_a02(7));
        assert!(!in_a02(4));
        assert!(!in_a02(1));
    }

    #[test]
    fn group_add_examples() {
        assert_eq!(group_add(5, 3, 4).unwrap(), 6);
        assert_eq!(group_add(9, 0, 4).unwrap(), 9);
        assert_eq!(group_add(9, 9, 4).unwrap(), 0);
        assert!(group_add(16, 0, 4).is_err());
    }

    #[test]
    fn group_add_is_abelian_at_small_resolution() {
        let n = 6;
        let size = cells(n);
        for x in 0..size {
            for y in 0..size {
                let xy = group_add(x, y, n).unwrap();
                assert_eq!(xy, group_add(y, x, n).unwrap());
                for z in (0..size).step_by(7) {
                    let left = group_add(xy, z, n).unwrap();
                    let right = group_add(x, group_add(y, z, n).unwrap(), n).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn interval_measures() {
        let whole = interval_indicator(IntervalSpec::AtZero { level: 0 }, 6).unwrap();
        assert!(whole.values().iter().all(|&v| v == 1.0));
        for n in 0..=8 {
            let f = interval_indicator(IntervalSpec::AtZero { level: n }, 8).unwrap();
            assert_eq!(f.integral(), (-(n as f64)).exp2());
        }
        assert!(interval_indicator(IntervalSpec::AtZero { level: 9 }, 8).is_err());
        assert!(IntervalSpec::ShiftEk { level: 3, k: 3 }.validate().is_err());
        assert!(IntervalSpec::ShiftEkEl { level: 3, k: 2, l: 2 }.validate().is_err());
    }

    #[test]
    fn interval_cells_enumeration_matches_contains() {
        let spec = IntervalSpec::ShiftEkEl { level: 4, k: 1, l: 3 };
        let listed: Vec<u64> = spec.cells(7).collect();
        let filtered: Vec<u64> = (0..cells(7)).filter(|&j| spec.contains(j)).collect();
        assert_eq!(listed, filtered);
    }

    #[test]
    fn complement_tiling_is_exact() {
        for m in 0..=12u32 {
            let resolution = m.max(1);
            let pieces = complement_tiling(m);
            let mut cover = vec![0u32; cells(resolution) as usize];
            let mut measure = 0.0;
            for p in &pieces {
                p.validate().unwrap();
                measure += p.measure();
                for j in p.cells(resolution) {
                    cover[j as usize] += 1;
                }
            }
            let inside = IntervalSpec::AtZero { level: m };
            for (j, &c) in cover.iter().enumerate() {
                let expected = u32::from(!inside.contains(j as u64));
                assert_eq!(c, expected, "M = {m}, cell {j}");
            }
            assert_eq!(measure, 1.0 - (-(m as f64)).exp2());
        }
    }
}
