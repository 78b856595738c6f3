//! Walsh–Paley characters, step functions at finite resolution and the fast
//! Walsh–Hadamard transform between cell values and Walsh–Fourier
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::dyadic::{cells, check_resolution};
use crate::error::{Error, Result};

/// A real step function on the dyadic group, constant on the `2^N` cells of
/// level `N`. Each cell carries Haar measure `2^{-N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicFunction {
    resolution: u32,
    values: Vec<f64>,
}

/// Walsh–Fourier coefficients `f^(0..2^N)` in Paley order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralVector {
    resolution: u32,
    coeffs: Vec<f64>,
}

fn check_length(len: usize, resolution: u32) -> Result<()> {
    check_resolution(resolution)?;
    if len as u64 != cells(resolution) {
        return Err(Error::BadLength { len, resolution });
    }
    Ok(())
}

fn check_same(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::ResolutionMismatch { left: a, right: b });
    }
    Ok(())
}

impl DyadicFunction {
    pub fn new(resolution: u32, values: Vec<f64>) -> Result<Self> {
        check_length(values.len(), resolution)?;
        Ok(Self { resolution, values })
    }

    pub fn zeros(resolution: u32) -> Result<Self> {
        Self::constant(resolution, 0.0)
    }

    pub fn constant(resolution: u32, c: f64) -> Result<Self> {
        check_resolution(resolution)?;
        Ok(Self {
            resolution,
            values: vec![c; cells(resolution) as usize],
        })
    }

    pub fn from_fn(resolution: u32, f: impl FnMut(u64) -> f64) -> Result<Self> {
        check_resolution(resolution)?;
        let values = (0..cells(resolution)).map(f).collect();
        Ok(Self { resolution, values })
    }

    #[inline]
    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Haar measure of one cell.
    #[inline]
    pub fn cell_measure(&self) -> f64 {
        (-(self.resolution as f64)).exp2()
    }

    /// `∫ f dμ`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            resolution: self.resolution,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same(self.resolution, other.resolution)?;
        Ok(Self {
            resolution: self.resolution,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &Self) -> Result<()> {
        check_same(self.resolution, other.resolution)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same(self.resolution, other.resolution)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Re-samples the function on a finer grid; `resolution` must not be
    /// smaller than the current one.
    pub fn refine(&self, resolution: u32) -> Result<Self> {
        if resolution < self.resolution {
            return Err(Error::LevelExceedsResolution {
                level: self.resolution,
                resolution,
            });
        }
        let mask = cells(self.resolution) - 1;
        Self::from_fn(resolution, |j| self.values[(j & mask) as usize])
    }
}

impl SpectralVector {
    pub fn new(resolution: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_length(coeffs.len(), resolution)?;
        Ok(Self { resolution, coeffs })
    }

    pub fn zeros(resolution: u32) -> Result<Self> {
        check_resolution(resolution)?;
        Ok(Self {
            resolution,
            coeffs: vec![0.0; cells(resolution) as usize],
        })
    }

    /// The spectrum with a single unit coefficient at `k`.
    pub fn unit(resolution: u32, k: u64) -> Result<Self> {
        let mut s = Self::zeros(resolution)?;
        let limit = cells(resolution);
        if k >= limit {
            return Err(Error::IndexOutOfRange { index: k, limit });
        }
        s.coeffs[k as usize] = 1.0;
        Ok(s)
    }

    #[inline]
    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same(self.resolution, other.resolution)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// `(-1)^{popcount(n & x)}` without range checks.
#[inline(always)]
pub fn walsh_sign(n: u64, x: u64) -> f64 {
    if (n & x).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Value of `w_n` at the point `x`: the product of the Rademacher functions
/// selected by the bits of `n`.
pub fn walsh_eval(n: u64, x: u64, resolution: u32) -> Result<i8> {
    let limit = cells(resolution);
    for v in [n, x] {
        if v >= limit {
            return Err(Error::IndexOutOfRange { index: v, limit });
        }
    }
    Ok(walsh_sign(n, x) as i8)
}

/// The character `w_n` sampled at resolution `N`.
pub fn walsh_function(n: u64, resolution: u32) -> Result<DyadicFunction> {
    let limit = cells(resolution);
    if n >= limit {
        return Err(Error::IndexOutOfRange { index: n, limit });
    }
    DyadicFunction::from_fn(resolution, |x| walsh_sign(n, x))
}

/// In-place unnormalised Walsh–Hadamard butterfly. Natural (Hadamard)
/// ordering coincides with Paley ordering under the low-bit-first point
/// encoding. `data.len()` must be a power of two.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

/// `f^(k) = ∫ f w_k dμ` for every `k < 2^N`.
pub fn analyze(f: &DyadicFunction) -> SpectralVector {
    let mut coeffs = f.values.clone();
    fwht(&mut coeffs);
    let scale = f.cell_measure();
    for c in &mut coeffs {
        *c *= scale;
    }
    SpectralVector {
        resolution: f.resolution,
        coeffs,
    }
}

/// `sum_k s[k] w_k`, the inverse of [`analyze`].
pub fn synthesize(s: &SpectralVector) -> DyadicFunction {
    let mut values = s.coeffs.clone();
    fwht(&mut values);
    DyadicFunction {
        resolution: s.resolution,
        values,
    }
}
