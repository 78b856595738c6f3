//! Frozen regression constants.
//!
//! Each value comes from the sweep in `examples/calibrate.rs` run at the
//! default seed. Upper bounds are the observed maximum times 1.05; lower
//! bounds are the observed minimum divided by 1.05.

/// Headroom factor applied to every observed extreme.
pub const HEADROOM: f64 = 1.05;

/// Final `|error|` of the Cesàro average of Lebesgue constants at `n = 2^20`
/// (observed `0.036067410418754275`).
pub const CESARO_FINAL_ERROR: f64 = 0.037_870_780_939_692;

/// Bounded-family `max/min` row ratio for weak-L_{1/2} partial sums along
/// `{2^k}` and `{2^k + 2^{k-1}}` at `N = 14` (observed `3.3137084989847603`).
pub const DICHOTOMY_PARTIAL_SPREAD: f64 = 3.479_393_923_934;

/// Bounded-family `max/min` row ratio for weak-L_{1/3} Fejér means along
/// `{2^k}` and `{2^k + 2^{k-1}}` at `N = 14` (observed `3.9186360507740496`).
pub const DICHOTOMY_FEJER_SPREAD: f64 = 4.114_567_853_313;

/// `||S_n f||_{H_1} / (V(n) ||f||_{H_1})`, `n <= 512`, `N = 10`
/// (observed `0.8208586165048544`).
pub const UPPER_PARTIAL_P1: f64 = 0.861_901_547_330;

/// `||S_n f||_{H_{1/2}} / (2^{d(n)} ||f||_{H_{1/2}})` (observed `1.6743347616433257`).
pub const UPPER_PARTIAL_HALF: f64 = 1.758_051_499_725;

/// `||σ_n f||_{H_{1/2}} / (V^2(n) ||f||_{H_{1/2}})` (observed `1.6402184581435257`).
pub const UPPER_FEJER_HALF: f64 = 1.722_229_381_051;

/// `||σ_n f||_{H_{1/3}} / (2^{d(n)} ||f||_{H_{1/3}})` (observed `29.831286827980037`).
pub const UPPER_FEJER_THIRD: f64 = 31.322_851_169_379;

/// `||sum μ_k a_k||^p_{H_p} / sum |μ_k|^p` over up to 8 atoms
/// (observed `0.9362054291014988`).
pub const ATOMIC_RATIO: f64 = 0.983_015_700_557;

/// `ω_{H_p}(2^{-n}, f) / (sum_{|α_k| >= n} |λ_k|^p)^{1/p}` (observed `1.000000000000014`).
pub const MODULUS_LAW: f64 = 1.05;

/// `||S_{m_k} f - f||_{H_p} / (rate(m_k) ω_{H_p}(2^{-|m_k|}, f))`
/// (observed `1.1203620438470816`).
pub const NORM_CONVERGENCE_PARTIAL: f64 = 1.176_380_146_039;

/// Ratio of `||n K_n||_1` to the run majorant, `n <= 1024`
/// (observed `3.957387007570606`).
pub const FEJER_MAJORANT_RATIO: f64 = 4.155_256_357_949;

/// Normalised local integral of `|K_n|` on `I_M(e_k)` and `I_{l+1}(e_k + e_l)`
/// (observed `0.5000000000000273`).
pub const LOCAL_FEJER_RATIO: f64 = 0.525;

/// `min_k ∫|σ_{α_k} f|^{1/2} / V^{1/2}(α_k)` along `{2^k + 2^{k-2} + ..}`
/// at `N = 12` (observed `0.22360679774998826`).
pub const RUN_GROWTH_MIN: f64 = 0.212_958_854_999;

/// `min_{4 <= m <= 10} T(m) / ln m` (observed `0.5562301980303714`).
pub const BLOCK_STRONG_C: f64 = 0.529_743_045_743;

/// Normalised Fejér strong sum at `p = 1/2`, over random atoms and
/// random builds at `N = 12` and `N = 14` (observed `0.9286702685485541`).
pub const STRONG_SUM_RATIO: f64 = 0.975_103_781_976;

/// `min_k ||σ_{α_k} f - f||_{weak-L_{1/3}}` for `λ_k = 2^{-d(α_k)}` along
/// `{2^k + 1}`, over `6 <= N <= 14` (observed `0.48469094669117624`).
pub const FEJER_NONCONVERGENCE_FLOOR: f64 = 0.461_610_425_420;
