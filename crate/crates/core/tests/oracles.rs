//! Checks against independent brute-force oracles built from first
//! principles: explicit Walsh sums, naive transforms and bit loops.

use walsh_hardy::dyadic::{bit_spread, complement_tiling, highest_bit, lowest_bit, variation, IntervalSpec};
use walsh_hardy::hardy::{hp_norm, lp_norm, weak_lp_norm};
use walsh_hardy::kernels::{fejer_pow2_closed, lebesgue_constant, lebesgue_constant_cells, CESARO_LIMIT};
use walsh_hardy::operators::{fejer_mean, partial_sum};
use walsh_hardy::random::{random_function, seeded_rng};
use walsh_hardy::{
    analyze, dirichlet, fejer_kernel, index_stats, synthesize, walsh_eval, DirichletMethod, DyadicFunction, FejerMethod,
};

fn naive_walsh(n: u64, x: u64) -> f64 {
    if (n & x).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn naive_dirichlet(n: u64, resolution: u32) -> Vec<f64> {
    (0..1u64 << resolution)
        .map(|x| (0..n).map(|k| naive_walsh(k, x)).sum())
        .collect()
}

fn naive_fejer(n: u64, resolution: u32) -> Vec<f64> {
    (0..1u64 << resolution)
        .map(|x| (1..=n).map(|k| (0..k).map(|i| naive_walsh(i, x)).sum::<f64>()).sum::<f64>() / n as f64)
        .collect()
}

fn naive_variation(n: u64) -> u32 {
    let bits: Vec<u64> = (0..64).map(|k| (n >> k) & 1).collect();
    let mut v = bits[0] as u32;
    for k in 1..64 {
        v += (bits[k] as i64 - bits[k - 1] as i64).unsigned_abs() as u32;
    }
    v
}

#[test]
fn index_statistics_match_bit_loops() {
    for n in 1..=4096u64 {
        let set: Vec<u32> = (0..64).filter(|k| n >> k & 1 == 1).collect();
        assert_eq!(highest_bit(n).unwrap(), *set.last().unwrap());
        assert_eq!(lowest_bit(n).unwrap(), set[0]);
        assert_eq!(bit_spread(n).unwrap(), set.last().unwrap() - set[0]);
        assert_eq!(variation(n), naive_variation(n));
        assert_eq!(index_stats(n).unwrap().set_bits, set);
    }
    assert!(highest_bit(0).is_err());
}

#[test]
fn worked_index_examples() {
    let s = index_stats(0b1011_0110).unwrap();
    assert_eq!((s.abs, s.low, s.d), (7, 1, 6));
    assert_eq!(s.run_count(), 3);
    assert_eq!(s.variation, 6);
    let s = index_stats(5).unwrap();
    assert!(s.in_a02);
    assert_eq!(s.variation, 4);
    assert!(!index_stats(7).unwrap().in_a02);
}

#[test]
fn walsh_eval_matches_rademacher_products() {
    let r = 6;
    for n in 0..64u64 {
        for x in 0..64u64 {
            let product: i32 = (0..r)
                .filter(|k| n >> k & 1 == 1)
                .map(|k| if x >> k & 1 == 1 { -1 } else { 1 })
                .product();
            assert_eq!(walsh_eval(n, x, r).unwrap() as i32, product);
        }
    }
    assert!(walsh_eval(64, 0, 6).is_err());
}

#[test]
fn transform_matches_naive_sum() {
    let mut rng = seeded_rng(5);
    for r in 1..=7 {
        let f = random_function(r, &mut rng).unwrap();
        let size = 1u64 << r;
        let spec = analyze(&f);
        for n in 0..size {
            let want: f64 = (0..size).map(|x| f.values()[x as usize] * naive_walsh(n, x)).sum::<f64>() / size as f64;
            assert!((spec.coeffs()[n as usize] - want).abs() < 1e-12);
        }
        assert!(synthesize(&spec).max_abs_diff(&f).unwrap() < 1e-12);
    }
}

#[test]
fn dirichlet_routes_match_walsh_sums() {
    for n in 1..=64u64 {
        let want = naive_dirichlet(n, 7);
        for method in [DirichletMethod::Direct, DirichletMethod::Lemma1, DirichletMethod::Recursive] {
            assert_eq!(dirichlet(n, 7, method).unwrap().values(), &want[..], "n = {n}, {method:?}");
        }
    }
}

#[test]
fn fejer_routes_match_averaged_sums() {
    for n in 1..=48u64 {
        let want = naive_fejer(n, 6);
        for method in [FejerMethod::Direct, FejerMethod::Weighted, FejerMethod::Lemma3] {
            let got = fejer_kernel(n, 6, method).unwrap();
            for (a, b) in got.values().iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "n = {n}, {method:?}");
            }
        }
    }
}

#[test]
fn dyadic_fejer_closed_form_small_cases() {
    let k4 = fejer_pow2_closed(2, 3).unwrap();
    assert_eq!(k4.values(), &naive_fejer(4, 3)[..]);
    assert_eq!(k4.values()[0], 2.5);
    assert_eq!(k4.values()[1], 0.5);
    assert_eq!(k4.values()[2], 1.0);
}

#[test]
fn d3_by_reflection_at_three_cells() {
    let d3 = naive_dirichlet(3, 3);
    let d4 = naive_dirichlet(4, 3);
    for x in 0..8u64 {
        assert_eq!(d3[x as usize], d4[x as usize] - naive_walsh(3, x) * naive_walsh(0, x));
    }
    assert_eq!(dirichlet(3, 3, DirichletMethod::Direct).unwrap().values(), &d3[..]);
}

#[test]
fn lebesgue_constants_match_cell_sums() {
    for n in 1..=256u64 {
        let r = highest_bit(n).unwrap() + 1;
        let l1: f64 = naive_dirichlet(n, r).iter().map(|v| v.abs()).sum::<f64>() / (1u64 << r) as f64;
        assert!((lebesgue_constant_cells(n).unwrap() - l1).abs() < 1e-12);
        assert!((lebesgue_constant(n).unwrap() - l1).abs() < 1e-12);
    }
    assert_eq!(lebesgue_constant(1).unwrap(), 1.0);
    assert_eq!(lebesgue_constant(4).unwrap(), 1.0);
    assert!((CESARO_LIMIT - 1.0 / (4.0 * std::f64::consts::LN_2)).abs() < 1e-15);
}

#[test]
fn partial_sums_match_truncated_spectra() {
    let mut rng = seeded_rng(8);
    let f = random_function(6, &mut rng).unwrap();
    let c = analyze(&f).coeffs().to_vec();
    for n in [1u64, 5, 17, 33, 64] {
        let want: Vec<f64> = (0..64u64)
            .map(|x| (0..n).map(|k| c[k as usize] * naive_walsh(k, x)).sum())
            .collect();
        let got = partial_sum(&f, n).unwrap();
        for (a, b) in got.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
        let mean: Vec<f64> = (0..64u64)
            .map(|x| (0..n).map(|k| (1.0 - k as f64 / n as f64) * c[k as usize] * naive_walsh(k, x)).sum())
            .collect();
        for (a, b) in fejer_mean(&f, n).unwrap().values().iter().zip(&mean) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn quasi_norms_match_definitions() {
    let f = DyadicFunction::new(2, vec![4.0, -1.0, 0.0, 1.0]).unwrap();
    let half = ((2.0 + 1.0 + 1.0) / 4.0f64).powi(2);
    assert!((lp_norm(&f, 0.5).unwrap() - half).abs() < 1e-12);

    let values = [4.0f64, 1.0, 0.0, 1.0];
    let mut weak: f64 = 0.0;
    for step in 1..=40_000 {
        let lambda = step as f64 * 1e-4;
        let measure = values.iter().filter(|v| **v > lambda).count() as f64 / 4.0;
        weak = weak.max(lambda * measure.powf(2.0));
    }
    assert!((weak_lp_norm(&f, 0.5).unwrap() - weak).abs() < 1e-3);
    assert!((weak_lp_norm(&f, 0.5).unwrap() - 0.5625).abs() < 1e-12);

    let c = DyadicFunction::constant(4, -3.0).unwrap();
    assert!((hp_norm(&c, 0.5).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn hp_norm_uses_the_martingale_maximal_function() {
    let f = DyadicFunction::new(2, vec![2.0, 0.0, -2.0, 0.0]).unwrap();
    assert_eq!(hp_norm(&f, 1.0).unwrap(), 1.0);
    let g = DyadicFunction::new(2, vec![2.0, -2.0, 0.0, 0.0]).unwrap();
    assert_eq!(hp_norm(&g, 1.0).unwrap(), 1.5);
    let averages: [[f64; 4]; 3] = [[0.0; 4], [0.0; 4], [2.0, 0.0, -2.0, 0.0]];
    let star: Vec<f64> = (0..4).map(|x| averages.iter().map(|a| a[x].abs()).fold(0.0, f64::max)).collect();
    let want = star.iter().sum::<f64>() / 4.0;
    assert!((hp_norm(&f, 1.0).unwrap() - want).abs() < 1e-12);
}

#[test]
fn complement_tiling_partitions_the_group() {
    for m in 1..=12u32 {
        let r = m;
        let mut hits = vec![0u32; 1 << r];
        let pieces = complement_tiling(m);
        for spec in pieces.iter().chain(std::iter::once(&IntervalSpec::AtZero { level: m })) {
            for cell in spec.cells(r) {
                hits[cell as usize] += 1;
            }
        }
        assert!(hits.iter().all(|&h| h == 1), "M = {m}");
    }
}

#[test]
fn variation_is_twice_the_run_count() {
    for n in 1..=1u64 << 16 {
        let s = index_stats(n).unwrap();
        let runs = s.run_count() as u32;
        assert_eq!(s.variation, 2 * runs, "n = {n}");
        assert!(runs <= s.variation && s.variation <= 2 * runs + 1);
        assert_eq!(s.reconstruct(), n);
    }
}
