//! Calibration sweeps behind the frozen constants in `fixtures`.
//!
//! Run with `cargo run --release -p walsh-hardy --example calibrate`.

use std::time::Instant;

use walsh_hardy::counterexamples::{
    a02_block_experiment, block_strong_statistic, divergence_experiment, fejer_nonconvergence, modulus_law_ratio, norm_convergence_experiment,
    random_example, strong_sum_experiment, strong_sum_sources, upper_bound_experiment, DivergenceConfig,
    LambdaSchedule, NormKind, Phi, ScheduleKind,
};
use walsh_hardy::hardy::{atomic_ratio, random_atom};
use walsh_hardy::kernels::{fejer_bounds, lebesgue_cesaro, local_fejer_integral_ratio};
use walsh_hardy::operators::{IndexFamily, OperatorKind};
use walsh_hardy::random::{seeded_rng, DEFAULT_SEED};
use walsh_hardy::table::spread_ratio;

fn dichotomy(p: f64, kind: OperatorKind, schedule: ScheduleKind, resolution: u32) {
    for family in [IndexFamily::Pow2, IndexFamily::Pow2PlusHalf, IndexFamily::Pow2Plus1] {
        let cfg = DivergenceConfig {
            p,
            family: family.clone(),
            build_family: IndexFamily::Pow2Plus1,
            schedule: LambdaSchedule::new(schedule, p, Phi::Const),
            kind,
            norm: NormKind::WeakLp,
            resolution,
            k_min: 3,
        };
        let t = divergence_experiment(&cfg).unwrap();
        let v = t.values("value");
        println!(
            "  {} {:?} N={resolution} spread={:?} values={:.4?}",
            family.name(),
            kind,
            spread_ratio(&v),
            v
        );
    }
}

fn main() {
    let clock = Instant::now();
    let t = lebesgue_cesaro(1 << 20).unwrap();
    for stat in ["cesaro_variation", "cesaro_lebesgue", "error_variation", "error_lebesgue"] {
        println!("{stat}: {:?}", t.column(stat));
    }
    println!("[{:?}]", clock.elapsed());

    let mut majorant: f64 = 0.0;
    for n in 1..=1024u64 {
        majorant = majorant.max(fejer_bounds(n, 12).unwrap().majorant_ratio);
    }
    println!("lemma6 majorant ratio max (n <= 1024, N = 12): {majorant}");
    for level in 1..=6 {
        println!("lemma5 ratio M={level}: {}", local_fejer_integral_ratio(level, 1024, 12).unwrap());
    }
    println!("[{:?}]", clock.elapsed());

    for resolution in [12, 14] {
        dichotomy(0.5, OperatorKind::PartialSum, ScheduleKind::Thm411b, resolution);
        dichotomy(1.0 / 3.0, OperatorKind::Fejer, ScheduleKind::Thm512b, resolution);
    }
    println!("[{:?}]", clock.elapsed());

    for (p, kind) in [
        (1.0, OperatorKind::PartialSum),
        (0.5, OperatorKind::PartialSum),
        (0.5, OperatorKind::Fejer),
        (1.0 / 3.0, OperatorKind::Fejer),
    ] {
        let t = upper_bound_experiment(p, kind, 10, 8, DEFAULT_SEED).unwrap();
        let max = t.values("ratio").into_iter().fold(0.0, f64::max);
        println!("upper bound p={p:.4} {kind:?}: {max}");
    }
    println!("[{:?}]", clock.elapsed());

    let mut rng = seeded_rng(DEFAULT_SEED);
    let mut atomic: f64 = 0.0;
    for p in [0.5, 1.0] {
        for _ in 0..200 {
            let count = rand::Rng::random_range(&mut rng, 1..=8);
            let atoms: Vec<_> = (0..count).map(|_| random_atom(&mut rng, p, 10).unwrap().0).collect();
            let mus: Vec<f64> = (0..count).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
            atomic = atomic.max(atomic_ratio(&atoms, &mus, p).unwrap());
        }
    }
    println!("atomic ratio max: {atomic}");
    let mut modulus: f64 = 0.0;
    for p in [0.5, 1.0] {
        for _ in 0..200 {
            modulus = modulus.max(modulus_law_ratio(&random_example(&mut rng, p, 12, 6).unwrap()).unwrap());
        }
    }
    println!("modulus law max: {modulus}");

    for (p, family, sched) in [
        (0.5, IndexFamily::Pow2Plus1, ScheduleKind::Thm422b),
        (1.0, IndexFamily::Pow2Plus1, ScheduleKind::Thm423b),
        (0.5, IndexFamily::Pow2, ScheduleKind::Thm422b),
    ] {
        let t = norm_convergence_experiment(
            p,
            &family,
            &LambdaSchedule::new(sched, p, Phi::Const),
            OperatorKind::PartialSum,
            12,
            2,
        )
        .unwrap();
        println!(
            "norm conv p={p} {} {}: error={:.4?} ratio max={:?}",
            family.name(),
            sched.name(),
            t.values("error"),
            t.values("ratio").into_iter().fold(0.0, f64::max)
        );
    }

    let cfg = DivergenceConfig {
        p: 0.5,
        family: IndexFamily::Alternating,
        build_family: IndexFamily::Alternating,
        schedule: LambdaSchedule::new(ScheduleKind::Thm511b, 0.5, Phi::Const),
        kind: OperatorKind::Fejer,
        norm: NormKind::Lp,
        resolution: 12,
        k_min: 2,
    };
    let t = divergence_experiment(&cfg).unwrap();
    let growth: Vec<f64> = t
        .column("value")
        .iter()
        .map(|&(m, v)| v.sqrt() / (walsh_hardy::dyadic::variation(m) as f64).sqrt())
        .collect();
    println!("thm511b run growth ratios: {growth:.4?} min {}", growth.iter().cloned().fold(f64::INFINITY, f64::min));
    println!("[{:?}]", clock.elapsed());

    let mut floor = f64::INFINITY;
    for resolution in 6..=14 {
        for (_, v) in fejer_nonconvergence(1.0 / 3.0, resolution).unwrap() {
            floor = floor.min(v);
        }
    }
    println!("fejer non-convergence floor: {floor}");

    let mut tvals = Vec::new();
    for m in 2..=10 {
        let v = block_strong_statistic(m).unwrap();
        tvals.push(v);
        println!("T({m}) = {v:.6} per log = {:.6}", v / (m as f64).ln());
    }
    let min = (4..=10).map(|m| tvals[m - 2] / (m as f64).ln()).fold(f64::INFINITY, f64::min);
    println!("min T/ln m over 4..10: {min}");
    println!("[{:?}]", clock.elapsed());

    for phi in [Phi::Const, Phi::Power { beta: 0.25 }] {
        let t = a02_block_experiment(0.5, phi, 12).unwrap();
        println!("a02 blocks {}: count={:?}", phi.label(), t.values("count"));
        println!("  block_sum={:.4?}", t.values("block_sum"));
        println!("  rate={:.4?}", t.values("rate"));
    }
    let sources = strong_sum_sources(0.5, 12, 6, 6, DEFAULT_SEED).unwrap();
    let mut strong12: f64 = 0.0;
    for f in &sources {
        let t = strong_sum_experiment(0.5, OperatorKind::Fejer, f, 1 << 11).unwrap();
        strong12 = strong12.max(t.values("normalised_sum").into_iter().fold(0.0, f64::max));
    }
    println!("strong sum max at N = 12: {strong12} [{:?}]", clock.elapsed());

    let sources = strong_sum_sources(0.5, 14, 6, 6, DEFAULT_SEED).unwrap();
    let mut strong: f64 = 0.0;
    for (i, f) in sources.iter().enumerate() {
        let t = strong_sum_experiment(0.5, OperatorKind::Fejer, f, 1 << 13).unwrap();
        let m = t.values("normalised_sum").into_iter().fold(0.0, f64::max);
        println!("  source {i}: {m} [{:?}]", clock.elapsed());
        strong = strong.max(m);
    }
    println!("strong sum max: {strong}");
}
