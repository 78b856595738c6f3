//! Walsh–Fourier analysis on the dyadic group at finite resolution.
//!
//! Functions are step functions on the `2^N` cells of level `N`; the crate
//! provides the Walsh–Paley system and its fast transform, Dirichlet and
//! Fejér kernels, partial sums and Fejér means, martingale Hardy-space
//! quasi-norms, p-atoms, and the counterexample martingales used to probe
//! the sharpness of the classical bounds.

pub mod counterexamples;
pub mod dyadic;
pub mod error;
pub mod fixtures;
pub mod hardy;
pub mod kernels;
pub mod operators;
pub mod random;
pub mod suites;
pub mod table;
pub mod walsh;

pub use counterexamples::{build_example_martingale, ExampleMartingale, LambdaSchedule, Phi, ScheduleKind};
pub use dyadic::{group_add, index_stats, interval_indicator, BlockDecomposition, IntervalSpec, Run};
pub use error::{Error, Result};
pub use kernels::{dirichlet, fejer_kernel, DirichletMethod, FejerMethod, KernelReport};
pub use suites::{run_suite, run_suites, Check, Suite, SuiteConfig, SuiteReport};
pub use table::ExperimentTable;
pub use walsh::{analyze, synthesize, walsh_eval, DyadicFunction, SpectralVector};
