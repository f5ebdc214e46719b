//! Finite q-exchangeable measures on binary words.
//!
//! The crate builds q-exchangeable measures on `{0,1}^n` (extreme measures,
//! q-Bernoulli measures and their mixtures), decomposes them into extreme
//! points, projects them onto leading coordinates, and measures how far the
//! projection of a measure is from the projection of its q-Bernoulli mixture.
//! That distance is bounded above and below by explicit constants times
//! `q^n`; [`bounds`] computes the constants and certifies the bounds over
//! parameter sweeps.
//!
//! All computations are generic over [`Scalar`]: exact big rationals by
//! default, `f64` for long sweeps.

pub mod bounds;
pub mod definetti;
pub mod error;
pub mod json;
pub mod measures;
pub mod projection;
pub mod qcore;
pub mod scalar;
pub mod verify;

pub use bounds::{
    compute_sweep, distance_report, fit_log_slope, lower_constant, tech_lemma_lhs_rhs,
    upper_constant, verify_rate, N1Rule, RateSweepConfig,
};
pub use definetti::{
    approx_error, decompose, extreme_vs_bernoulli_distance, mixture, recompose, DistanceReport,
    MixingMeasure,
};
pub use error::{Error, Result};
pub use measures::{
    check_q_exchangeable, eval, extreme_measure, is_q_exchangeable, q_bernoulli, random_q_exch,
    sample, to_dense, DeltaQPoint, DenseMeasure, QExchMeasure, Sampler, SwapViolation,
};
pub use projection::{
    project, project_bernoulli_closed_form, project_extreme_closed_form, tv_distance, TvDistance,
};
pub use qcore::{
    coinversions, enumerate_level, inversions, q_binomial, q_factorial, q_int, q_pochhammer,
    QBinomTable, QParam, Word,
};
pub use scalar::{Mode, Rational, Scalar};
