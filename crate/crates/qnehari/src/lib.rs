//! Numerical laboratory for the Hardy space of regular quaternionic power
//! series on the unit ball: the ★-product algebra, Hankel and
//! ★-multiplication operators on ℓ²(ℕ,ℍ), Carleson-box geometry, and BMOA
//! norms, together with experiments exhibiting how the corresponding
//! norm-like quantities track each other at desk scale.
//!
//! Layout follows the mathematics:
//! - [`quat`]: exact quaternion arithmetic, slices, sphere sampling.
//! - [`series`]: truncated regular power series and the ★-algebra.
//! - [`hardy`]: H² norms, inner products, reproducing kernels, H∞/H¹ estimates.
//! - [`operators`]: Hankel/Toeplitz matrices and operator norms over ℍ.
//! - [`measures`]: Carleson boxes, the measure dμ_b, embedding constants.
//! - [`bmo`]: arc averages and BMOA norms on slices and on the ball.
//! - [`lab`]: experiment orchestration, config, CSV/JSON reports.

pub mod bmo;
pub mod hardy;
pub mod lab;
pub mod measures;
pub mod operators;
pub mod quat;
pub mod series;

pub(crate) mod numeric;
pub(crate) mod rng;

pub use quat::{ImaginaryUnit, Quaternion, SlicePoint};
pub use series::TruncatedSeries;

/// Errors surfaced by the library's domain checks.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot invert the zero quaternion")]
    ZeroDivisor,
    #[error("imaginary unit must have zero real part and unit norm (re={re}, |q|={norm})")]
    NotAnImaginaryUnit { re: f64, norm: f64 },
    #[error("series is not ★-invertible: constant coefficient is zero")]
    NotStarInvertible,
    #[error("kernel base point must lie in the open unit ball, got |w| = {0}")]
    OutsideBall(f64),
    #[error("imaginary units are not orthogonal: |<I,J>| = {0:.3e}")]
    UnitsNotOrthogonal(f64),
    #[error("hankel symbol too short: need {needed} entries, got {got}")]
    SymbolTooShort { needed: usize, got: usize },
    #[error("matrix contains non-finite entries")]
    NonFiniteEntries,
    #[error("{0} must be non-empty")]
    EmptyInput(&'static str),
    #[error("test function has zero H² norm")]
    ZeroNormTestFunction,
    #[error("Möbius ratio pole: 1 - zw vanishes")]
    MoebiusPole,
    #[error("slice points lie on different slices (|<I_w,I_z>| = {0:.6})")]
    SliceMismatch(f64),
    #[error("arc must have length in (0, 2π], got {0}")]
    DegenerateArc(f64),
    #[error("arc family needs at least {min} samples per arc, got {got}")]
    TooFewArcSamples { min: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
