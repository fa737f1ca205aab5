//! Deconvolution of distribution functions from symmetrized Neumann-series
//! transforms.
//!
//! The core routines are generic over the scalar type (see [`Real`]); the
//! `*64` aliases below fix it to `f64`.

// Negated comparisons are how NaN gets rejected; the quadrature tables keep
// their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod charfn;
pub mod decon;
pub mod distributions;
pub mod empirical;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod scalar;
pub mod special;

pub use charfn::{CharFn, Decay, Symmetrization, SymmetrizationMode, ZeroSet};
pub use decon::{DeconCurve, DeconProblem, GridKind, SignedGridFn};
pub use distributions::{DistributionSpec, Family};
pub use empirical::{EmpiricalDecon, IncrementEstimate, Sample};
pub use error::{DeconError, Result};
pub use oracle::{JumpRule, LatticeMeasure, SumPath};
pub use quad::{PanelRule, QuadSpec};
pub use scalar::Real;
pub use special::SmoothingKernel;

pub type CharFn64 = CharFn<f64>;
pub type DistributionSpec64 = DistributionSpec<f64>;
pub type Symmetrization64 = Symmetrization<f64>;

pub type DeconProblem64 = DeconProblem<f64>;
pub type SignedGridFn64 = SignedGridFn<f64>;
pub type LatticeMeasure64 = LatticeMeasure<f64>;
pub type Sample64 = Sample<f64>;
pub type EmpiricalDecon64 = EmpiricalDecon<f64>;
pub type QuadSpec64 = QuadSpec<f64>;
pub type SmoothingKernel64 = SmoothingKernel<f64>;

pub type CharFn32 = CharFn<f32>;
pub type DistributionSpec32 = DistributionSpec<f32>;
pub type DeconProblem32 = DeconProblem<f32>;

