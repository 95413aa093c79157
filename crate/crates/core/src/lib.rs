//! Structured Toeplitz covariance estimation through the Gohberg-Semencul
//! parameterization of the inverse covariance.
//!
//! The crate provides fast Toeplitz kernels, the likelihood and its
//! gradient in GS coordinates, positive-definiteness constraints, the
//! constrained estimators, comparison baselines and ground-truth processes.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod constraints;
pub mod dense;
pub mod error;
pub mod estimators;
pub mod gs;
pub mod likelihood;
pub mod processes;
pub mod scalar;
pub mod toeplitz;

pub use constraints::{BoxFamily, BoxSpec, ToleranceSet};
pub use dense::Matrix;
pub use error::{Error, Result};
pub use estimators::EstimationReport;
pub use gs::{GsBand, GsParams};
pub use likelihood::LikelihoodContext;
pub use processes::{ProcessKind, ProcessSpec, SampleSet};
pub use scalar::Scalar;
pub use toeplitz::{HermitianToeplitz, LowerTriToeplitz, PartialDiagSums};
