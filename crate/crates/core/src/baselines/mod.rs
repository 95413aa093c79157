//! Comparison estimators: sample covariance, diagonal averaging, masks,
//! circulant and EM estimates, and shrinkage.

mod circ;
mod em;
mod mask;
mod scm;
mod shrink;

pub use circ::{circ_first_col, circ_mle, circulant, circulant_eigenvalues, circulant_inverse};
pub use em::{em_toeplitz, EmResult};
pub use mask::{cv_tune_mask, mask_apply, masked_savg, MaskKind, MaskSpec};
pub use scm::{lag_averages, s_avg, sample_cov};
pub use shrink::{plugin_rho, shrink, shrink_samples, shrink_target, ShrinkResult, ShrinkTarget};
