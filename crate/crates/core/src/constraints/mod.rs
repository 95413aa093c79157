//! Positive-definiteness enforcing constraint sets for GS parameters.

mod boxes;
mod spectral;

pub use boxes::{b_of_k, bisect_eta, project_box, BoxFamily, BoxSpec};
pub use spectral::{
    eig_constraints, frob_constraint, frob_constraint_on, frob_value, g_vector, spectral_pd_check,
    EIG_DIM_LIMIT,
};

use crate::error::{Error, Result};

/// Small positive constants used by the constraint sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    /// Lower bound on `alpha_0`.
    pub eps0: f64,
    /// Slack in the Frobenius constraint `||Z^H B^{-H}||_F^2 <= 1 - eps_f`.
    pub eps_f: f64,
    /// Bracket width of the eta bisection.
    pub eps_eta: f64,
    /// Floor on the eigenvalues of `Gamma`.
    pub eps_eig: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            eps0: 1e-6,
            eps_f: 1e-4,
            eps_eta: 1e-3,
            eps_eig: 1e-6,
        }
    }
}

impl ToleranceSet {
    pub fn new(eps0: f64, eps_f: f64, eps_eta: f64, eps_eig: f64) -> Result<Self> {
        let t = Self {
            eps0,
            eps_f,
            eps_eta,
            eps_eig,
        };
        t.validate()?;
        Ok(t)
    }

    /// Defaults with the eigenvalue floor expressed in the units of
    /// `Gamma`, i.e. divided by the mean diagonal of `S`.
    pub fn for_scale(trace_scale: f64) -> Self {
        let mut t = Self::default();
        if trace_scale > 0.0 && trace_scale.is_finite() {
            t.eps_eig = 1e-6 / trace_scale;
        }
        t
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps0", self.eps0),
            ("eps_f", self.eps_f),
            ("eps_eta", self.eps_eta),
            ("eps_eig", self.eps_eig),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.eps_f >= 1.0 || self.eps_eta >= 1.0 {
            return Err(Error::InvalidArgument(
                "eps_f and eps_eta must be below 1".into(),
            ));
        }
        Ok(())
    }
}
