//! Retractions of `K[x, y]`: verification, the normal form `x + y q`, the
//! search for maps taking `p` to `x`, and fixed polynomials of an
//! endomorphism.

mod fixed;
mod retraction;
mod witness;

pub use fixed::{
    find_fixed_polynomials, jc_harness, stable_image_diagnostics, FixedSubspace, IterateInfo, JcReport, JcStatus,
    StableImageBranch, StableImageReport, ITERATE_DEGREE_CAP,
};
pub use retraction::{
    normal_form_retraction, subalgebra_coefficients, verify_retraction, RetractImage, Retraction, RetractionVerdict,
};
pub use witness::{
    default_search_degree, retract_witness_search, verify_witness, RetractVerdict, DEFAULT_WITNESS_BUDGET,
};

use crate::poly::PolyError;
use crate::tame::TameError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RetractError {
    #[error("retracts are handled in two variables, found {0}")]
    NotBivariate(usize),
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("check failed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Tame(#[from] TameError),
}

fn check_map(phi: &crate::PolyMap) -> Result<(), RetractError> {
    if phi.arity() != 2 {
        return Err(RetractError::NotBivariate(phi.arity()));
    }
    Ok(())
}
