//! Numerical solution of the Auerbach system, multistart census,
//! continuation in `p`, and transfer to `1 < p < 2` by duality.

pub mod continuation;
pub mod multistart;
pub mod newton;
mod refine;
pub mod system;

pub use continuation::{continuation_track, geometric_grid, ContinuationTrace, TrackedPath};
pub use multistart::{census, multistart_enumerate, seed_for, Census, CensusEntry};
pub use newton::{newton_solve, SolveReport, SolveStatus, NEAR_P2_MARGIN};
pub use system::{jacobian, residual};

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::orthogonality::{dual_basis, is_auerbach};
use crate::tolerance::ToleranceConfig;

/// The biorthogonal functionals of an Auerbach basis, as an Auerbach basis
/// of the conjugate space.
pub fn dualize_solution(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<BasisMatrix> {
    let report = is_auerbach(b, tol);
    if !report.auerbach {
        return Err(AuerbachError::Precondition(format!(
            "dualization needs an Auerbach basis ({})",
            report.failure.unwrap_or("?")
        )));
    }
    let dual = dual_basis(b, tol)?.functionals;
    let check = is_auerbach(&dual, tol);
    if !check.auerbach {
        return Err(AuerbachError::Consistency(format!(
            "dual basis failed verification at p = {} ({})",
            dual.p(),
            check.failure.unwrap_or("?")
        )));
    }
    Ok(dual)
}
