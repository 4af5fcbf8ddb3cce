//! Equivalence classes of bases, the `l^3_p` classification, and strong
//! Auerbach bases.

pub mod canonical;
pub mod l3;
pub mod strong;

use crate::basis::BasisMatrix;
use crate::constructions::{block_basis, hadamard2_basis, identity_basis, jp_basis};
use crate::error::Result;
use crate::tolerance::ToleranceConfig;

pub use canonical::{
    canonical_form, equivalent, row_equivalence_orbit_size, CanonicalClass, ClassLabel, MAX_CANONICAL_DIM,
};
pub use l3::{classify_l3_basis, classify_l3_vector, L3VectorType, L3Verdict};
pub use strong::{
    classify_strong_vector, is_spherical_point, is_strong_auerbach, subspace_isometric_lp, StrongVectorType,
    SupportPattern,
};

/// Label for a basis at a finite exponent `p != 2`: `I_n`, `I_{n-2} ⊕ H_2`
/// and `I_{n-3} ⊕ J_p` are recognized, everything else is `OTHER`.
pub fn label_for(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<ClassLabel> {
    let p = b.p();
    let n = b.n();
    if equivalent(b, &identity_basis(n, p)?, tol)? {
        return Ok(ClassLabel::Identity);
    }
    let pad = |k: usize| -> Result<Vec<BasisMatrix>> {
        Ok(if n > k { vec![identity_basis(n - k, p)?] } else { vec![] })
    };
    if n >= 2 {
        let mut parts = pad(2)?;
        parts.push(hadamard2_basis(p));
        if equivalent(b, &block_basis(&parts)?, tol)? {
            return Ok(ClassLabel::BlockH2);
        }
    }
    if n >= 3 && p.is_smooth() && p.finite() != Some(2.0) {
        let mut parts = pad(3)?;
        parts.push(jp_basis(p)?);
        if equivalent(b, &block_basis(&parts)?, tol)? {
            return Ok(ClassLabel::Jp);
        }
    }
    Ok(ClassLabel::Other)
}

/// Count of bases when only row permutations and unimodular row scalings
/// are identified, against the lower bound `n(n-1)/2 + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowEquivalenceCount {
    pub count: usize,
    pub bound: usize,
    pub satisfied: bool,
}

/// Expands each class (row-and-column equivalence) into its row-equivalence
/// classes and compares the total with `n(n-1)/2 + 1`.
pub fn ww_lower_bound_check(classes: &[CanonicalClass], n: usize) -> RowEquivalenceCount {
    let bound = n * n.saturating_sub(1) / 2 + 1;
    if classes.is_empty() || classes.iter().any(|c| c.n() != n) {
        return RowEquivalenceCount { count: 0, bound, satisfied: false };
    }
    let mut unique: Vec<&CanonicalClass> = classes.iter().collect();
    unique.sort();
    unique.dedup();
    let count = unique.into_iter().map(row_equivalence_orbit_size).sum();
    RowEquivalenceCount { count, bound, satisfied: count >= bound }
}
