//! Auerbach bases of the finite-dimensional spaces `l^n_p`.
//!
//! A basis `v_1, …, v_n` of a normed space is Auerbach when every `v_i` has
//! norm one and so does every biorthogonal functional `v^i`. For smooth
//! `p` this is the square system `v_i · ^p v_j = δ_ij`, where
//! `^p x = (x_j |x_j|^{p-2})_j`.
//!
//! The crate verifies such bases for every `p ∈ [1, ∞]`, builds the known
//! explicit ones, finds them numerically with a damped Newton method, and
//! sorts them into classes up to signed permutations of rows and columns.

pub mod basis;
pub mod classification;
pub mod constructions;
pub mod error;
pub mod exponent;
pub mod lp;
pub mod orthogonality;
pub mod scalar;
pub mod solver;
pub mod tolerance;

pub use basis::BasisMatrix;
pub use classification::{canonical_form, CanonicalClass, ClassLabel};
pub use error::{AuerbachError, Result};
pub use exponent::PExponent;
pub use lp::{p_map, p_norm, semi_inner_product, Vector};
pub use orthogonality::{
    bj_directional, bj_minimization_oracle, bj_orthogonal_smooth, criticality_residual, dual_basis, is_auerbach,
    AuerbachReport, DualBasis, OrthogonalityVerdict,
};
pub use solver::{SolveReport, SolveStatus};
pub use tolerance::ToleranceConfig;
