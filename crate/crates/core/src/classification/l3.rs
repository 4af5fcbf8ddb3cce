//! Classification of Auerbach bases of `l^3_p` for every `p`.

use crate::basis::BasisMatrix;
use crate::classification::canonical::{equivalent, permutations, ClassLabel};
use crate::constructions::{block_basis, hadamard2_basis, identity_basis, jp_basis, solve_rp};
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::lp::p_norm;
use crate::orthogonality::{dual_basis, is_auerbach};
use crate::tolerance::ToleranceConfig;

/// Shape of a unit vector of `l^3_p` up to signed permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L3VectorType {
    /// `(0, 0, 1)`
    Axis,
    /// `(0, 2^{-1/p}, 2^{-1/p})`
    TwoPoint,
    /// `(r_p, 1, 1) / (2 + r_p^p)^{1/p}`
    JpType,
    None,
}

fn require_l3_exponent(p: PExponent) -> Result<f64> {
    let pf = p.require_smooth("l3 classification")?;
    if pf == 2.0 {
        return Err(AuerbachError::Domain(
            "at p = 2 every orthonormal basis is Auerbach; there is no finite list".into(),
        ));
    }
    Ok(pf)
}

pub fn classify_l3_vector(v: &[f64], p: PExponent, tol: &ToleranceConfig) -> Result<L3VectorType> {
    let pf = require_l3_exponent(p)?;
    if v.len() != 3 {
        return Err(AuerbachError::Shape(format!("expected a vector of R^3, got length {}", v.len())));
    }
    let norm = p_norm(v, p);
    if (norm - 1.0).abs() > tol.residual_tol {
        return Err(AuerbachError::Domain(format!("vector is not on the unit sphere: ||v||_p = {norm}")));
    }
    let mut sorted: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sorted.sort_by(f64::total_cmp);
    let c = 2f64.powf(-1.0 / pf);
    let r = solve_rp(p)?.value;
    let s = (2.0 + r.powf(pf)).powf(-1.0 / pf);
    let templates = [
        (L3VectorType::Axis, [0.0, 0.0, 1.0]),
        (L3VectorType::TwoPoint, [0.0, c, c]),
        (L3VectorType::JpType, [r * s, s, s]),
    ];
    Ok(templates
        .iter()
        .find(|(_, t)| t.iter().zip(&sorted).all(|(a, b)| (a - b).abs() <= tol.quantization_step))
        .map_or(L3VectorType::None, |(kind, _)| *kind))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum L3Verdict {
    Class {
        label: ClassLabel,
        /// Recovered `|t|` for the `J_∞(t)` family (`t` and `-t` are equivalent).
        t: Option<f64>,
        /// The basis was classified through its dual in `l^3_∞`.
        via_duality: bool,
    },
    /// `p = 2`: the Auerbach bases are the orthonormal bases, a continuum.
    OrthogonalContinuum,
}

pub fn classify_l3_basis(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<L3Verdict> {
    if b.n() != 3 {
        return Err(AuerbachError::Shape(format!("l3 classification needs n = 3, got n = {}", b.n())));
    }
    let p = b.p();
    if p.finite() == Some(2.0) {
        return Ok(L3Verdict::OrthogonalContinuum);
    }
    let report = is_auerbach(b, tol);
    if !report.auerbach {
        return Err(AuerbachError::Precondition(format!(
            "not an Auerbach basis ({})",
            report.failure.unwrap_or("?")
        )));
    }
    if p.is_one() {
        let dual = dual_basis(b, tol)?.functionals;
        return Ok(match classify_linf(&dual, tol)? {
            L3Verdict::Class { label, t, .. } => L3Verdict::Class { label, t, via_duality: true },
            other => other,
        });
    }
    if p.is_infinity() {
        return classify_linf(b, tol);
    }
    let candidates = [
        (ClassLabel::Identity, identity_basis(3, p)?),
        (ClassLabel::BlockH2, block_basis(&[identity_basis(1, p)?, hadamard2_basis(p)])?),
        (ClassLabel::Jp, jp_basis(p)?),
    ];
    for (label, template) in &candidates {
        if equivalent(b, template, tol)? {
            return Ok(L3Verdict::Class { label: *label, t: None, via_duality: false });
        }
    }
    Ok(L3Verdict::Class { label: ClassLabel::Other, t: None, via_duality: false })
}

fn classify_linf(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<L3Verdict> {
    let p = PExponent::INFINITY;
    let b = b.with_p(p);
    let plain = |label| L3Verdict::Class { label, t: None, via_duality: false };
    if equivalent(&b, &identity_basis(3, p)?, tol)? {
        return Ok(plain(ClassLabel::Identity));
    }
    if equivalent(&b, &block_basis(&[identity_basis(1, p)?, hadamard2_basis(p)])?, tol)? {
        return Ok(plain(ClassLabel::BlockH2));
    }
    if let Some(t) = jinf_parameter(&b, tol) {
        return Ok(L3Verdict::Class { label: ClassLabel::JinfFamily, t: Some(t), via_duality: false });
    }
    Ok(plain(ClassLabel::Other))
}

/// `|t|` when `b` is a signed row/column permutation of `J_∞(t)`.
fn jinf_parameter(b: &BasisMatrix, tol: &ToleranceConfig) -> Option<f64> {
    const PATTERN: [[f64; 3]; 3] = [[1.0, 1.0, 1.0], [-1.0, 1.0, 1.0], [f64::NAN, 1.0, -1.0]];
    let eps = 4.0 * tol.quantization_step;
    let perms = permutations(3);
    for rp in &perms {
        for cp in &perms {
            for rs in 0..8u32 {
                for cs in 0..8u32 {
                    let entry = |i: usize, j: usize| {
                        let sr = if rs >> i & 1 == 1 { -1.0 } else { 1.0 };
                        let sc = if cs >> j & 1 == 1 { -1.0 } else { 1.0 };
                        sr * sc * b.get(rp[i], cp[j])
                    };
                    let fits = (0..3).all(|i| {
                        (0..3).all(|j| PATTERN[i][j].is_nan() || (entry(i, j) - PATTERN[i][j]).abs() <= eps)
                    });
                    let t = entry(2, 0);
                    if fits && t.abs() <= 1.0 + eps {
                        return Some(t.abs().min(1.0));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::jinf_basis;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn vector_templates() {
        let tol = ToleranceConfig::default();
        assert_eq!(classify_l3_vector(&[0.0, 0.0, -1.0], p(3.0), &tol).unwrap(), L3VectorType::Axis);
        let c = 2f64.powf(-1.0 / 3.0);
        assert_eq!(classify_l3_vector(&[0.0, c, -c], p(3.0), &tol).unwrap(), L3VectorType::TwoPoint);
        let jp = jp_basis(p(3.0)).unwrap();
        for row in jp.rows() {
            assert_eq!(classify_l3_vector(row, p(3.0), &tol).unwrap(), L3VectorType::JpType);
        }
    }

    #[test]
    fn constant_direction_is_none() {
        let tol = ToleranceConfig::default();
        // (0.5, 0.5, 0.5) is off the unit sphere; its direction matches no template
        assert!(classify_l3_vector(&[0.5, 0.5, 0.5], p(3.0), &tol).is_err());
        let u = 3f64.powf(-1.0 / 3.0);
        assert_eq!(classify_l3_vector(&[u, u, u], p(3.0), &tol).unwrap(), L3VectorType::None);
    }

    #[test]
    fn p2_is_a_continuum() {
        let tol = ToleranceConfig::default();
        let b = identity_basis(3, p(2.0)).unwrap();
        assert_eq!(classify_l3_basis(&b, &tol).unwrap(), L3Verdict::OrthogonalContinuum);
        assert!(classify_l3_vector(&[0.0, 0.0, 1.0], p(2.0), &tol).is_err());
    }

    #[test]
    fn jinf_recovers_parameter() {
        let tol = ToleranceConfig::default();
        let v = classify_l3_basis(&jinf_basis(0.7).unwrap(), &tol).unwrap();
        match v {
            L3Verdict::Class { label: ClassLabel::JinfFamily, t: Some(t), via_duality: false } => {
                assert!((t - 0.7).abs() < 1e-7)
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }
}
