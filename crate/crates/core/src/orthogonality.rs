//! Birkhoff–James orthogonality tests, the dual basis, and the Auerbach
//! verifier built on top of them.

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::lp::{dot, p_map, p_norm};
use crate::scalar::golden_section;
use crate::tolerance::ToleranceConfig;

/// Resolution of the line search in [`bj_minimization_oracle`].
pub const ORACLE_LAMBDA_RESOLUTION: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalityVerdict {
    pub orthogonal: bool,
    /// Criterion residual, or the minimizing `λ` for the oracle.
    pub witness: f64,
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(AuerbachError::Shape(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().all(|v| *v == 0.0) {
        return Err(AuerbachError::Domain("orthogonality is undefined for x = 0".into()));
    }
    Ok(())
}

/// `x ⊥ y` for smooth norms: `y · ^p x = 0`, tested relative to
/// `||y||_p ||x||_p^{p-1}` so the verdict does not depend on scaling.
pub fn bj_orthogonal_smooth(
    x: &[f64],
    y: &[f64],
    p: PExponent,
    tol: &ToleranceConfig,
) -> Result<OrthogonalityVerdict> {
    let pf = p.require_smooth("smooth orthogonality criterion")?;
    check_pair(x, y)?;
    let scale = p_norm(y, p) * p_norm(x, p).powf(pf - 1.0);
    let witness = if scale == 0.0 { 0.0 } else { dot(y, &p_map(x, p)?) / scale };
    Ok(OrthogonalityVerdict { orthogonal: witness.abs() <= tol.residual_tol, witness })
}

/// `x ⊥ y` for `p ∈ {1, ∞}` from the one-sided derivatives of
/// `λ ↦ ||x + λy||` at zero.
pub fn bj_directional(
    x: &[f64],
    y: &[f64],
    p: PExponent,
    tol: &ToleranceConfig,
) -> Result<OrthogonalityVerdict> {
    check_pair(x, y)?;
    let max = p_norm(x, PExponent::INFINITY);
    let eps = tol.residual_tol;
    if p.is_infinity() {
        let (mut up, mut down) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (&xi, &yi) in x.iter().zip(y) {
            if xi.abs() >= max - eps * max {
                let s = xi.signum();
                up = up.max(s * yi);
                down = down.max(-s * yi);
            }
        }
        let witness = up.min(down);
        Ok(OrthogonalityVerdict { orthogonal: witness >= -eps, witness })
    } else if p.is_one() {
        let (mut signed, mut free) = (0.0, 0.0);
        for (&xi, &yi) in x.iter().zip(y) {
            if xi.abs() <= eps * max {
                free += yi.abs();
            } else {
                signed += xi.signum() * yi;
            }
        }
        let witness = signed.abs() - free;
        Ok(OrthogonalityVerdict { orthogonal: witness <= eps, witness })
    } else {
        Err(AuerbachError::Domain(format!(
            "directional orthogonality test is for p = 1 or p = inf, got p = {p}"
        )))
    }
}

/// Literal check of `||x|| <= ||x + λy||` by minimizing the convex function
/// `λ ↦ ||x + λy||_p` over the configured window.
pub fn bj_minimization_oracle(
    x: &[f64],
    y: &[f64],
    p: PExponent,
    tol: &ToleranceConfig,
) -> Result<OrthogonalityVerdict> {
    check_pair(x, y)?;
    if y.iter().all(|v| *v == 0.0) {
        return Err(AuerbachError::Domain("the line-search oracle needs y != 0".into()));
    }
    let f = |lambda: f64| {
        let shifted: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| xi + lambda * yi).collect();
        p_norm(&shifted, p)
    };
    let (lo, hi) = tol.oracle_lambda_window;
    let best = golden_section(f, lo, hi, ORACLE_LAMBDA_RESOLUTION);
    // λ = 0 is always a candidate
    let at_zero = p_norm(x, p);
    let (lambda, value) = if at_zero <= best.value { (0.0, at_zero) } else { (best.x, best.value) };
    Ok(OrthogonalityVerdict { orthogonal: value >= at_zero - tol.residual_tol, witness: lambda })
}

/// The biorthogonal functionals `v^i` of a basis, stored as rows.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBasis {
    /// Rows of `B^{-T}`, tagged with the conjugate exponent.
    pub functionals: BasisMatrix,
    pub source: BasisMatrix,
}

impl DualBasis {
    /// `max |D B^T - I|`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let n = self.source.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = dot(self.functionals.row(i), self.source.row(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

/// `|det|` after scaling every row to unit Euclidean length, so the value
/// lies in `[0, 1]` whatever the row scales are.
pub fn normalized_determinant(b: &BasisMatrix) -> f64 {
    let mut m = b.to_matrix();
    for mut row in m.row_iter_mut() {
        let len = row.norm();
        if len > 0.0 {
            row /= len;
        }
    }
    m.determinant().abs()
}

pub fn dual_basis(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<DualBasis> {
    let det = normalized_determinant(b);
    if !(det > tol.rank_tol) {
        return Err(AuerbachError::Singular { det });
    }
    let inv = b
        .to_matrix()
        .try_inverse()
        .ok_or(AuerbachError::Singular { det })?;
    // roundoff in the inverse is cleared: the conjugate map at q < 2 magnifies it
    let cut = 16.0 * f64::EPSILON * inv.amax();
    let functionals = BasisMatrix::from_matrix(&inv.transpose(), b.p().dual())?
        .map_entries(|v| if v.abs() <= cut { 0.0 } else { v });
    Ok(DualBasis { functionals, source: b.clone() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuerbachReport {
    pub auerbach: bool,
    pub singular: bool,
    /// `|det|` of the Euclidean row-normalized matrix.
    pub normalized_determinant: f64,
    /// `max_i | ||v_i||_p - 1 |`.
    pub row_norm_residual: f64,
    /// `max_i | ||v^i||_q - 1 |`; absent when singular.
    pub dual_norm_residual: Option<f64>,
    /// `max |D B^T - I|`; absent when singular.
    pub biorthogonality_residual: Option<f64>,
    /// `max |B (^p B)^T - I|` for smooth norms.
    pub gradient_residual: Option<f64>,
    /// First failing check, if any.
    pub failure: Option<&'static str>,
}

/// True iff every row has unit `p`-norm and every biorthogonal functional
/// has unit `q`-norm; for smooth norms `B (^p B)^T = I` must hold as well.
pub fn is_auerbach(b: &BasisMatrix, tol: &ToleranceConfig) -> AuerbachReport {
    let eps = tol.residual_tol;
    let row_norm_residual = b.row_norms().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let det = normalized_determinant(b);
    let dual = dual_basis(b, tol).ok();
    let Some(dual) = dual else {
        return AuerbachReport {
            auerbach: false,
            singular: true,
            normalized_determinant: det,
            row_norm_residual,
            dual_norm_residual: None,
            biorthogonality_residual: None,
            gradient_residual: None,
            failure: Some("singular"),
        };
    };
    let dual_norm_residual = dual
        .functionals
        .row_norms()
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let biorthogonality_residual = dual.biorthogonality_residual();
    let gradient_residual = gradient_system_residual(b).ok().map(|r| r.max_abs());
    let rows_ok = row_norm_residual <= eps;
    let dual_ok = dual_norm_residual <= eps && biorthogonality_residual <= eps;
    let grad_ok = gradient_residual.is_none_or(|g| g <= eps);
    let failure = if !rows_ok {
        Some("row norms differ from 1")
    } else if !dual_ok {
        Some("dual functionals do not have unit norm")
    } else if !grad_ok {
        Some("rows are not Birkhoff-James orthogonal to the span of the others")
    } else {
        None
    };
    AuerbachReport {
        auerbach: failure.is_none(),
        singular: false,
        normalized_determinant: det,
        row_norm_residual,
        dual_norm_residual: Some(dual_norm_residual),
        biorthogonality_residual: Some(biorthogonality_residual),
        gradient_residual,
        failure,
    }
}

/// Entries `v_i · ^p v_j - δ_ij` for a smooth exponent.
pub(crate) struct GradientSystem {
    pub entries: Vec<f64>,
}

impl GradientSystem {
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn gradient_system_residual(b: &BasisMatrix) -> Result<GradientSystem> {
    let p = b.p();
    p.require_smooth("the gradient system")?;
    let n = b.n();
    let grads: Vec<Vec<f64>> = b.rows().map(|r| p_map(r, p)).collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for (j, g) in grads.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            entries.push(dot(b.row(i), g) - target);
        }
    }
    Ok(GradientSystem { entries })
}

/// Largest sine of the angle between the cofactor vector of row `i` (the
/// gradient of `det` with respect to that row) and `^p v_i`.
///
/// Zero exactly at the critical points of the determinant on the product of
/// unit spheres, which are the Auerbach bases.
pub fn criticality_residual(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let p = b.p();
    p.require_smooth("the criticality residual")?;
    // cofactor rows are det(B) times the rows of B^{-T}; the angle ignores the factor
    let dual = dual_basis(b, tol)?;
    let mut worst: f64 = 0.0;
    for i in 0..b.n() {
        let c = dual.functionals.row(i);
        let g = p_map(b.row(i), p)?;
        worst = worst.max(sine_between(c, &g));
    }
    Ok(worst)
}

fn sine_between(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let c = dot(a, b) / (na * nb);
    // ||â - (â·b̂) b̂|| is accurate near zero where sqrt(1 - c²) is not
    let resid: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| x / na - c * y / nb)
        .map(|d| d * d)
        .sum();
    resid.sqrt().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{hadamard2_basis, identity_basis, jinf_basis, jp_basis, solve_rp};

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn smooth_examples() {
        let tol = ToleranceConfig::default();
        assert!(bj_orthogonal_smooth(&[1.0, 1.0], &[1.0, -1.0], p(3.0), &tol).unwrap().orthogonal);
        let v = bj_orthogonal_smooth(&[1.0, 0.0], &[1.0, 0.0], p(3.0), &tol).unwrap();
        assert!(!v.orthogonal);
        assert!((v.witness - 1.0).abs() < 1e-15);
        let r = solve_rp(p(3.0)).unwrap().value;
        // y · ^p x = 1 - r - r² computed by hand
        assert!((1.0 - r - r * r).abs() < 1e-15);
        let v = bj_orthogonal_smooth(&[1.0, 1.0, -r], &[1.0, -r, 1.0], p(3.0), &tol).unwrap();
        assert!(v.orthogonal, "witness {}", v.witness);
        assert!(bj_orthogonal_smooth(&[0.0, 0.0], &[1.0, 0.0], p(3.0), &tol).is_err());
    }

    #[test]
    fn directional_examples() {
        let tol = ToleranceConfig::default();
        let inf = PExponent::INFINITY;
        assert!(bj_directional(&[1.0, 1.0, 1.0], &[-1.0, 1.0, 1.0], inf, &tol).unwrap().orthogonal);
        assert!(bj_directional(&[1.0, 1.0, 0.0], &[0.0, 0.0, 5.0], PExponent::ONE, &tol).unwrap().orthogonal);
        assert!(!bj_directional(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], PExponent::ONE, &tol).unwrap().orthogonal);
        assert!(bj_directional(&[1.0, 0.0], &[1.0, 0.0], p(3.0), &tol).is_err());
        assert!(bj_directional(&[0.0, 0.0], &[1.0, 0.0], inf, &tol).is_err());
    }

    #[test]
    fn oracle_examples() {
        let tol = ToleranceConfig::default();
        let v = bj_minimization_oracle(&[1.0, 0.0], &[0.0, 1.0], p(2.7), &tol).unwrap();
        assert!(v.orthogonal);
        assert!(v.witness.abs() < 1e-8);
        let v = bj_minimization_oracle(&[1.0, 1.0], &[1.0, 1.0], p(3.0), &tol).unwrap();
        assert!(!v.orthogonal);
        assert!((v.witness + 1.0).abs() < 1e-8);
        assert!(bj_minimization_oracle(&[1.0, 1.0], &[0.0, 0.0], p(3.0), &tol).is_err());
    }

    #[test]
    fn dual_basis_examples() {
        let tol = ToleranceConfig::default();
        let id = identity_basis(3, p(3.0)).unwrap();
        let d = dual_basis(&id, &tol).unwrap();
        assert_eq!(d.functionals.as_row_major(), id.as_row_major());
        assert_eq!(d.functionals.p(), p(1.5));

        for &pv in &[1.5, 3.0, 7.0] {
            let h = hadamard2_basis(p(pv));
            let d = dual_basis(&h, &tol).unwrap();
            let expected = hadamard2_basis(p(pv).dual());
            assert!(d.functionals.max_abs_diff(&expected) < 1e-15, "p = {pv}");
            assert!(d.biorthogonality_residual() < 1e-15);
        }

        let jp = jp_basis(p(3.0)).unwrap();
        let d = dual_basis(&jp, &tol).unwrap();
        for i in 0..3 {
            let g = p_map(jp.row(i), p(3.0)).unwrap();
            let f = d.functionals.row(i);
            for k in 0..3 {
                assert!((f[k] - g[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_dual() {
        let tol = ToleranceConfig::default();
        let b = BasisMatrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0]], p(3.0)).unwrap();
        assert!(matches!(dual_basis(&b, &tol), Err(AuerbachError::Singular { .. })));
        let report = is_auerbach(&b, &tol);
        assert!(!report.auerbach && report.singular);
        assert_eq!(report.failure, Some("singular"));
        assert!(matches!(criticality_residual(&b, &tol), Err(AuerbachError::Singular { .. })));
    }

    #[test]
    fn auerbach_examples() {
        let tol = ToleranceConfig::default();
        for n in 1..=5 {
            for pe in [PExponent::ONE, p(1.3), p(3.0), PExponent::INFINITY] {
                assert!(is_auerbach(&identity_basis(n, pe).unwrap(), &tol).auerbach);
            }
        }
        let report = is_auerbach(&jinf_basis(0.3).unwrap(), &tol);
        assert!(report.auerbach, "{report:?}");
        assert!(report.gradient_residual.is_none());
        let not_unit = BasisMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]], p(3.0)).unwrap();
        assert_eq!(is_auerbach(&not_unit, &tol).failure, Some("row norms differ from 1"));
    }

    #[test]
    fn criticality_examples() {
        let tol = ToleranceConfig::default();
        assert_eq!(criticality_residual(&identity_basis(3, p(3.0)).unwrap(), &tol).unwrap(), 0.0);
        assert!(criticality_residual(&jp_basis(p(3.0)).unwrap(), &tol).unwrap() < 1e-10);
        let skew = BasisMatrix::from_rows(
            vec![vec![1.0, 0.0, 0.0], vec![0.6, 0.8, 0.0], vec![0.0, 0.3, 0.9]],
            p(3.0),
        )
        .unwrap()
        .normalized_rows();
        assert!(!is_auerbach(&skew, &tol).auerbach);
        assert!(criticality_residual(&skew, &tol).unwrap() > 0.01);
        assert!(criticality_residual(&skew.with_p(PExponent::ONE), &tol).is_err());
    }
}
