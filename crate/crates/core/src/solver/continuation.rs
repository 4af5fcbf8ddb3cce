//! Tracking solution classes as `p` moves, by natural-parameter
//! continuation with a Newton corrector.

use std::collections::BTreeSet;

use crate::basis::BasisMatrix;
use crate::classification::{canonical_form, CanonicalClass};
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::orthogonality::is_auerbach;
use crate::solver::newton::{newton_solve, SolveStatus, NEAR_P2_MARGIN};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug)]
pub struct TrackedPath {
    pub start: CanonicalClass,
    /// Class at each grid point up to the break, `None` afterwards.
    pub classes: Vec<Option<CanonicalClass>>,
    /// System residual at each grid point reached.
    pub residuals: Vec<f64>,
    /// First grid index where the corrector failed.
    pub broken_at: Option<usize>,
    pub endpoint: Option<BasisMatrix>,
}

impl TrackedPath {
    pub fn survived(&self) -> bool {
        self.broken_at.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct ContinuationTrace {
    pub p_grid: Vec<f64>,
    /// Distinct classes among unbroken paths at each grid point.
    pub class_counts: Vec<usize>,
    pub paths: Vec<TrackedPath>,
}

impl ContinuationTrace {
    pub fn all_survived(&self) -> bool {
        self.paths.iter().all(TrackedPath::survived)
    }

    pub fn max_residual(&self) -> f64 {
        self.paths.iter().flat_map(|p| p.residuals.iter()).fold(0.0, |m, v| m.max(*v))
    }
}

/// Geometric grid of `steps + 1` exponents from `p0` to `p1`.
pub fn geometric_grid(p0: f64, p1: f64, steps: usize) -> Vec<f64> {
    let ratio = p1 / p0;
    (0..=steps)
        .map(|k| if k == steps { p1 } else { p0 * ratio.powf(k as f64 / steps as f64) })
        .collect()
}

/// Follows every start basis (all verified at the same `p0 > 2`) to `p1`,
/// rescaling rows to the next exponent and re-solving at each grid point.
pub fn continuation_track(
    starts: &[BasisMatrix],
    p1: f64,
    steps: usize,
    tol: &ToleranceConfig,
) -> Result<ContinuationTrace> {
    let first = starts
        .first()
        .ok_or_else(|| AuerbachError::Precondition("continuation needs at least one start basis".into()))?;
    let p0 = first.p().require_smooth("continuation")?;
    let lower = 2.0 + NEAR_P2_MARGIN;
    if p0 < lower || !(p1 >= lower) || !p1.is_finite() {
        return Err(AuerbachError::Domain(format!(
            "continuation runs on p > {lower}; got p0 = {p0}, p1 = {p1}"
        )));
    }
    if steps == 0 {
        return Err(AuerbachError::Domain("continuation needs at least one step".into()));
    }
    for b in starts {
        if b.p().finite() != Some(p0) {
            return Err(AuerbachError::Precondition("all start bases must share p0".into()));
        }
        let report = is_auerbach(b, tol);
        if !report.auerbach {
            return Err(AuerbachError::Precondition(format!(
                "start basis is not Auerbach at p0 ({})",
                report.failure.unwrap_or("?")
            )));
        }
    }

    let p_grid = geometric_grid(p0, p1, steps);
    let mut paths = Vec::with_capacity(starts.len());
    for start in starts {
        let start_class = canonical_form(start, tol)?;
        let start_residual = crate::solver::system::residual(start)?.amax();
        let mut classes = vec![Some(start_class.clone())];
        let mut residuals = vec![start_residual];
        let mut current = start.clone();
        let mut broken_at = None;
        for (k, &p) in p_grid.iter().enumerate().skip(1) {
            let predictor = current.renormalized(PExponent::new(p)?);
            let report = newton_solve(&predictor, tol)?;
            match (report.status, report.solution) {
                (SolveStatus::Converged, Some(sol)) => {
                    classes.push(Some(canonical_form(&sol, tol)?));
                    residuals.push(report.residual);
                    current = sol;
                }
                _ => {
                    broken_at = Some(k);
                    break;
                }
            }
        }
        classes.resize(p_grid.len(), None);
        let endpoint = broken_at.is_none().then_some(current);
        paths.push(TrackedPath { start: start_class, classes, residuals, broken_at, endpoint });
    }

    let class_counts = (0..p_grid.len())
        .map(|k| {
            paths
                .iter()
                .filter_map(|path| path.classes[k].as_ref())
                .collect::<BTreeSet<_>>()
                .len()
        })
        .collect();
    Ok(ContinuationTrace { p_grid, class_counts, paths })
}
