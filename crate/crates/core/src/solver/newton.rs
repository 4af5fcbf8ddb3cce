use std::fmt;

use nalgebra::DVector;

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::orthogonality::is_auerbach;
use crate::solver::refine::refine_pattern;
use crate::solver::system::{jacobian, residual};
use crate::tolerance::ToleranceConfig;

/// Exponents closer than this to 2 are refused: at `p = 2` the solutions
/// form the orthogonal group rather than isolated points.
pub const NEAR_P2_MARGIN: f64 = 0.05;
pub const ARMIJO_BACKTRACK: f64 = 0.5;
pub const ARMIJO_SUFFICIENT_DECREASE: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;
/// Extra full Newton steps taken after reaching tolerance, each kept only
/// if it lowers the residual.
const POLISH_STEPS: usize = 3;
/// Reciprocal condition proxy `min |U_ii| / max |U_ii|` below which the
/// Jacobian is treated as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-13;
const BLOWUP: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Converged,
    Diverged,
    SingularJacobian,
    NearP2Refused,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::Diverged => "diverged",
            SolveStatus::SingularJacobian => "singular_jacobian",
            SolveStatus::NearP2Refused => "near_p2_refused",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Present only when `status` is `Converged`.
    pub solution: Option<BasisMatrix>,
    /// `max |x^(i) · ^p x^(j) - δ_ij|` at the final iterate.
    pub residual: f64,
    pub iterations: usize,
    pub seed: u64,
    pub status: SolveStatus,
}

pub(crate) fn flat_residual(x: &BasisMatrix) -> Result<DVector<f64>> {
    let r = residual(x)?;
    // row-major, matching the Jacobian's equation order
    Ok(DVector::from_iterator(r.len(), r.transpose().iter().copied()))
}

fn step_from(x: &BasisMatrix, delta: &DVector<f64>, t: f64) -> Result<BasisMatrix> {
    let data = x.as_row_major().iter().zip(delta.iter()).map(|(a, d)| a + t * d).collect();
    BasisMatrix::from_row_major(x.n(), data, x.p())
}

enum Direction {
    Step(DVector<f64>),
    Singular,
}

fn newton_direction(x: &BasisMatrix, f: &DVector<f64>) -> Result<Direction> {
    let lu = jacobian(x)?.lu();
    let u = lu.u();
    let diag = u.diagonal().map(f64::abs);
    let (lo, hi) = (diag.min(), diag.max());
    if !(hi > 0.0) || lo / hi < SINGULAR_PIVOT_RATIO {
        return Ok(Direction::Singular);
    }
    match lu.solve(&(-f)) {
        Some(d) if d.iter().all(|v| v.is_finite()) => Ok(Direction::Step(d)),
        _ => Ok(Direction::Singular),
    }
}

/// Damped Newton on `x^(i) · ^p x^(j) = δ_ij` starting from `seed_matrix`
/// (at `seed_matrix.p()`), with Armijo backtracking on the squared residual.
///
/// Deterministic in its input. Exponents below 2 are rejected; solve at
/// the conjugate exponent and dualize.
pub fn newton_solve(seed_matrix: &BasisMatrix, tol: &ToleranceConfig) -> Result<SolveReport> {
    let p = seed_matrix.p().require_smooth("newton_solve")?;
    let mut report = SolveReport {
        solution: None,
        residual: f64::NAN,
        iterations: 0,
        seed: 0,
        status: SolveStatus::Diverged,
    };
    if (p - 2.0).abs() < NEAR_P2_MARGIN {
        report.status = SolveStatus::NearP2Refused;
        return Ok(report);
    }
    if p < 2.0 {
        return Err(AuerbachError::Domain(format!(
            "newton_solve works for p > 2; got p = {p}, solve at the conjugate exponent and dualize"
        )));
    }

    let mut x = seed_matrix.clone();
    let mut f = flat_residual(&x)?;
    for iteration in 0..=tol.newton_max_iter {
        let r = f.amax();
        report.residual = r;
        report.iterations = iteration;
        if r <= tol.residual_tol {
            polish(&mut x, &mut f)?;
            refine_pattern(&mut x, &mut f)?;
            report.residual = f.amax();
            let verified = is_auerbach(&x, tol).auerbach;
            report.status = if verified { SolveStatus::Converged } else { SolveStatus::Diverged };
            report.solution = verified.then_some(x);
            return Ok(report);
        }
        if iteration == tol.newton_max_iter {
            break;
        }
        let delta = match newton_direction(&x, &f)? {
            Direction::Step(d) => d,
            Direction::Singular => {
                report.status = SolveStatus::SingularJacobian;
                return Ok(report);
            }
        };
        let phi = f.norm_squared();
        let mut t = 1.0;
        loop {
            let candidate = step_from(&x, &delta, t)?;
            let fc = flat_residual(&candidate)?;
            if fc.norm_squared() <= (1.0 - 2.0 * ARMIJO_SUFFICIENT_DECREASE * t) * phi {
                x = candidate;
                f = fc;
                break;
            }
            t *= ARMIJO_BACKTRACK;
            if t < MIN_STEP {
                report.status = SolveStatus::Diverged;
                return Ok(report);
            }
        }
        if x.as_row_major().iter().any(|v| v.abs() > BLOWUP) {
            report.status = SolveStatus::Diverged;
            return Ok(report);
        }
    }
    report.status = SolveStatus::Diverged;
    Ok(report)
}

fn polish(x: &mut BasisMatrix, f: &mut DVector<f64>) -> Result<()> {
    for _ in 0..POLISH_STEPS {
        let Direction::Step(delta) = newton_direction(x, f)? else {
            return Ok(());
        };
        let candidate = step_from(x, &delta, 1.0)?;
        let fc = flat_residual(&candidate)?;
        if fc.amax() < f.amax() {
            *x = candidate;
            *f = fc;
        } else {
            break;
        }
    }
    Ok(())
}
