//! The square system `x^(i) · ^p x^(j) = δ_ij` in the `n²` unknown entries
//! of a basis matrix, and its analytic Jacobian.

use nalgebra::DMatrix;

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::lp::{abs_pow, dot, p_map};

fn require_p_at_least_two(b: &BasisMatrix) -> Result<f64> {
    let p = b.p().require_smooth("the Auerbach system")?;
    if p < 2.0 {
        return Err(AuerbachError::Domain(format!(
            "the Auerbach system is solved for p >= 2 only (got p = {p}); dualize instead"
        )));
    }
    Ok(p)
}

/// Entry `(i, j)` is `x^(i) · ^p x^(j) - δ_ij`.
pub fn residual(x: &BasisMatrix) -> Result<DMatrix<f64>> {
    require_p_at_least_two(x)?;
    let n = x.n();
    let grads: Vec<Vec<f64>> = x.rows().map(|r| p_map(r, x.p())).collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        dot(x.row(i), &grads[j]) - if i == j { 1.0 } else { 0.0 }
    }))
}

/// `∂f_ij / ∂x^(a)_k` with equations ordered `(i, j) ↦ i n + j` and unknowns
/// `(a, k) ↦ a n + k`, both row-major.
pub fn jacobian(x: &BasisMatrix) -> Result<DMatrix<f64>> {
    let p = require_p_at_least_two(x)?;
    let n = x.n();
    let grads: Vec<Vec<f64>> = x.rows().map(|r| p_map(r, x.p())).collect::<Result<_>>()?;
    // d/dt (t |t|^{p-2}) = (p - 1) |t|^{p-2}
    let slopes: Vec<Vec<f64>> = x
        .rows()
        .map(|r| r.iter().map(|&v| (p - 1.0) * abs_pow(v, p - 2.0)).collect())
        .collect();
    let mut jac = DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let eq = i * n + j;
            if i == j {
                for k in 0..n {
                    jac[(eq, i * n + k)] = p * grads[i][k];
                }
            } else {
                for k in 0..n {
                    jac[(eq, i * n + k)] = grads[j][k];
                    jac[(eq, j * n + k)] = slopes[j][k] * x.get(i, k);
                }
            }
        }
    }
    Ok(jac)
}
