//! Norms, the gradient map `x ↦ (x_j |x_j|^{p-2})_j` and the semi-inner
//! product of `l^n_p`.

use std::ops::Deref;

use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;

/// A nonempty vector of finite reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(AuerbachError::Shape("vector must have at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|c| !c.is_finite()) {
            return Err(AuerbachError::Domain(format!("non-finite vector component {bad}")));
        }
        Ok(Vector(components))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = AuerbachError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

/// `x |x|^{e}` evaluated as `x · exp(e ln|x|)`, with `0 ↦ 0` for every `e`.
#[inline]
pub(crate) fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (e * x.abs().ln()).exp()
    }
}

/// `|x|^{e}` with `0 ↦ 0`.
#[inline]
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (e * x.abs().ln()).exp()
    }
}

pub fn p_norm(x: &[f64], p: PExponent) -> f64 {
    if p.is_one() {
        return x.iter().map(|v| v.abs()).sum();
    }
    let max = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    match p.finite() {
        None => max,
        Some(_) if max == 0.0 => 0.0,
        Some(p) => {
            // scaled by the largest modulus so no term overflows or underflows
            let s: f64 = x.iter().map(|v| (v.abs() / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
    }
}

/// The gradient map `^p x`, componentwise `x_j |x_j|^{p-2}`.
pub fn p_map(x: &[f64], p: PExponent) -> Result<Vec<f64>> {
    let p = p.require_smooth("the gradient map")?;
    Ok(x.iter().map(|&v| signed_pow(v, p - 2.0)).collect())
}

/// `[y, x] = (Σ y_j x_j |x_j|^{p-2}) / ||x||_p^{p-2}`.
pub fn semi_inner_product(y: &[f64], x: &[f64], p: PExponent) -> Result<f64> {
    let pf = p.require_smooth("the semi-inner product")?;
    if y.len() != x.len() {
        return Err(AuerbachError::Shape(format!(
            "length mismatch: {} vs {}",
            y.len(),
            x.len()
        )));
    }
    let norm = p_norm(x, p);
    if norm == 0.0 {
        return Err(AuerbachError::Domain("semi-inner product against the zero vector".into()));
    }
    let g = p_map(x, p)?;
    let dot: f64 = y.iter().zip(&g).map(|(a, b)| a * b).sum();
    Ok(dot / norm.powf(pf - 2.0))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
