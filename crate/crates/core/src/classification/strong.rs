//! Strong Auerbach bases: every subset of rows spans a copy of `l^m_p`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::orthogonality::is_auerbach;
use crate::tolerance::ToleranceConfig;

pub const MAX_STRONG_DIM: usize = 8;

fn require_non_hilbert(p: PExponent, what: &str) -> Result<f64> {
    let pf = p.require_smooth(what)?;
    if pf == 2.0 {
        return Err(AuerbachError::Domain(format!("{what} is not meaningful at p = 2")));
    }
    Ok(pf)
}

/// Per-vector coordinate supports, as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    pub supports: Vec<u32>,
}

impl SupportPattern {
    /// Entries with modulus at most `quantization_step` times the largest
    /// modulus of their vector count as zero.
    pub fn of(vectors: &[Vec<f64>], tol: &ToleranceConfig) -> Self {
        let supports = vectors
            .iter()
            .map(|v| {
                let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| x.abs() > tol.quantization_step * max)
                    .fold(0u32, |mask, (i, _)| mask | 1 << i)
            })
            .collect();
        SupportPattern { supports }
    }

    pub fn mutually_disjoint(&self) -> bool {
        let mut seen = 0u32;
        for &s in &self.supports {
            if seen & s != 0 {
                return false;
            }
            seen |= s;
        }
        true
    }
}

/// A unit vector whose supporting functional is parallel to it: all nonzero
/// moduli coincide.
pub fn is_spherical_point(x: &[f64], p: PExponent, tol: &ToleranceConfig) -> Result<bool> {
    require_non_hilbert(p, "spherical point test")?;
    let step = tol.quantization_step;
    let nonzero: Vec<f64> = x.iter().map(|v| v.abs()).filter(|v| *v > step).collect();
    let Some(first) = nonzero.first() else {
        return Ok(false);
    };
    Ok(nonzero.iter().all(|v| (v - first).abs() <= step))
}

/// Gram-based numerical rank data for the rows of `a`.
struct RowSpace {
    /// `a` restricted to the columns in a mask, Gram matrix eigen-decomposed.
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
    threshold: f64,
}

impl RowSpace {
    fn new(a: &DMatrix<f64>, cols: u32, threshold: f64) -> Self {
        let k = a.nrows();
        let mut sub = DMatrix::zeros(k, a.ncols());
        for j in (0..a.ncols()).filter(|j| cols >> j & 1 == 1) {
            sub.set_column(j, &a.column(j));
        }
        let gram = &sub * sub.transpose();
        RowSpace { eig: SymmetricEigen::new(gram), threshold }
    }

    fn rank(&self) -> usize {
        self.eig.eigenvalues.iter().filter(|l| l.max(0.0).sqrt() > self.threshold).count()
    }

    /// Coefficient vectors `c` with `c^T a_sub = 0`.
    fn left_null_space(&self) -> Vec<nalgebra::DVector<f64>> {
        self.eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, l)| l.max(0.0).sqrt() <= self.threshold)
            .map(|(i, _)| self.eig.eigenvectors.column(i).into_owned())
            .collect()
    }
}

fn support_of(a: &DMatrix<f64>, threshold: f64) -> u32 {
    (0..a.ncols())
        .filter(|&j| a.column(j).norm() > threshold)
        .fold(0u32, |m, j| m | 1 << j)
}

/// Rows `c^T a` for each null-space coefficient vector, normalized.
fn piece(a: &DMatrix<f64>, coeffs: &[nalgebra::DVector<f64>]) -> DMatrix<f64> {
    let rows: Vec<_> = coeffs
        .iter()
        .map(|c| {
            let r = c.transpose() * a;
            let n = r.norm();
            r / n
        })
        .collect();
    DMatrix::from_rows(&rows)
}

/// `a` has orthonormal-ish rows spanning `V`; `support` is the set of
/// coordinates where `V` lives.
fn decomposes(a: &DMatrix<f64>, support: u32, threshold: f64) -> bool {
    let k = a.nrows();
    if k == 1 || k == support.count_ones() as usize {
        return true;
    }
    let lowest = support & support.wrapping_neg();
    // subsets of the support that contain its lowest coordinate
    let rest = support & !lowest;
    let mut sub = rest;
    loop {
        let t = lowest | sub;
        if t != support {
            let complement = support & !t;
            let outside_t = RowSpace::new(a, complement, threshold);
            let outside_c = RowSpace::new(a, t, threshold);
            let dim_t = k - outside_t.rank();
            let dim_c = k - outside_c.rank();
            if dim_t >= 1 && dim_c >= 1 && dim_t + dim_c == k {
                let left = piece(a, &outside_t.left_null_space());
                let right = piece(a, &outside_c.left_null_space());
                return decomposes(&left, support_of(&left, threshold), threshold)
                    && decomposes(&right, support_of(&right, threshold), threshold);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    false
}

/// Whether the span of `vectors` is isometric to `l^m_p`, i.e. admits a basis
/// of vectors with mutually disjoint supports.
pub fn subspace_isometric_lp(vectors: &[Vec<f64>], p: PExponent, tol: &ToleranceConfig) -> Result<bool> {
    require_non_hilbert(p, "subspace isometry test")?;
    let m = vectors.len();
    let n = vectors.first().map_or(0, Vec::len);
    if m == 0 || vectors.iter().any(|v| v.len() != n) {
        return Err(AuerbachError::Shape("need at least one vector, all of the same length".into()));
    }
    if m > n || n > MAX_STRONG_DIM {
        return Err(AuerbachError::TooLarge { n: n.max(m), max: MAX_STRONG_DIM });
    }
    let rows: Vec<_> = vectors
        .iter()
        .map(|v| {
            let r = nalgebra::RowDVector::from_row_slice(v);
            let len = r.norm();
            if len > 0.0 { r / len } else { r }
        })
        .collect();
    let a = DMatrix::from_rows(&rows);
    let threshold = tol.rank_tol;
    let full = RowSpace::new(&a, (1u32 << n) - 1, threshold);
    if full.rank() < m {
        return Err(AuerbachError::Domain(format!(
            "vectors are linearly dependent (rank {} < {m})",
            full.rank()
        )));
    }
    Ok(decomposes(&a, support_of(&a, threshold), threshold))
}

/// Checks every nonempty subset of rows with [`subspace_isometric_lp`].
pub fn is_strong_auerbach(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<bool> {
    require_non_hilbert(b.p(), "strong Auerbach test")?;
    let n = b.n();
    if n > MAX_STRONG_DIM {
        return Err(AuerbachError::TooLarge { n, max: MAX_STRONG_DIM });
    }
    let report = is_auerbach(b, tol);
    if !report.auerbach {
        return Err(AuerbachError::Precondition(format!(
            "strong test needs an Auerbach basis ({})",
            report.failure.unwrap_or("?")
        )));
    }
    let rows = b.to_rows();
    let verdicts: Vec<Result<bool>> = (1u32..(1 << n))
        .into_par_iter()
        .filter(|mask| mask.count_ones() > 1)
        .map(|mask| {
            let subset: Vec<Vec<f64>> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect();
            subspace_isometric_lp(&subset, b.p(), tol)
        })
        .collect();
    for v in verdicts {
        if !v? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongVectorType {
    /// `(1, 0, …, 0)`
    Axis,
    /// `(2^{-1/p}, 2^{-1/p}, 0, …, 0)`
    Pair,
    None,
}

pub fn classify_strong_vector(v: &[f64], p: PExponent, tol: &ToleranceConfig) -> Result<StrongVectorType> {
    let pf = require_non_hilbert(p, "strong vector classification")?;
    let eps = tol.quantization_step;
    let mut sorted: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let tail_zero = |from: usize| sorted.iter().skip(from).all(|x| *x <= eps);
    let c = 2f64.powf(-1.0 / pf);
    Ok(if !sorted.is_empty() && (sorted[0] - 1.0).abs() <= eps && tail_zero(1) {
        StrongVectorType::Axis
    } else if sorted.len() >= 2
        && (sorted[0] - c).abs() <= eps
        && (sorted[1] - c).abs() <= eps
        && tail_zero(2)
    {
        StrongVectorType::Pair
    } else {
        StrongVectorType::None
    })
}
