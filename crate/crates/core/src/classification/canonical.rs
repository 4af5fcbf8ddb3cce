//! Canonical representatives under the group generated by negating and
//! permuting rows and columns.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::basis::BasisMatrix;
use crate::error::{AuerbachError, Result};
use crate::tolerance::ToleranceConfig;

/// Largest dimension for which the full orbit is searched.
pub const MAX_CANONICAL_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Identity,
    BlockH2,
    Jp,
    JinfFamily,
    Other,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Identity => "IDENTITY",
            ClassLabel::BlockH2 => "BLOCK_H2",
            ClassLabel::Jp => "JP",
            ClassLabel::JinfFamily => "JINF_FAMILY",
            ClassLabel::Other => "OTHER",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A quantized orbit representative. Equality, ordering and hashing look
/// only at the quantized entries.
#[derive(Clone, Debug)]
pub struct CanonicalClass {
    pub representative: BasisMatrix,
    key: Vec<i64>,
    pub label: Option<ClassLabel>,
}

impl CanonicalClass {
    pub fn n(&self) -> usize {
        self.representative.n()
    }

    /// Row-major quantized entries of the representative.
    pub fn key(&self) -> &[i64] {
        &self.key
    }

    pub fn with_label(mut self, label: ClassLabel) -> Self {
        self.label = Some(label);
        self
    }
}

impl PartialEq for CanonicalClass {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CanonicalClass {}

impl Hash for CanonicalClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for CanonicalClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.len().cmp(&other.key.len()).then_with(|| self.key.cmp(&other.key))
    }
}

pub(crate) fn quantize(b: &BasisMatrix, step: f64) -> Vec<i64> {
    b.as_row_major().iter().map(|v| (v / step).round() as i64).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Applies column permutation and signs, makes the first nonzero entry of
/// every row positive, and sorts the rows. `out` receives the row-major
/// result.
fn normalize_under(q: &[i64], n: usize, perm: &[usize], signs: u32, rows: &mut [Vec<i64>], out: &mut Vec<i64>) {
    for (i, row) in rows.iter_mut().enumerate() {
        for (k, &c) in perm.iter().enumerate() {
            let s = if signs >> k & 1 == 1 { -1 } else { 1 };
            row[k] = s * q[i * n + c];
        }
        if row.iter().find(|v| **v != 0).is_some_and(|v| *v < 0) {
            row.iter_mut().for_each(|v| *v = -*v);
        }
    }
    rows.sort_unstable();
    out.clear();
    for row in rows.iter() {
        out.extend_from_slice(row);
    }
}

/// Visits the row-normalized, row-sorted image of `q` under every signed
/// column permutation.
pub(crate) fn for_each_column_image(q: &[i64], n: usize, mut visit: impl FnMut(&[i64])) {
    let mut rows = vec![vec![0i64; n]; n];
    let mut out = Vec::with_capacity(n * n);
    for perm in permutations(n) {
        for signs in 0..(1u32 << n) {
            normalize_under(q, n, &perm, signs, &mut rows, &mut out);
            visit(&out);
        }
    }
}

pub(crate) fn canonical_key(q: &[i64], n: usize) -> Vec<i64> {
    let mut best: Option<Vec<i64>> = None;
    for_each_column_image(q, n, |img| {
        if best.as_deref().is_none_or(|b| img < b) {
            best = Some(img.to_vec());
        }
    });
    best.expect("the orbit is never empty")
}

/// Lexicographically smallest quantized matrix in the signed row/column
/// permutation orbit of `b`.
pub fn canonical_form(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<CanonicalClass> {
    let n = b.n();
    if n > MAX_CANONICAL_DIM {
        return Err(AuerbachError::TooLarge { n, max: MAX_CANONICAL_DIM });
    }
    let step = tol.quantization_step;
    let key = canonical_key(&quantize(b, step), n);
    let data = key.iter().map(|&k| k as f64 * step).collect();
    let representative = BasisMatrix::from_row_major(n, data, b.p())?;
    Ok(CanonicalClass { representative, key, label: None })
}

/// Whether two bases are equivalent, comparing canonical representatives
/// entrywise within a few quantization steps rather than by exact key.
pub fn equivalent(a: &BasisMatrix, b: &BasisMatrix, tol: &ToleranceConfig) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    let ca = canonical_form(a, tol)?;
    let cb = canonical_form(b, tol)?;
    Ok(ca.representative.max_abs_diff(&cb.representative) <= 4.0 * tol.quantization_step)
}

/// Number of distinct bases obtained from `class` when only row
/// permutations and row negations count as equivalences.
pub fn row_equivalence_orbit_size(class: &CanonicalClass) -> usize {
    let mut seen = BTreeSet::new();
    for_each_column_image(class.key(), class.n(), |img| {
        seen.insert(img.to_vec());
    });
    seen.len()
}
