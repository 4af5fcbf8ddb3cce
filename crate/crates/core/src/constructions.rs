//! Explicit Auerbach bases: identity, the 2×2 Hadamard basis, block sums,
//! the nonstationary `J_p` of `l^3_p`, the `J_∞(t)` family, Sylvester
//! doubling, and the stationary bases coming from weighing matrices.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::basis::BasisMatrix;
use crate::classification::canonical::{canonical_form, CanonicalClass, ClassLabel};
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::orthogonality::{gradient_system_residual, is_auerbach};
use crate::scalar::increasing_root;
use crate::tolerance::ToleranceConfig;

/// Residual bound asserted on every `J_p` that [`jp_basis`] returns.
pub const JP_RESIDUAL_BOUND: f64 = 1e-10;

/// The constant `r_p` of the `J_p` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RpRoot {
    pub p: f64,
    /// Root in `(0, 1]` of `r^{p-1} + r - 1`.
    pub value: f64,
    /// `|r^{p-1} + r - 1|` at `value`.
    pub residual: f64,
    /// `|1 - r - r^p|` at `value`, the alternative normalization with
    /// exponent `p`; nonzero except in degenerate cases.
    pub exponent_p_residual: f64,
}

pub fn solve_rp(p: PExponent) -> Result<RpRoot> {
    let pf = p.require_smooth("r_p")?;
    let g = |r: f64| r.powf(pf - 1.0) + r - 1.0;
    let dg = |r: f64| (pf - 1.0) * r.powf(pf - 2.0) + 1.0;
    let value = increasing_root(g, dg, 0.0, 1.0);
    Ok(RpRoot {
        p: pf,
        value,
        residual: g(value).abs(),
        exponent_p_residual: (1.0 - value - value.powf(pf)).abs(),
    })
}

pub fn identity_basis(n: usize, p: PExponent) -> Result<BasisMatrix> {
    let data = (0..n * n).map(|k| if k / n.max(1) == k % n.max(1) { 1.0 } else { 0.0 }).collect();
    BasisMatrix::from_row_major(n, data, p)
}

/// `2^{-1/p} [[1, 1], [1, -1]]`.
pub fn hadamard2_basis(p: PExponent) -> BasisMatrix {
    let c = 2f64.powf(-p.reciprocal());
    BasisMatrix::from_row_major(2, vec![c, c, c, -c], p).expect("2x2 is square")
}

/// Direct sum: the parts sit on consecutive, disjoint coordinate blocks.
pub fn block_basis(parts: &[BasisMatrix]) -> Result<BasisMatrix> {
    let first = parts
        .first()
        .ok_or_else(|| AuerbachError::Shape("block_basis needs at least one part".into()))?;
    let p = first.p();
    if let Some(bad) = parts.iter().find(|b| b.p() != p) {
        return Err(AuerbachError::Domain(format!(
            "block parts must share the exponent: found p = {} and p = {}",
            p,
            bad.p()
        )));
    }
    let n: usize = parts.iter().map(BasisMatrix::n).sum();
    let mut data = vec![0.0; n * n];
    let mut offset = 0;
    for part in parts {
        for i in 0..part.n() {
            for j in 0..part.n() {
                data[(offset + i) * n + offset + j] = part.get(i, j);
            }
        }
        offset += part.n();
    }
    BasisMatrix::from_row_major(n, data, p)
}

#[derive(Clone, Debug)]
pub struct JpConstruction {
    pub basis: BasisMatrix,
    pub r: RpRoot,
    /// `(2 + r^p)^{-1/p}`.
    pub scale: f64,
    /// `max |B (^p B)^T - I|`.
    pub gradient_residual: f64,
}

/// `J_p`, with both defining-equation residuals and the end-to-end system
/// residual recorded.
pub fn jp_construction(p: PExponent) -> Result<JpConstruction> {
    let pf = p.require_smooth("J_p")?;
    let r = solve_rp(p)?;
    let rv = r.value;
    let scale = (2.0 + rv.powf(pf)).powf(-1.0 / pf);
    let (a, b) = (scale, -rv * scale);
    let basis = BasisMatrix::from_row_major(3, vec![a, a, b, a, b, a, b, a, a], p)?;
    let gradient_residual = gradient_system_residual(&basis)?.max_abs();
    if !(gradient_residual <= JP_RESIDUAL_BOUND) {
        return Err(AuerbachError::Consistency(format!(
            "J_p at p = {pf} has system residual {gradient_residual:e}"
        )));
    }
    Ok(JpConstruction { basis, r, scale, gradient_residual })
}

pub fn jp_basis(p: PExponent) -> Result<BasisMatrix> {
    jp_construction(p).map(|c| c.basis)
}

/// `[[1, 1, 1], [-1, 1, 1], [t, 1, -1]]` in `l^3_∞`.
pub fn jinf_basis(t: f64) -> Result<BasisMatrix> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(AuerbachError::Domain(format!("J_inf(t) needs -1 <= t <= 1, got t = {t}")));
    }
    BasisMatrix::from_row_major(
        3,
        vec![1.0, 1.0, 1.0, -1.0, 1.0, 1.0, t, 1.0, -1.0],
        PExponent::INFINITY,
    )
}

/// `2^{-1/p} [[B, B], [B, -B]]`, an Auerbach basis of `l^{2n}_p` whenever `B`
/// is one of `l^n_p`.
pub fn sylvester_double(b: &BasisMatrix, tol: &ToleranceConfig) -> Result<BasisMatrix> {
    let p = b.p();
    if p.is_infinity() {
        return Err(AuerbachError::Domain("Sylvester doubling needs a finite exponent".into()));
    }
    let report = is_auerbach(b, tol);
    if !report.auerbach {
        return Err(AuerbachError::Precondition(format!(
            "Sylvester doubling needs a verified Auerbach basis ({})",
            report.failure.unwrap_or("unverified")
        )));
    }
    let n = b.n();
    let m = 2 * n;
    let c = 2f64.powf(-p.reciprocal());
    let mut data = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let v = c * b.get(i, j);
            data[i * m + j] = v;
            data[i * m + n + j] = v;
            data[(n + i) * m + j] = v;
            data[(n + i) * m + n + j] = -v;
        }
    }
    let doubled = BasisMatrix::from_row_major(m, data, p)?;
    let check = is_auerbach(&doubled, tol);
    if !check.auerbach {
        return Err(AuerbachError::Consistency(format!(
            "Sylvester double failed verification ({})",
            check.failure.unwrap_or("?")
        )));
    }
    Ok(doubled)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeighingReport {
    pub is_stationary: bool,
    /// `m` with `W W^T = m I`, when it exists.
    pub weight: Option<u64>,
}

/// Whether `w` is a weighing matrix: square, entries in `{0, ±1}`, and
/// `W W^T = m I` for an integer `m >= 1`.
pub fn weighing_check(w: &[Vec<i64>]) -> WeighingReport {
    let no = WeighingReport { is_stationary: false, weight: None };
    let n = w.len();
    if n == 0 || w.iter().any(|r| r.len() != n || r.iter().any(|v| !(-1..=1).contains(v))) {
        return no;
    }
    let gram = |i: usize, j: usize| -> i64 { w[i].iter().zip(&w[j]).map(|(a, b)| a * b).sum() };
    let m = gram(0, 0);
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { m } else { 0 };
            if gram(i, j) != want {
                return no;
            }
        }
    }
    WeighingReport { is_stationary: m >= 1, weight: Some(m as u64) }
}

/// Rows rescaled so the smallest nonzero modulus is one, rounded to
/// `{0, ±1}`; `None` when some entry is not within `quantization_step` of
/// the grid.
fn stationary_pattern(b: &BasisMatrix, tol: &ToleranceConfig) -> Option<Vec<Vec<i64>>> {
    let step = tol.quantization_step;
    b.rows()
        .map(|row| {
            let max = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if max == 0.0 {
                return None;
            }
            let min = row
                .iter()
                .map(|v| v.abs())
                .filter(|v| *v > step * max)
                .fold(f64::INFINITY, f64::min);
            row.iter()
                .map(|v| {
                    let s = v / min;
                    let k = s.round();
                    ((s - k).abs() <= step && k.abs() <= 1.0).then_some(k as i64)
                })
                .collect()
        })
        .collect()
}

/// A basis is stationary when, up to row scaling, it is a `{0, ±1}` matrix
/// with mutually orthogonal rows.
pub fn is_stationary(b: &BasisMatrix, tol: &ToleranceConfig) -> bool {
    stationary_pattern(b, tol).is_some_and(|w| weighing_rows_orthogonal(&w))
}

fn weighing_rows_orthogonal(w: &[Vec<i64>]) -> bool {
    (0..w.len()).all(|i| {
        (i + 1..w.len()).all(|j| w[i].iter().zip(&w[j]).map(|(a, b)| a * b).sum::<i64>() == 0)
    })
}

pub const MAX_STATIONARY_DIM: usize = 5;

/// All classes of `n×n` matrices with nonzero, mutually orthogonal rows in
/// `{0, ±1}^n`. Representatives are the raw patterns, which are already
/// Auerbach bases of `l^n_∞`; use [`BasisMatrix::renormalized`] for other
/// exponents.
pub fn enumerate_stationary(n: usize, tol: &ToleranceConfig) -> Result<Vec<CanonicalClass>> {
    if n == 0 || n > MAX_STATIONARY_DIM {
        return Err(AuerbachError::Domain(format!(
            "stationary enumeration supports 1 <= n <= {MAX_STATIONARY_DIM}, got {n}"
        )));
    }
    // rows with first nonzero entry +1, in increasing lexicographic order
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let row: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if row.iter().find(|v| **v != 0) == Some(&1) {
            candidates.push(row);
        }
    }
    candidates.sort();

    let orth = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() == 0;
    let found: BTreeSet<Vec<i64>> = (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut keys = BTreeSet::new();
            let mut chosen = vec![first];
            extend_frame(&candidates, &orth, n, &mut chosen, &mut keys);
            keys
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });

    let mut out = Vec::with_capacity(found.len());
    for key in found {
        let data = key.iter().map(|&v| v as f64).collect();
        let pattern = BasisMatrix::from_row_major(n, data, PExponent::INFINITY)?;
        let mut class = canonical_form(&pattern, tol)?;
        if n == 1 || class == canonical_form(&identity_basis(n, PExponent::INFINITY)?, tol)? {
            class.label = Some(ClassLabel::Identity);
        }
        out.push(class);
    }
    Ok(out)
}

fn extend_frame(
    candidates: &[Vec<i64>],
    orth: &impl Fn(&[i64], &[i64]) -> bool,
    n: usize,
    chosen: &mut Vec<usize>,
    keys: &mut BTreeSet<Vec<i64>>,
) {
    if chosen.len() == n {
        let q: Vec<i64> = chosen.iter().flat_map(|&i| candidates[i].iter().copied()).collect();
        keys.insert(crate::classification::canonical::canonical_key(&q, n));
        return;
    }
    let last = *chosen.last().expect("seeded with a first row");
    for next in last + 1..candidates.len() {
        if chosen.iter().all(|&i| orth(&candidates[i], &candidates[next])) {
            chosen.push(next);
            extend_frame(candidates, orth, n, chosen, keys);
            chosen.pop();
        }
    }
}

/// A named construction used for seeding and labelling.
#[derive(Clone, Debug)]
pub struct NamedBasis {
    pub name: String,
    pub label: ClassLabel,
    pub basis: BasisMatrix,
}

/// Every explicit construction of dimension `n` at a finite exponent:
/// block sums of `I_1`, `H_2` and `J_p`, Sylvester doubles of lower
/// constructions, and the stationary patterns. Deduplicated by class.
pub fn known_bases(n: usize, p: PExponent, tol: &ToleranceConfig) -> Result<Vec<NamedBasis>> {
    p.require_smooth("known_bases")?;
    if n == 0 || n > crate::classification::canonical::MAX_CANONICAL_DIM {
        return Err(AuerbachError::Domain(format!("known_bases supports 1 <= n <= 6, got {n}")));
    }
    let mut out: Vec<NamedBasis> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |name: String, label: ClassLabel, basis: BasisMatrix, out: &mut Vec<NamedBasis>| -> Result<()> {
        if seen.insert(canonical_form(&basis, tol)?) {
            out.push(NamedBasis { name, label, basis });
        }
        Ok(())
    };

    // compositions with non-increasing part sizes from {3, 2, 1}
    let parts_jp = jp_basis(p)?;
    let h2 = hadamard2_basis(p);
    let i1 = identity_basis(1, p)?;
    for a in 0..=n / 3 {
        for b in 0..=(n - 3 * a) / 2 {
            let c = n - 3 * a - 2 * b;
            let mut parts = Vec::new();
            let mut names = Vec::new();
            if c > 0 {
                parts.extend(std::iter::repeat_n(i1.clone(), c));
                names.push(format!("I{c}"));
            }
            parts.extend(std::iter::repeat_n(h2.clone(), b));
            parts.extend(std::iter::repeat_n(parts_jp.clone(), a));
            names.extend(std::iter::repeat_n("H2".to_string(), b));
            names.extend(std::iter::repeat_n("Jp".to_string(), a));
            let label = match (a, b) {
                (0, 0) => ClassLabel::Identity,
                (0, 1) => ClassLabel::BlockH2,
                (1, 0) => ClassLabel::Jp,
                _ => ClassLabel::Other,
            };
            push(names.join("+"), label, block_basis(&parts)?, &mut out)?;
        }
    }
    if n % 2 == 0 {
        for half in known_bases(n / 2, p, tol)? {
            let doubled = sylvester_double(&half.basis, tol)?;
            push(format!("sylvester({})", half.name), ClassLabel::Other, doubled, &mut out)?;
        }
    }
    if n <= MAX_STATIONARY_DIM {
        for (k, class) in enumerate_stationary(n, tol)?.into_iter().enumerate() {
            let basis = class.representative.map_entries(f64::round).renormalized(p);
            push(format!("stationary#{k}"), ClassLabel::Other, basis, &mut out)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::canonical::equivalent;
    use crate::orthogonality::criticality_residual;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn rp_closed_forms() {
        assert_eq!(solve_rp(p(2.0)).unwrap().value, 0.5);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let r3 = solve_rp(p(3.0)).unwrap();
        assert!((r3.value - golden).abs() < 1e-15);
        assert!(r3.residual <= 1e-14);
        // with exponent p the same r is off: r³ + r - 1 ≠ 0 at the golden ratio
        assert!(r3.exponent_p_residual > 0.1);
        assert!(solve_rp(PExponent::INFINITY).is_err());
    }

    #[test]
    fn hadamard_and_blocks() {
        let h = hadamard2_basis(p(2.0));
        for v in h.as_row_major() {
            assert!((v.abs() - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let b = block_basis(&[identity_basis(1, p(3.0)).unwrap(), hadamard2_basis(p(3.0))]).unwrap();
        let c = 2f64.powf(-1.0 / 3.0);
        let expected = vec![1.0, 0.0, 0.0, 0.0, c, c, 0.0, c, -c];
        assert_eq!(b.as_row_major(), expected.as_slice());
        assert!(is_auerbach(&b, &ToleranceConfig::default()).auerbach);
        assert!(block_basis(&[identity_basis(1, p(3.0)).unwrap(), hadamard2_basis(p(4.0))]).is_err());
        assert!(block_basis(&[]).is_err());
    }

    #[test]
    fn jp_at_three() {
        let c = jp_construction(p(3.0)).unwrap();
        assert!((c.r.value - 0.6180340).abs() < 1e-7);
        // 2 + r³ = 1 + 2r = √5 at p = 3
        assert!((c.scale - 5f64.powf(-1.0 / 6.0)).abs() < 1e-15);
        assert!((c.scale - 0.7647245).abs() < 1e-7);
        assert!((c.r.value.powi(3) - (2.0 * c.r.value - 1.0)).abs() < 1e-15);
        assert!(c.gradient_residual <= 1e-10);
    }

    #[test]
    fn jp_at_two_is_orthogonal() {
        let b = jp_basis(p(2.0)).unwrap();
        let m = b.to_matrix();
        let gram = &m * m.transpose();
        assert!((gram - nalgebra::DMatrix::identity(3, 3)).amax() < 1e-15);
        let first = b.row(0);
        for (a, e) in first.iter().zip([2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0]) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn jinf_domain() {
        assert!(jinf_basis(2.0).is_err());
        assert!(jinf_basis(-1.0001).is_err());
        let tol = ToleranceConfig::default();
        for t in [-1.0, 0.0, 1.0] {
            assert!(is_auerbach(&jinf_basis(t).unwrap(), &tol).auerbach);
        }
    }

    #[test]
    fn sylvester_examples() {
        let tol = ToleranceConfig::default();
        let one = identity_basis(1, p(3.0)).unwrap();
        assert!(sylvester_double(&one, &tol).unwrap().max_abs_diff(&hadamard2_basis(p(3.0))) < 1e-15);
        let six = sylvester_double(&jp_basis(p(3.0)).unwrap(), &tol).unwrap();
        assert_eq!(six.n(), 6);
        assert!(is_auerbach(&six, &tol).gradient_residual.unwrap() <= 1e-10);
        let four = sylvester_double(&hadamard2_basis(p(4.0)), &tol).unwrap();
        assert!(is_auerbach(&four, &tol).auerbach);
        let bad = BasisMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.0, 1.0]], p(3.0)).unwrap();
        assert!(matches!(sylvester_double(&bad, &tol), Err(AuerbachError::Precondition(_))));
    }

    #[test]
    fn weighing_examples() {
        assert_eq!(
            weighing_check(&[vec![1, 1], vec![1, -1]]),
            WeighingReport { is_stationary: true, weight: Some(2) }
        );
        assert_eq!(weighing_check(&[vec![1, 0], vec![0, 1]]).weight, Some(1));
        assert!(!weighing_check(&[vec![1, 1], vec![1, 0]]).is_stationary);
        assert!(!weighing_check(&[vec![2, 0], vec![0, 2]]).is_stationary);
        // conference matrix of order 4, weight 3
        let c4 = [vec![0, 1, 1, 1], vec![1, 0, 1, -1], vec![1, -1, 0, 1], vec![1, 1, -1, 0]];
        assert_eq!(weighing_check(&c4).weight, Some(3));
    }

    #[test]
    fn stationarity() {
        let tol = ToleranceConfig::default();
        assert!(is_stationary(&hadamard2_basis(p(3.0)), &tol));
        assert!(is_stationary(&identity_basis(4, p(3.0)).unwrap(), &tol));
        assert!(!is_stationary(&jp_basis(p(3.0)).unwrap(), &tol));
    }

    #[test]
    fn stationary_small_dimensions() {
        let tol = ToleranceConfig::default();
        assert_eq!(enumerate_stationary(1, &tol).unwrap().len(), 1);
        let two = enumerate_stationary(2, &tol).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().any(|c| equivalent(&c.representative, &hadamard2_basis(PExponent::INFINITY), &tol).unwrap()));
        assert!(enumerate_stationary(0, &tol).is_err());
        assert!(enumerate_stationary(6, &tol).is_err());
    }

    #[test]
    fn known_bases_are_auerbach_and_critical() {
        let tol = ToleranceConfig::default();
        for n in 1..=4 {
            for b in known_bases(n, p(3.0), &tol).unwrap() {
                assert!(is_auerbach(&b.basis, &tol).auerbach, "{}", b.name);
                assert!(criticality_residual(&b.basis, &tol).unwrap() <= 1e-8, "{}", b.name);
            }
        }
    }
}
