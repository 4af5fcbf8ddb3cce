//! Pattern refinement of a converged iterate.
//!
//! Near a degenerate root Newton stops with a tiny residual while entries
//! that should coincide still differ in the fifth decimal. Grouping entries
//! by modulus, pinning the near-zero group to 0 and re-solving for one value
//! per group recovers the root to working precision.

use nalgebra::DMatrix;
use nalgebra::DVector;

use crate::basis::BasisMatrix;
use crate::error::Result;
use crate::solver::newton::flat_residual;
use crate::solver::system::jacobian;

/// Moduli closer than this fall into the same group.
const GROUP_GAP: f64 = 1e-4;
const MAX_STEPS: usize = 30;
const ACCEPT_FLOOR: f64 = 1e-15;

struct Pattern {
    /// Group of each entry (row-major), `None` for pinned zeros.
    group: Vec<Option<usize>>,
    sign: Vec<f64>,
    values: DVector<f64>,
}

fn pattern_of(x: &BasisMatrix) -> Pattern {
    let data = x.as_row_major();
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| data[a].abs().total_cmp(&data[b].abs()));
    let mut group = vec![None; data.len()];
    let mut sums: Vec<(f64, usize)> = Vec::new();
    let mut prev: Option<f64> = None;
    for &e in &order {
        let m = data[e].abs();
        if m <= GROUP_GAP {
            continue;
        }
        if prev.is_none_or(|q| m - q > GROUP_GAP) {
            sums.push((0.0, 0));
        }
        let g = sums.len() - 1;
        sums[g].0 += m;
        sums[g].1 += 1;
        group[e] = Some(g);
        prev = Some(m);
    }
    Pattern {
        group,
        sign: data.iter().map(|v| v.signum()).collect(),
        values: DVector::from_iterator(sums.len(), sums.iter().map(|(s, c)| s / *c as f64)),
    }
}

fn assemble(x: &BasisMatrix, pat: &Pattern) -> Result<BasisMatrix> {
    let data = pat
        .group
        .iter()
        .zip(&pat.sign)
        .map(|(g, s)| g.map_or(0.0, |g| s * pat.values[g]))
        .collect();
    BasisMatrix::from_row_major(x.n(), data, x.p())
}

/// Replaces `x` by its refined pattern when that does not raise the
/// residual. Leaves `x` alone when every entry is already distinct.
pub(crate) fn refine_pattern(x: &mut BasisMatrix, f: &mut DVector<f64>) -> Result<()> {
    let mut pat = pattern_of(x);
    let pinned = pat.group.iter().filter(|g| g.is_none()).count();
    let exact_zeros = x.as_row_major().iter().filter(|v| **v == 0.0).count();
    if pat.values.len() + pinned == pat.group.len() && pinned == exact_zeros {
        return Ok(());
    }
    let k = pat.values.len();
    let mut spread = DMatrix::zeros(pat.group.len(), k);
    for (e, g) in pat.group.iter().enumerate() {
        if let Some(g) = g {
            spread[(e, *g)] = pat.sign[e];
        }
    }
    let mut cand = assemble(x, &pat)?;
    let mut fc = flat_residual(&cand)?;
    for _ in 0..MAX_STEPS {
        let reduced = jacobian(&cand)? * &spread;
        let Ok(step) = reduced.svd(true, true).solve(&(-&fc), 1e-14) else {
            break;
        };
        let mut trial = Pattern { group: pat.group.clone(), sign: pat.sign.clone(), values: &pat.values + &step };
        let next = assemble(x, &trial)?;
        let fn_ = flat_residual(&next)?;
        if fn_.amax() >= fc.amax() {
            break;
        }
        std::mem::swap(&mut pat, &mut trial);
        cand = next;
        fc = fn_;
    }
    if fc.amax() <= f.amax().max(ACCEPT_FLOOR) {
        *x = cand;
        *f = fc;
    }
    Ok(())
}
