//! Census of Auerbach bases by Newton runs from many seeds, merged by
//! canonical class.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::BasisMatrix;
use crate::classification::{canonical_form, label_for, CanonicalClass};
use crate::constructions::{known_bases, NamedBasis};
use crate::error::{AuerbachError, Result};
use crate::exponent::PExponent;
use crate::solver::newton::{newton_solve, SolveReport, SolveStatus, NEAR_P2_MARGIN};
use crate::solver::dualize_solution;
use crate::tolerance::ToleranceConfig;

/// Entrywise perturbation applied to structured seeds.
pub const SEED_PERTURBATION: f64 = 0.05;
/// Every `STRUCTURED_EVERY`-th seed perturbs a known construction.
pub const STRUCTURED_EVERY: usize = 4;

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub class: CanonicalClass,
    /// Converged solution with the smallest residual in this class.
    pub solution: BasisMatrix,
    pub residual: f64,
    /// Number of seeds that converged into this class.
    pub hits: usize,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub n: usize,
    pub p: PExponent,
    /// Sorted by class representative.
    pub entries: Vec<CensusEntry>,
    pub attempted: usize,
    pub status_counts: BTreeMap<&'static str, usize>,
    /// The census was computed at the conjugate exponent and dualized.
    pub via_duality: bool,
}

impl Census {
    pub fn classes(&self) -> Vec<CanonicalClass> {
        self.entries.iter().map(|e| e.class.clone()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// splitmix64 of `base + index`, so every seed is independent of the others
/// and of the order in which they run.
pub fn seed_for(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_seed_matrix(n: usize, p: PExponent, rng: &mut ChaCha8Rng) -> Result<BasisMatrix> {
    let data = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ok(BasisMatrix::from_row_major(n, data, p)?.normalized_rows())
}

/// A random signed row/column permutation of `base` with uniform entrywise
/// noise of size [`SEED_PERTURBATION`].
fn structured_seed_matrix(base: &BasisMatrix, rng: &mut ChaCha8Rng) -> Result<BasisMatrix> {
    let n = base.n();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let col_signs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let mut data = Vec::with_capacity(n * n);
    for &r in &rows {
        let row_sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        for (k, &c) in cols.iter().enumerate() {
            let noise = rng.random_range(-SEED_PERTURBATION..SEED_PERTURBATION);
            data.push(row_sign * col_signs[k] * base.get(r, c) + noise);
        }
    }
    Ok(BasisMatrix::from_row_major(n, data, base.p())?.normalized_rows())
}

fn seed_matrix(
    n: usize,
    p: PExponent,
    structured: &[NamedBasis],
    rng_seed: u64,
    index: usize,
) -> Result<(u64, BasisMatrix)> {
    let seed = seed_for(rng_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = if index % STRUCTURED_EVERY == 0 && !structured.is_empty() {
        let base = &structured[(index / STRUCTURED_EVERY) % structured.len()].basis;
        structured_seed_matrix(base, &mut rng)?
    } else {
        random_seed_matrix(n, p, &mut rng)?
    };
    Ok((seed, m))
}

/// Runs [`newton_solve`] from `num_seeds` seeds at a finite `p > 2` and
/// returns the distinct canonical classes found.
///
/// Seed `i` depends only on `(rng_seed, i)`, so a larger budget finds a
/// superset of the classes found by a smaller one, and the result does not
/// depend on scheduling.
pub fn multistart_enumerate(
    n: usize,
    p: PExponent,
    num_seeds: usize,
    rng_seed: u64,
    tol: &ToleranceConfig,
) -> Result<Census> {
    let pf = p.require_smooth("multistart_enumerate")?;
    if pf < 2.0 + NEAR_P2_MARGIN {
        return Err(AuerbachError::Domain(format!(
            "multistart_enumerate needs p >= {}; got p = {pf}",
            2.0 + NEAR_P2_MARGIN
        )));
    }
    let structured = known_bases(n, p, tol)?;
    let reports: Vec<SolveReport> = (0..num_seeds)
        .into_par_iter()
        .map(|i| {
            let (seed, m) = seed_matrix(n, p, &structured, rng_seed, i)?;
            let mut report = newton_solve(&m, tol)?;
            report.seed = seed;
            Ok(report)
        })
        .collect::<Result<_>>()?;

    let mut status_counts = BTreeMap::new();
    let mut classes: BTreeMap<CanonicalClass, CensusEntry> = BTreeMap::new();
    // reports are in seed order, so ties on residual keep the earliest seed
    for report in reports {
        *status_counts.entry(report.status.as_str()).or_insert(0) += 1;
        if report.status != SolveStatus::Converged {
            continue;
        }
        let solution = report.solution.expect("converged reports carry a solution");
        let class = canonical_form(&solution, tol)?;
        classes
            .entry(class.clone())
            .and_modify(|e| {
                e.hits += 1;
                if report.residual < e.residual {
                    e.residual = report.residual;
                    e.solution = solution.clone();
                }
            })
            .or_insert(CensusEntry { class, solution, residual: report.residual, hits: 1 });
    }
    let mut entries = Vec::with_capacity(classes.len());
    for (_, mut e) in classes {
        e.class.label = Some(label_for(&e.solution, tol)?);
        entries.push(e);
    }
    Ok(Census { n, p, entries, attempted: num_seeds, status_counts, via_duality: false })
}

/// [`multistart_enumerate`] for any finite `p` at least [`NEAR_P2_MARGIN`]
/// away from 2; exponents below 2 are solved at the conjugate exponent and
/// each class is dualized back.
pub fn census(n: usize, p: PExponent, num_seeds: usize, rng_seed: u64, tol: &ToleranceConfig) -> Result<Census> {
    let pf = p.require_smooth("census")?;
    if (pf - 2.0).abs() < NEAR_P2_MARGIN {
        return Err(AuerbachError::Domain(format!(
            "continuum at p=2: the Auerbach bases of l^n_2 are all orthonormal bases (p = {pf})"
        )));
    }
    if pf > 2.0 {
        return multistart_enumerate(n, p, num_seeds, rng_seed, tol);
    }
    let q = p.dual();
    if q.finite().is_none_or(|qf| qf < 2.0 + NEAR_P2_MARGIN) {
        return Err(AuerbachError::Domain(format!(
            "conjugate exponent of p = {pf} is too close to 2"
        )));
    }
    let upstairs = multistart_enumerate(n, q, num_seeds, rng_seed, tol)?;
    let mut merged: BTreeMap<CanonicalClass, CensusEntry> = BTreeMap::new();
    for e in upstairs.entries {
        let solution = dualize_solution(&e.solution, tol)?;
        let report = crate::orthogonality::is_auerbach(&solution, tol);
        let residual = report.gradient_residual.unwrap_or(f64::NAN);
        let mut class = canonical_form(&solution, tol)?;
        class.label = Some(label_for(&solution, tol)?);
        merged.insert(class.clone(), CensusEntry { class, solution, residual, hits: e.hits });
    }
    Ok(Census {
        n,
        p,
        entries: merged.into_values().collect(),
        attempted: upstairs.attempted,
        status_counts: upstairs.status_counts,
        via_duality: true,
    })
}
