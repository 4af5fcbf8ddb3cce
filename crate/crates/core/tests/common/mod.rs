#![allow(dead_code)]

use auerbach::constructions::{block_basis, hadamard2_basis, identity_basis, jinf_basis, jp_basis, sylvester_double};
use auerbach::{p_map, p_norm, BasisMatrix, PExponent, ToleranceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if v.iter().any(|x| x.abs() > 1e-3) {
            return v;
        }
    }
}

pub fn unit(v: &[f64], pe: PExponent) -> Vec<f64> {
    let n = p_norm(v, pe);
    v.iter().map(|x| x / n).collect()
}

/// `y` with its component along `x` removed so that `y · ^p x = 0`.
pub fn make_orthogonal(x: &[f64], y: &[f64], pe: PExponent) -> Vec<f64> {
    let g = p_map(x, pe).unwrap();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let c = dot(y, &g) / dot(x, &g);
    y.iter().zip(x).map(|(a, b)| a - c * b).collect()
}

pub fn random_unit_rows(rng: &mut ChaCha8Rng, n: usize, pe: PExponent) -> BasisMatrix {
    let rows = (0..n).map(|_| random_vector(rng, n)).collect();
    BasisMatrix::from_rows(rows, pe).unwrap().normalized_rows()
}

/// Applies a random signed row and column permutation.
pub fn random_signed_permutation(rng: &mut ChaCha8Rng, b: &BasisMatrix) -> BasisMatrix {
    use rand::seq::SliceRandom;
    let n = b.n();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let rs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let cs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let data = rows
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| cols.iter().enumerate().map(move |(k, &c)| (i, r, k, c)))
        .map(|(i, r, k, c)| rs[i] * cs[k] * b.get(r, c))
        .collect();
    BasisMatrix::from_row_major(n, data, b.p()).unwrap()
}

/// The extra `l^3_p` class found by the census:
/// `[[0, e, -e], [e, e², e²], [e, -e², -e²]]` with `e = 2^{-1/p}`.
pub fn split_hadamard_basis(pe: PExponent) -> BasisMatrix {
    let e = 2f64.powf(-pe.reciprocal());
    let e2 = e * e;
    BasisMatrix::from_row_major(3, vec![0.0, e, -e, e, e2, e2, e, -e2, -e2], pe).unwrap()
}

/// Every explicit construction available at `pe`, with a name.
pub fn constructed_bases(pe: PExponent) -> Vec<(String, BasisMatrix)> {
    let tol = ToleranceConfig::default();
    let mut out = vec![];
    for n in 1..=4 {
        out.push((format!("I{n}"), identity_basis(n, pe).unwrap()));
    }
    out.push(("H2".into(), hadamard2_basis(pe)));
    out.push((
        "I1+H2".into(),
        block_basis(&[identity_basis(1, pe).unwrap(), hadamard2_basis(pe)]).unwrap(),
    ));
    out.push((
        "H2+H2".into(),
        block_basis(&[hadamard2_basis(pe), hadamard2_basis(pe)]).unwrap(),
    ));
    if pe.is_infinity() {
        for t in [-1.0, -0.5, 0.0, 0.3, 0.5, 1.0] {
            out.push((format!("Jinf({t})"), jinf_basis(t).unwrap()));
        }
    } else {
        out.push(("H4".into(), sylvester_double(&hadamard2_basis(pe), &tol).unwrap()));
        out.push(("split-H2".into(), split_hadamard_basis(pe)));
    }
    if pe.is_smooth() {
        let jp = jp_basis(pe).unwrap();
        out.push(("Jp".into(), jp.clone()));
        out.push(("I1+Jp".into(), block_basis(&[identity_basis(1, pe).unwrap(), jp.clone()]).unwrap()));
        out.push(("sylvester(Jp)".into(), sylvester_double(&jp, &tol).unwrap()));
    }
    out
}
