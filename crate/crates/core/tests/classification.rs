mod common;

use auerbach::classification::{
    canonical_form, classify_l3_basis, classify_l3_vector, classify_strong_vector, equivalent, is_strong_auerbach,
    label_for, row_equivalence_orbit_size, subspace_isometric_lp, ww_lower_bound_check, ClassLabel, L3VectorType,
    L3Verdict, StrongVectorType,
};
use auerbach::constructions::{block_basis, hadamard2_basis, identity_basis, jinf_basis, jp_basis};
use auerbach::orthogonality::dual_basis;
use auerbach::solver::multistart_enumerate;
use auerbach::{BasisMatrix, PExponent, ToleranceConfig};
use common::*;
use proptest::prelude::*;
use rand::Rng;

/// Exhaustive orbit test: is `b` a signed row/column permutation of `a`?
fn same_orbit_brute_force(a: &[i64], b: &[i64], n: usize) -> bool {
    let perms = permutations(n);
    for rp in &perms {
        for cp in &perms {
            for rs in 0..(1u32 << n) {
                for cs in 0..(1u32 << n) {
                    let hit = (0..n).all(|i| {
                        (0..n).all(|j| {
                            let s = if (rs >> i ^ cs >> j) & 1 == 1 { -1 } else { 1 };
                            s * a[rp[i] * n + cp[j]] == b[i * n + j]
                        })
                    });
                    if hit {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

fn integer_basis(n: usize, entries: &[i64]) -> BasisMatrix {
    BasisMatrix::from_row_major(n, entries.iter().map(|&v| v as f64).collect(), p(3.0)).unwrap()
}

#[test]
fn canonical_form_is_an_orbit_invariant() {
    let tol = ToleranceConfig::default();
    for pv in [3.0, 4.0] {
        for (name, b) in constructed_bases(p(pv)) {
            if b.n() > 6 {
                continue;
            }
            let trials = if b.n() >= 5 { 5 } else { 100 };
            let c = canonical_form(&b, &tol).unwrap();
            let mut r = rng(b.n() as u64);
            for _ in 0..trials {
                let g = random_signed_permutation(&mut r, &b);
                assert_eq!(canonical_form(&g, &tol).unwrap(), c, "{name} at p = {pv}");
            }
        }
    }
}

#[test]
fn canonical_form_is_idempotent() {
    let tol = ToleranceConfig::default();
    for (name, b) in constructed_bases(p(3.0)) {
        if b.n() > 6 {
            continue;
        }
        let c = canonical_form(&b, &tol).unwrap();
        let again = canonical_form(&c.representative, &tol).unwrap();
        assert_eq!(again.key(), c.key(), "{name}");
    }
}

#[test]
fn canonical_form_separates_orbits_like_brute_force() {
    let tol = ToleranceConfig::default();
    let mut r = rng(42);
    let n = 3;
    for _ in 0..300 {
        let a: Vec<i64> = (0..n * n).map(|_| r.random_range(-2..=2)).collect();
        let b: Vec<i64> = if r.random::<bool>() {
            let g = random_signed_permutation(&mut r, &integer_basis(n, &a));
            g.as_row_major().iter().map(|v| *v as i64).collect()
        } else {
            (0..n * n).map(|_| r.random_range(-2..=2)).collect()
        };
        let ka = canonical_form(&integer_basis(n, &a), &tol).unwrap();
        let kb = canonical_form(&integer_basis(n, &b), &tol).unwrap();
        assert_eq!(ka == kb, same_orbit_brute_force(&a, &b, n), "{a:?} vs {b:?}");
    }
}

#[test]
fn orbit_sizes_count_row_classes() {
    let tol = ToleranceConfig::default();
    assert_eq!(row_equivalence_orbit_size(&canonical_form(&identity_basis(3, p(3.0)).unwrap(), &tol).unwrap()), 1);
    let h = canonical_form(&hadamard2_basis(p(3.0)), &tol).unwrap();
    assert_eq!(row_equivalence_orbit_size(&h), 1);
    // the lone axis can sit in any of the three coordinates
    let block = block_basis(&[identity_basis(1, p(3.0)).unwrap(), hadamard2_basis(p(3.0))]).unwrap();
    assert_eq!(row_equivalence_orbit_size(&canonical_form(&block, &tol).unwrap()), 3);
}

#[test]
fn canonical_form_refuses_large_dimensions() {
    let tol = ToleranceConfig::default();
    assert!(canonical_form(&identity_basis(7, p(3.0)).unwrap(), &tol).is_err());
}

#[test]
fn l3_bases_are_labelled() {
    let tol = ToleranceConfig::default();
    let class = |b: &BasisMatrix| match classify_l3_basis(b, &tol).unwrap() {
        L3Verdict::Class { label, .. } => label,
        other => panic!("{other:?}"),
    };
    for pv in [1.5, 3.0, 4.0, 10.0] {
        let pe = p(pv);
        let mut r = rng(pv as u64);
        assert_eq!(class(&identity_basis(3, pe).unwrap()), ClassLabel::Identity);
        let block = block_basis(&[identity_basis(1, pe).unwrap(), hadamard2_basis(pe)]).unwrap();
        assert_eq!(class(&random_signed_permutation(&mut r, &block)), ClassLabel::BlockH2);
        assert_eq!(class(&random_signed_permutation(&mut r, &jp_basis(pe).unwrap())), ClassLabel::Jp);
        assert_eq!(label_for(&jp_basis(pe).unwrap(), &tol).unwrap(), ClassLabel::Jp);
    }
    assert_eq!(
        classify_l3_basis(&identity_basis(3, p(2.0)).unwrap(), &tol).unwrap(),
        L3Verdict::OrthogonalContinuum
    );
    let not_auerbach = BasisMatrix::from_rows(vec![vec![1.0, 0.0, 0.0], vec![0.6, 0.8, 0.0], vec![0.0, 0.0, 1.0]], p(3.0))
        .unwrap()
        .normalized_rows();
    assert!(classify_l3_basis(&not_auerbach, &tol).is_err());
}

#[test]
fn linf_family_and_its_dual() {
    let tol = ToleranceConfig::default();
    let mut r = rng(3);
    for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
        let b = random_signed_permutation(&mut r, &jinf_basis(t).unwrap());
        match classify_l3_basis(&b, &tol).unwrap() {
            L3Verdict::Class { label: ClassLabel::JinfFamily, t: Some(found), via_duality: false } => {
                assert!((found - t.abs()).abs() < 1e-7, "t = {t}: {found}")
            }
            L3Verdict::Class { label: ClassLabel::BlockH2 | ClassLabel::Identity, .. } => {}
            other => panic!("t = {t}: {other:?}"),
        }
        let dual = dual_basis(&b, &tol).unwrap().functionals;
        assert_eq!(dual.p(), PExponent::ONE);
        match classify_l3_basis(&dual, &tol).unwrap() {
            L3Verdict::Class { via_duality, .. } => assert!(via_duality),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn the_census_class_outside_the_list() {
    let tol = ToleranceConfig::default();
    for pv in [3.0, 4.0] {
        let b = split_hadamard_basis(p(pv));
        assert_eq!(label_for(&b, &tol).unwrap(), ClassLabel::Other);
        assert_eq!(
            classify_l3_basis(&b, &tol).unwrap(),
            L3Verdict::Class { label: ClassLabel::Other, t: None, via_duality: false }
        );
        let kinds: Vec<_> = b.rows().map(|row| classify_l3_vector(row, p(pv), &tol).unwrap()).collect();
        assert_eq!(kinds, [L3VectorType::TwoPoint, L3VectorType::None, L3VectorType::None]);
    }
}

#[test]
fn l3_vectors_of_listed_classes() {
    let tol = ToleranceConfig::default();
    for pv in [3.0, 4.0, 1.5] {
        let pe = p(pv);
        let block = block_basis(&[identity_basis(1, pe).unwrap(), hadamard2_basis(pe)]).unwrap();
        for b in [identity_basis(3, pe).unwrap(), block, jp_basis(pe).unwrap()] {
            for row in b.rows() {
                assert_ne!(classify_l3_vector(row, pe, &tol).unwrap(), L3VectorType::None);
            }
        }
    }
}

#[test]
fn strong_bases() {
    let tol = ToleranceConfig::default();
    let pe = p(3.0);
    let i2h2 = block_basis(&[identity_basis(2, pe).unwrap(), hadamard2_basis(pe)]).unwrap();
    assert!(is_strong_auerbach(&i2h2, &tol).unwrap());
    let h2h2 = block_basis(&[hadamard2_basis(pe), hadamard2_basis(pe)]).unwrap();
    assert!(is_strong_auerbach(&h2h2, &tol).unwrap());
    let i1jp = block_basis(&[identity_basis(1, pe).unwrap(), jp_basis(pe).unwrap()]).unwrap();
    assert!(!is_strong_auerbach(&i1jp, &tol).unwrap());
    assert!(!is_strong_auerbach(&jp_basis(pe).unwrap(), &tol).unwrap());
    assert!(!is_strong_auerbach(&split_hadamard_basis(pe), &tol).unwrap());
    let jp = jp_basis(pe).unwrap();
    assert!(!subspace_isometric_lp(&[jp.row(0).to_vec(), jp.row(1).to_vec()], pe, &tol).unwrap());
}

#[test]
fn strong_verdicts_use_axis_and_pair_rows() {
    let tol = ToleranceConfig::default();
    for pv in [3.0, 4.0, 1.5] {
        for (name, b) in constructed_bases(p(pv)) {
            if b.n() > 8 || !is_strong_auerbach(&b, &tol).unwrap() {
                continue;
            }
            for row in b.rows() {
                let kind = classify_strong_vector(row, p(pv), &tol).unwrap();
                assert_ne!(kind, StrongVectorType::None, "{name} at p = {pv}");
            }
        }
    }
}

#[test]
fn row_equivalence_bound() {
    let tol = ToleranceConfig::default();
    let c2 = multistart_enumerate(2, p(3.0), 100, 0, &tol).unwrap();
    let check2 = ww_lower_bound_check(&c2.classes(), 2);
    assert!(check2.satisfied && check2.bound == 2 && check2.count >= 2);
    let c3 = multistart_enumerate(3, p(3.0), 400, 0, &tol).unwrap();
    let check3 = ww_lower_bound_check(&c3.classes(), 3);
    assert!(check3.satisfied && check3.bound == 4 && check3.count >= 4);
    assert!(!ww_lower_bound_check(&[], 3).satisfied);
}

#[test]
fn equivalence_tolerates_solver_noise() {
    let tol = ToleranceConfig::default();
    let jp = jp_basis(p(3.0)).unwrap();
    let noisy = jp.map_entries(|v| v + 1e-12);
    assert!(equivalent(&jp, &noisy, &tol).unwrap());
    assert!(!equivalent(&jp, &identity_basis(3, p(3.0)).unwrap(), &tol).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn singletons_are_isometric(v in prop::collection::vec(-5.0f64..5.0, 1..6), pv in 1.2f64..8.0) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        prop_assume!((pv - 2.0).abs() > 0.05);
        let tol = ToleranceConfig::default();
        prop_assert!(subspace_isometric_lp(&[v], p(pv), &tol).unwrap());
    }

    #[test]
    fn canonical_key_ignores_group_action(seed in any::<u64>()) {
        let tol = ToleranceConfig::default();
        let mut r = rng(seed);
        let b = random_unit_rows(&mut r, 3, p(3.0));
        let g = random_signed_permutation(&mut r, &b);
        prop_assert_eq!(canonical_form(&b, &tol).unwrap(), canonical_form(&g, &tol).unwrap());
    }
}
