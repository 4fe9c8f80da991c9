use hicat_core::catalog::{self, Group};
use hicat_core::coeff::*;
use hicat_core::hypermatrix::HypermatrixSystem;
use hicat_core::linalg::CMat;
use hicat_core::ncat::{LevelSet, MultiCategory};
use hicat_core::report::Law;
use hicat_core::Complex64;

fn cfg() -> AlgebraCheckConfig {
    AlgebraCheckConfig { samples: 16, ..Default::default() }
}

#[test]
fn complex_field_and_matrix_algebras_are_star_algebras() {
    assert!(validate_star_algebra(&ComplexField, &cfg()).is_ok());
    for d in 1..=3 {
        let r = validate_star_algebra(&MatrixAlgebra::new(d), &cfg());
        assert!(r.is_ok(), "M{d}: {:?}", r.violations.first());
    }
}

#[test]
fn misdeclared_covariance_is_caught_on_the_basis() {
    let wrong = MatrixAlgebra::with_declared(2, Covariance::COVARIANT);
    let r = validate_star_algebra(&wrong, &cfg());
    assert!(r.has(Law::Covariance));
    assert!(r.violations.iter().any(|v| v.origin == "basis"));
    let both = MatrixAlgebra::with_declared(2, Covariance::BOTH);
    assert!(validate_star_algebra(&both, &cfg()).has(Law::Covariance));
    // one-dimensional matrices commute, so both labels are honest there
    let scalar = MatrixAlgebra::with_declared(1, Covariance::BOTH);
    assert!(validate_star_algebra(&scalar, &cfg()).is_ok());
}

#[test]
fn common_unit_requirement_separates_hypermatrix_products() {
    let sys = HypermatrixSystem::new(&[2]).unwrap();
    let strict = AlgebraCheckConfig { samples: 4, require_common_unit: true, ..Default::default() };
    assert!(validate_star_algebra(&sys, &strict).has(Law::Unit));
    let relaxed = AlgebraCheckConfig { samples: 4, ..Default::default() };
    assert!(validate_star_algebra(&sys, &relaxed).is_ok());
}

#[test]
fn commutativity_witnesses() {
    assert!(is_commutative(&ComplexField, 0, &cfg()).is_none());
    let m2 = MatrixAlgebra::new(2);
    let (x, y) = is_commutative(&m2, 0, &cfg()).expect("M2 is noncommutative");
    assert_ne!(x.matmul(&y), y.matmul(&x));
    let (e12, e21) = (CMat::unit(2, 0, 1), CMat::unit(2, 1, 0));
    assert_ne!(e12.matmul(&e21), e21.matmul(&e12));
    let hyp = HypermatrixSystem::new(&[2, 2]).unwrap();
    assert!(is_commutative(&hyp, 0, &cfg()).is_none(), "Schur product commutes");
    assert!(is_commutative(&hyp, 1, &cfg()).is_some());
}

fn fully_involutive_base() -> (hicat_core::FiniteGlobularCategory, Vec<hicat_core::involutive::InvolutionSpec>) {
    let s3 = Group::symmetric3();
    (catalog::codiscrete_two_group(&s3).unwrap(), catalog::codiscrete_two_group_involutions(&s3))
}

/// Every non-exempt base pair gets a coefficient pair with the same variance.
fn honours<A: CoefficientSystem>(pairs: &[BasePair], asg: &Assignment, a: &A) -> bool {
    pairs.iter().all(|p| {
        let c = a.covariance(asg.products[p.composition], asg.involutions[p.involution]);
        if p.contravariant {
            c.contravariant
        } else {
            c.covariant
        }
    })
}

#[test]
fn single_involution_noncommutative_algebra_is_obstructed() {
    let (base, family) = fully_involutive_base();
    let pairs = base_pairs(base.composition_count(), &family);
    assert_eq!(pairs.len(), 4);
    match covariance_match(&pairs, 2, 2, &MatrixAlgebra::new(2)) {
        MatchResult::Blocked { pair } => assert!(!pair.contravariant),
        other => panic!("expected an obstruction, got {other:?}"),
    }
}

#[test]
fn commutative_and_hypermatrix_coefficients_match() {
    let (base, family) = fully_involutive_base();
    let pairs = base_pairs(base.composition_count(), &family);
    let found = covariance_match(&pairs, 2, 2, &ComplexField);
    assert_eq!(found.assignment(), Some(&Assignment::trivial(2, 2)));

    let hyp = HypermatrixSystem::new(&[2, 2]).unwrap();
    let asg = covariance_match(&pairs, 2, 2, &hyp).assignment().cloned().expect("assignment");
    assert!(honours(&pairs, &asg, &hyp));

    // without the commutative Schur product the match needs one level per
    // composition
    let products = vec![LevelSet::from_levels(&[1]), LevelSet::from_levels(&[2]), LevelSet::from_levels(&[1, 2])];
    let nc = HypermatrixSystem::with_products(&[2, 2], products.clone()).unwrap();
    let asg = covariance_match(&pairs, 2, 2, &nc).assignment().cloned().expect("assignment");
    assert!(honours(&pairs, &asg, &nc));
    assert_ne!(asg.products[0], asg.products[1]);
    for &k in &asg.products {
        assert!(is_commutative(&nc, k, &cfg()).is_some(), "{}", products[k]);
    }
}

#[test]
fn match_is_lexicographically_least() {
    let (base, family) = fully_involutive_base();
    let pairs = base_pairs(base.composition_count(), &family);
    let products = vec![LevelSet::from_levels(&[1]), LevelSet::from_levels(&[2]), LevelSet::from_levels(&[1, 2])];
    let nc = HypermatrixSystem::with_products(&[2, 2], products).unwrap();
    let best = covariance_match(&pairs, 2, 2, &nc).assignment().cloned().unwrap();
    // brute force over every assignment in lexicographic order
    let mut first = None;
    'search: for p0 in 0..3 {
        for p1 in 0..3 {
            for i0 in 0..4 {
                for i1 in 0..4 {
                    let a = Assignment { products: vec![p0, p1], involutions: vec![i0, i1] };
                    if honours(&pairs, &a, &nc) {
                        first = Some(a);
                        break 'search;
                    }
                }
            }
        }
    }
    assert_eq!(Some(best), first);
}

#[test]
fn exempt_compositions_are_not_constrained() {
    let (base, mut family) = fully_involutive_base();
    family[0] = family[0].clone().with_exempt([1]);
    let pairs = base_pairs(base.composition_count(), &family);
    assert_eq!(pairs.len(), 3);
}

#[test]
fn complex_left_matrix_is_scalar() {
    let z = Complex64::new(2.0, -1.0);
    assert_eq!(ComplexField.left_matrix(0, &z), Some(CMat::scalar(z)));
}
