use std::collections::BTreeSet;

use hicat_core::catalog::{self, Group};
use hicat_core::conjugation::*;
use hicat_core::involutive::*;
use hicat_core::ncat::*;
use hicat_core::report::Law;
use hicat_core::InvolutionError;

fn pair_inverse(n: usize) -> Vec<CellId> {
    (0..n * n).map(|c| CellId((c % n) * n + c / n)).collect()
}

#[test]
fn pair_groupoid_inverse_is_a_hermitian_contravariant_involution() {
    let g = build_pair_groupoid(3).unwrap();
    let spec = InvolutionSpec::new(pair_inverse(3), [0]).with_hermitian(true);
    assert!(validate_involution(&g, &spec).unwrap().is_ok());
    // declared covariant instead: must fail
    let cov = InvolutionSpec::new(pair_inverse(3), []);
    assert!(validate_involution(&g, &cov).unwrap().has(Law::Covariance));
}

#[test]
fn non_involutive_map_is_reported() {
    let g = build_pair_groupoid(2).unwrap();
    let mut map = pair_inverse(2);
    map.swap(0, 3);
    let report = validate_involution(&g, &InvolutionSpec::new(map, [0])).unwrap();
    assert!(!report.is_ok());
}

#[test]
fn wrong_map_length_is_an_error() {
    let g = build_pair_groupoid(2).unwrap();
    let err = validate_involution(&g, &InvolutionSpec::new(vec![CellId(0)], [0])).unwrap_err();
    assert!(matches!(err, InvolutionError::MapLength { .. }));
}

fn codiscrete_pair(g: &Group) -> (FiniteGlobularCategory, InvolutionSpec, InvolutionSpec) {
    let cat = catalog::codiscrete_two_group(g).unwrap();
    let mut fam = catalog::codiscrete_two_group_involutions(g);
    let s1 = fam.pop().unwrap();
    let s0 = fam.pop().unwrap();
    (cat, s0, s1)
}

#[test]
fn fully_involutive_two_groupoid_generates_group_of_order_four() {
    let s3 = Group::symmetric3();
    let (cat, s0, s1) = codiscrete_pair(&s3);
    assert!(validate_involution(&cat, &s0).unwrap().is_ok());
    assert!(validate_involution(&cat, &s1).unwrap().is_ok());
    assert!(validate_family(&cat, &[s0.clone(), s1.clone()]).unwrap().is_ok());
    let group = generated_involution_group(&cat, &[s0, s1]).unwrap();
    assert_eq!(group.order(), 4);
    // every element is an involution with its variance set, and the table is
    // symmetric difference
    for e in &group.elements {
        let mut e = e.clone();
        e.hermitian = false;
        assert!(validate_involution(&cat, &e).unwrap().is_ok());
    }
    for a in 0..4 {
        for b in 0..4 {
            let expect: BTreeSet<usize> = group.elements[a]
                .contravariant
                .symmetric_difference(&group.elements[b].contravariant)
                .copied()
                .collect();
            assert_eq!(group.elements[group.table[a][b]].contravariant, expect);
        }
    }
}

#[test]
fn non_commuting_family_is_rejected() {
    let g = build_pair_groupoid(3).unwrap();
    // two different involutive permutations that do not commute
    let mut a: Vec<CellId> = (0..9).map(CellId).collect();
    a.swap(1, 2);
    let mut b: Vec<CellId> = (0..9).map(CellId).collect();
    b.swap(2, 5);
    let err = generated_involution_group(&g, &[InvolutionSpec::new(a, []), InvolutionSpec::new(b, [])]);
    assert!(matches!(err, Err(InvolutionError::NonCommutingFamily { a: 0, b: 1, .. })));
}

#[test]
fn terminal_identities_generate_the_full_subset_group() {
    let t = build_terminal(2).unwrap();
    let fam = [InvolutionSpec::new(vec![CellId(0)], [0]), InvolutionSpec::new(vec![CellId(0)], [1])];
    let group = generated_involution_group(&t, &fam).unwrap();
    assert_eq!(group.order(), 4);
}

#[test]
fn functors_identity_and_terminal() {
    let g = build_pair_groupoid(3).unwrap();
    let ident: Vec<CellId> = g.cells().collect();
    assert!(validate_functor(&g, &g, &ident, &BTreeSet::new()).unwrap().is_ok());
    let t = build_terminal(1).unwrap();
    let to_t = vec![CellId(0); 9];
    assert!(validate_functor(&g, &t, &to_t, &BTreeSet::new()).unwrap().is_ok());
    // inverse as contravariant functor
    assert!(validate_functor(&g, &g, &pair_inverse(3), &[0].into()).unwrap().is_ok());
    assert!(validate_functor(&g, &g, &pair_inverse(3), &BTreeSet::new()).unwrap().has(Law::Covariance));
}

#[test]
fn identity_transfor_on_the_identity_functor() {
    let g = build_pair_groupoid(3).unwrap();
    let ident: Vec<CellId> = g.cells().collect();
    let xi: Vec<Option<CellId>> = g.cells().map(|c| g.is_identity(0, c).then_some(c)).collect();
    assert!(validate_transfor1(&g, &g, &ident, &ident, &xi).unwrap().is_ok());
}

#[test]
fn conjugation_by_a_groupoid_element_is_a_transfor() {
    // Ξ(A) = (σA, A) for a permutation σ gives a transfor from the identity
    // functor to conjugation by σ
    let n = 3;
    let g = build_pair_groupoid(n).unwrap();
    let sigma = [1usize, 2, 0];
    let cell = |i: usize, j: usize| CellId(i * n + j);
    let ident: Vec<CellId> = g.cells().collect();
    let psi: Vec<CellId> = g.cells().map(|c| cell(sigma[c.0 / n], sigma[c.0 % n])).collect();
    let xi: Vec<Option<CellId>> = g
        .cells()
        .map(|c| {
            let (i, j) = (c.0 / n, c.0 % n);
            (i == j).then(|| cell(sigma[i], i))
        })
        .collect();
    assert!(validate_transfor1(&g, &g, &ident, &psi, &xi).unwrap().is_ok());
    // breaking one component breaks naturality or shape
    let mut bad = xi.clone();
    bad[0] = Some(cell(2, 0));
    assert!(!validate_transfor1(&g, &g, &ident, &psi, &bad).unwrap().is_ok());
}

#[test]
fn delooped_s3_conjugation_passes_everything() {
    let s3 = Group::symmetric3();
    let cat = catalog::delooped_group(&s3).unwrap();
    let data = catalog::delooped_group_conjugation(&s3);
    let flags = ConjugationFlags::all();
    assert!(validate_conjugation(&cat, &data, flags).unwrap().is_ok());
    assert!(verify_folding_laws(&cat, &data, flags).unwrap().is_ok());
    // Φ_• of a 1-cell is its inverse
    for x in cat.cells() {
        assert_eq!(fold_right(&cat, &data, x).unwrap(), CellId(s3.inverse(x.0)));
    }
}

#[test]
fn codiscrete_s3_conjugation_passes_everything() {
    let s3 = Group::symmetric3();
    let cat = catalog::codiscrete_two_group(&s3).unwrap();
    let data = catalog::codiscrete_two_group_conjugation(&s3);
    let flags = ConjugationFlags::all();
    let r = validate_conjugation(&cat, &data, flags).unwrap();
    assert!(r.is_ok(), "{r:?}");
    let r = verify_folding_laws(&cat, &data, flags).unwrap();
    assert!(r.is_ok(), "{r:?}");
    // Φ: s ⇒ t folds to t⁻¹ ⇒ s⁻¹
    let n = 6;
    for c in 0..n * n {
        let (t, s) = (c / n, c % n);
        let folded = fold_right(&cat, &data, CellId(c)).unwrap();
        assert_eq!(folded, CellId(s3.inverse(s) * n + s3.inverse(t)));
    }
}

#[test]
fn unital_zero_identity_folds_to_itself() {
    let s3 = Group::symmetric3();
    let cat = catalog::codiscrete_two_group(&s3).unwrap();
    let data = catalog::codiscrete_two_group_conjugation(&s3);
    let e = CellId(0);
    assert!(cat.is_identity(0, e));
    assert_eq!(fold_right(&cat, &data, e).unwrap(), e);
    assert_eq!(dagger(&cat, &data, e).unwrap(), e);
    assert_eq!(ddagger(&cat, &data, e).unwrap(), e);
}

#[test]
fn every_single_unit_mutation_is_detected() {
    let s3 = Group::symmetric3();
    for (cat, data) in [
        (catalog::delooped_group(&s3).unwrap(), catalog::delooped_group_conjugation(&s3)),
        (catalog::codiscrete_two_group(&s3).unwrap(), catalog::codiscrete_two_group_conjugation(&s3)),
    ] {
        for x in cat.cells().filter(|&x| cat.is_identity(1, x)) {
            let r = data.conjugate(x).unwrap().r;
            for c in cat.cells().filter(|&c| c != r) {
                let bad = data.clone().with_r(x, c);
                let report = validate_conjugation(&cat, &bad, ConjugationFlags::default()).unwrap();
                assert!(!report.is_ok(), "mutation R_{x} -> {c} went unnoticed");
            }
        }
    }
}

#[test]
fn missing_conjugate_is_an_error() {
    let s3 = Group::symmetric3();
    let cat = catalog::delooped_group(&s3).unwrap();
    let mut data = catalog::delooped_group_conjugation(&s3);
    data.conjugates[2] = None;
    assert_eq!(
        validate_conjugation(&cat, &data, ConjugationFlags::default()).unwrap_err(),
        InvolutionError::MissingConjugate { cell: 2 }
    );
}

#[test]
fn asymmetric_units_break_traciability() {
    let m = 3;
    let g = Group::cyclic(1);
    let cat = catalog::abelian_two_group(&g, m).unwrap();
    let flags = ConjugationFlags { traciable: true, ..Default::default() };
    let sym = catalog::abelian_two_group_conjugation(&g, m, 1, 1);
    assert!(validate_conjugation(&cat, &sym, flags).unwrap().is_ok());
    let asym = catalog::abelian_two_group_conjugation(&g, m, 1, 0);
    let report = validate_conjugation(&cat, &asym, flags).unwrap();
    assert!(report.has(Law::Traciability));
    // Φ_• adds r - rbar, _•Φ subtracts it
    let phi = CellId(0);
    assert_eq!(fold_right(&cat, &asym, phi).unwrap(), CellId(1));
    assert_eq!(fold_left(&cat, &asym, phi).unwrap(), CellId(2));
}

#[test]
fn non_unital_units_are_flagged() {
    let m = 3;
    let g = Group::cyclic(1);
    let cat = catalog::abelian_two_group(&g, m).unwrap();
    let data = catalog::abelian_two_group_conjugation(&g, m, 1, 1);
    let flags = ConjugationFlags { unital: true, ..Default::default() };
    assert!(validate_conjugation(&cat, &data, flags).unwrap().has(Law::Unitality));
}
