use hicat_core::catalog::{self, Group};
use hicat_core::ncat::*;
use hicat_core::report::Law;
use hicat_core::CategoryError;

fn id(i: usize) -> CellId {
    CellId(i)
}

#[test]
fn pair_groupoid_two_has_eight_compositions() {
    let g = build_pair_groupoid(2).unwrap();
    // (i,j)∘(k,l) is defined iff j == k: 2*2*2 choices
    let mut oracle = 0;
    for _i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for _l in 0..2 {
                    if j == k {
                        oracle += 1;
                    }
                }
            }
        }
    }
    assert_eq!(g.tables()[0].defined().len(), oracle);
    assert_eq!(oracle, 8);
}

#[test]
fn pair_groupoid_three_composes_by_index() {
    let g = build_pair_groupoid(3).unwrap();
    let cell = |i: usize, j: usize| g.find_cell(&format!("({i},{j})")).unwrap();
    assert_eq!(g.compose(0, cell(1, 2), cell(2, 1)), Some(cell(1, 1)));
    assert_eq!(g.compose(0, cell(1, 2), cell(1, 2)), None);
    assert!(matches!(
        g.try_compose(0, cell(1, 2), cell(1, 2)),
        Err(CategoryError::NotComposable { .. })
    ));
    assert!(validate_partial_category(&g).is_ok());
    assert!(validate_globular(&g).is_ok());
}

#[test]
fn terminal_categories_validate() {
    for n in 1..=4 {
        let t = build_terminal(n).unwrap();
        assert!(validate_partial_category(&t).is_ok());
        assert!(validate_globular(&t).is_ok());
        assert!(check_exchange(&t).is_none());
        assert!(check_nc_exchange(&t).is_ok());
    }
}

#[test]
fn zero_depth_and_budget_are_rejected() {
    assert_eq!(build_terminal(0).unwrap_err(), CategoryError::ZeroDepth);
    assert!(matches!(
        build_pair_groupoid(23),
        Err(CategoryError::TooLarge { cells: 529, budget: 512 })
    ));
    let t = CompositionTable::empty(3);
    let err = FiniteGlobularCategory::with_budget(vec!["a".into(), "b".into(), "c".into()], vec![t], 2);
    assert!(matches!(err, Err(CategoryError::TooLarge { .. })));
}

#[test]
fn broken_associativity_is_reported() {
    // redirect (1,2)∘(2,1) to (2,2) in the pair groupoid on 2 objects
    let g = build_pair_groupoid(2).unwrap();
    let c = |s: &str| g.find_cell(s).unwrap();
    let bad = g.clone().with_entry(0, c("(1,2)"), c("(2,1)"), Some(c("(2,2)")));
    let report = validate_partial_category(&bad);
    assert!(report.has(Law::Associativity) || report.has(Law::SourceTarget));
    assert!(!report.is_ok());
}

#[test]
fn dropped_entry_breaks_definedness() {
    let g = build_pair_groupoid(3).unwrap();
    let bad = g.with_entry(0, id(1), id(3), None);
    let report = validate_partial_category(&bad);
    assert!(report.has(Law::SourceTarget));
}

#[test]
fn catalog_fixtures_are_valid_with_full_exchange() {
    let s3 = Group::symmetric3();
    assert!(!s3.is_abelian());
    let cats = vec![
        catalog::delooped_group(&s3).unwrap(),
        catalog::codiscrete_two_group(&s3).unwrap(),
        catalog::abelian_two_group(&s3, 2).unwrap(),
        catalog::abelian_two_group(&Group::cyclic(1), 3).unwrap(),
        catalog::cyclic_delooping(4, 3).unwrap(),
    ];
    for cat in &cats {
        assert!(validate_partial_category(cat).is_ok(), "{:?}", validate_partial_category(cat));
        assert!(validate_globular(cat).is_ok());
        assert_eq!(check_exchange(cat), None);
        assert!(check_nc_exchange(cat).is_ok());
    }
}

#[test]
fn delooped_nonabelian_group_of_depth_two_fails_exchange() {
    // Z_m delooped twice is fine, but the same construction over S3 breaks
    // exchange because both compositions are the group product
    let s3 = Group::symmetric3();
    let cat = catalog::from_closures(
        s3.names.clone(),
        2,
        |_, x| x == s3.identity(),
        |_, x, y| Some(s3.mul[x][y]),
    )
    .unwrap();
    assert!(validate_partial_category(&cat).is_ok());
    let w = check_exchange(&cat).expect("exchange must fail");
    // independent recomputation of both sides
    let m = &s3.mul;
    let lhs = m[m[w.x.0][w.y.0]][m[w.w.0][w.z.0]];
    let rhs = m[m[w.x.0][w.w.0]][m[w.y.0][w.z.0]];
    assert_ne!(lhs, rhs);
    assert_eq!(w.lhs, CellId(lhs));
}

#[test]
fn product_of_pair_groupoids_follows_held_fixed_convention() {
    let a = build_pair_groupoid(2).unwrap();
    let b = build_pair_groupoid(3).unwrap();
    let p = build_product(&[a.clone(), b.clone()]).unwrap();
    assert_eq!(p.len(), 36);
    assert!(validate_full_depth(&p).is_ok(), "{:?}", validate_full_depth(&p));
    let ca = |s: &str| a.find_cell(s).unwrap().0;
    let cb = |s: &str| b.find_cell(s).unwrap().0;
    let cell = |x: usize, y: usize| p.from_components(&[x, y]).unwrap();
    // comp_{1} keeps direction 1 and composes direction 2
    let g1 = LevelSet::from_levels(&[1]);
    assert_eq!(
        p.compose(g1, cell(ca("(1,2)"), cb("(1,3)")), cell(ca("(1,2)"), cb("(3,2)"))),
        Some(cell(ca("(1,2)"), cb("(1,2)")))
    );
    assert_eq!(
        p.compose(g1, cell(ca("(1,2)"), cb("(1,3)")), cell(ca("(2,2)"), cb("(3,2)"))),
        None
    );
    // comp over all directions is defined exactly on the diagonal
    let all = LevelSet::all(2);
    for x in p.cells() {
        for y in p.cells() {
            assert_eq!(p.compose(all, x, y).is_some(), x == y);
        }
    }
    // componentwise composition
    assert_eq!(
        p.compose(LevelSet::EMPTY, cell(ca("(1,2)"), cb("(1,3)")), cell(ca("(2,1)"), cb("(3,3)"))),
        Some(cell(ca("(1,1)"), cb("(1,3)")))
    );
}

#[test]
fn product_rejects_higher_factors() {
    let t = build_terminal(2).unwrap();
    assert!(matches!(
        build_product(&[t]),
        Err(CategoryError::NotOneCategory { factor: 0, depth: 2 })
    ));
}

#[test]
fn forced_cast_of_product_fails_globularity() {
    // read the two-direction product as a globular 2-category with
    // ∘_0 = comp_{2} and ∘_1 = comp_{1}
    let a = build_pair_groupoid(2).unwrap();
    let p = build_product(&[a.clone(), a]).unwrap();
    let t0 = p.comp(LevelSet::from_levels(&[2])).clone();
    let t1 = p.comp(LevelSet::from_levels(&[1])).clone();
    let cast = FiniteGlobularCategory::new(p.names().to_vec(), vec![t0, t1]).unwrap();
    assert!(validate_partial_category(&cast).is_ok());
    let report = validate_globular(&cast);
    assert!(report.has(Law::IdentityNesting) || report.has(Law::Globularity));
}

#[test]
fn mutated_product_fails_full_depth() {
    let a = build_pair_groupoid(2).unwrap();
    let p = build_product(&[a.clone(), a]).unwrap();
    let g = LevelSet::EMPTY;
    let (x, y, _) = p.comp(g).defined()[3];
    let bad = p.with_entry(g, x, y, None);
    assert!(!validate_full_depth(&bad).is_ok());
}

#[test]
fn level_set_formatting_and_algebra() {
    let g = LevelSet::from_levels(&[1, 3]);
    assert_eq!(g.to_string(), "{1,3}");
    assert_eq!(g.complement(3), LevelSet::from_levels(&[2]));
    assert!(LevelSet::EMPTY.is_subset(g));
    assert_eq!(LevelSet::all_subsets(2).count(), 4);
    assert_eq!(g.symmetric_difference(LevelSet::from_levels(&[1])), LevelSet::from_levels(&[3]));
}
