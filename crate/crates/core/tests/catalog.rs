//! Catalog runs: golden routes, determinism, and agreement between reduced
//! and direct computations.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use isoformal::cartanmodel::{Route, Witness};
use isoformal::catalog::{run_catalog, Bounds, Catalog, Reduction, Report, SourceList};

fn report() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| run_catalog(&Catalog::builtin(), &Bounds::default()).unwrap())
}

/// Some spaces occur on two lists (for example SU(4)/U(2)), so routes are
/// keyed by list and space.
fn routes() -> BTreeMap<(SourceList, &'static str), Route> {
    report()
        .instances
        .iter()
        .filter_map(|i| Some(((i.list, i.space.as_str()), i.verdict.as_ref()?.route?)))
        .collect()
}

const GOLDEN: &[(SourceList, &str, Route)] = &[
    (
        SourceList::EqualRank,
        "SU(3)/S(U(1)U(1)U(1))",
        Route::EqualRank,
    ),
    (
        SourceList::EqualRank,
        "SU(5)/S(U(1)U(2)U(2))",
        Route::EqualRank,
    ),
    (
        SourceList::EqualRank,
        "SO(7)/SO(1)SO(2)SO(4)",
        Route::EqualRank,
    ),
    (
        SourceList::EqualRank,
        "Sp(3)/Sp(1)Sp(1)Sp(1)",
        Route::EqualRank,
    ),
    (SourceList::EqualRank, "E6/U(5)U(1)", Route::EqualRank),
    (SourceList::EqualRank, "E8/Spin(8)Spin(8)", Route::EqualRank),
    (SourceList::EqualRank, "F4/Spin(8)", Route::EqualRank),
    (SourceList::EqualRank, "G2/T^2", Route::EqualRank),
    (
        SourceList::SharedTorus,
        "Sp(3)/U(1)U(2)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::SharedTorus,
        "SU(6)/Sp(1)Sp(2)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::SharedTorus,
        "E6/U(4)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::SharedTorus,
        "E6/Sp(3)Sp(1)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::Remaining,
        "E6/Spin(9)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::Remaining,
        "E7/SO(8)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::Remaining,
        "E7/Sp(4)",
        Route::SharedTorusTransfer,
    ),
    (SourceList::Remaining, "E7/F4", Route::DegreeReasoning),
    (SourceList::Symmetric, "E6/F4", Route::DegreeReasoning),
    (SourceList::Symmetric, "E6/Sp(4)", Route::DegreeReasoning),
    (
        SourceList::Symmetric,
        "SU(3)/SO(3)",
        Route::VanishingRedundantImages,
    ),
    (
        SourceList::Symmetric,
        "SU(6)/Sp(3)",
        Route::VanishingRedundantImages,
    ),
    (
        SourceList::Remaining,
        "SU(4)/U(2)",
        Route::VanishingRedundantImages,
    ),
    (SourceList::Remaining, "SO(6)/SO(3)", Route::FreeCohomology),
    (
        SourceList::Remaining,
        "SO(8)/SO(4)",
        Route::NestedMembership,
    ),
    (SourceList::Remaining, "SO(8)/Sp(2)", Route::FreeCohomology),
    (SourceList::Remaining, "Sp(2)/Sp(1)", Route::FreeCohomology),
    (SourceList::Remaining, "Sp(4)/Sp(2)", Route::FreeCohomology),
    (
        SourceList::Remaining,
        "Sp(3)/SO(3)",
        Route::VanishingRedundantImages,
    ),
    (
        SourceList::Remaining,
        "SU(5)/SO(2)SO(3)",
        Route::SharedTorusTransfer,
    ),
    (
        SourceList::Remaining,
        "SU(6)/SO(3)SO(3)",
        Route::VanishingRedundantImages,
    ),
    (
        SourceList::Structural,
        "SU(3)xSU(3)/SO(3)",
        Route::ProductReduction,
    ),
    (
        SourceList::Structural,
        "Sp(2)xSp(2)/Sp(2)",
        Route::ProductReduction,
    ),
    (
        SourceList::Structural,
        "SU(2)xSU(2)xSU(2)xSU(2)/SU(2)",
        Route::ProductReduction,
    ),
    (SourceList::Structural, "T^3/T^1", Route::TorusQuotient),
];

#[test]
fn golden_route_table() {
    let routes = routes();
    for (list, space, route) in GOLDEN {
        assert_eq!(
            routes.get(&(*list, *space)),
            Some(route),
            "{space} on {list:?}"
        );
    }
    assert_eq!(
        routes.get(&(SourceList::SharedTorus, "SU(4)/U(2)")),
        Some(&Route::SharedTorusTransfer)
    );
}

#[test]
fn every_instance_passes() {
    let r = report();
    assert!(r.all_passed(), "{:?}", r.failures);
    let c = &r.counts;
    assert!(c.instances >= 60);
    assert_eq!(c.passed, c.instances);
    assert_eq!(
        (
            c.inconclusive,
            c.errors,
            c.route_mismatches,
            c.recheck_failures
        ),
        (0, 0, 0, 0)
    );
    assert!(r.scope.contains("at most 8"));
    for list in [
        SourceList::EqualRank,
        SourceList::SharedTorus,
        SourceList::Remaining,
        SourceList::Symmetric,
        SourceList::Structural,
    ] {
        let n = r.instances.iter().filter(|i| i.list == list).count();
        assert!(n >= 3, "{list:?} has {n} instances");
    }
    assert!(r.instances.iter().all(|i| i.group_rank <= 8));
}

#[test]
fn runs_are_deterministic() {
    let again = run_catalog(&Catalog::builtin(), &Bounds::default()).unwrap();
    assert_eq!(again.without_timings(), report().without_timings());
    assert_eq!(
        again.without_timings().to_json(),
        report().without_timings().to_json()
    );
}

#[test]
fn structured_report_round_trips() {
    let text = report().to_json();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(&back, report());
    assert_eq!(back.to_json(), text);
    assert!(Report::from_json("{\"scope\": 1}").is_err());
}

#[test]
fn transfers_agree_with_direct_models() {
    let r = report();
    let mut compared = 0;
    for i in r
        .instances
        .iter()
        .filter(|i| i.reduction == Reduction::SharedTorus)
    {
        let v = i.verdict.as_ref().unwrap();
        match &v.witness {
            Some(Witness::Transfer(t)) => {
                assert!(t.weyl.is_some() || t.declared_fact.is_some(), "{}", i.space)
            }
            other => panic!("{}: transfer witness expected, got {other:?}", i.space),
        }
        if let Some(agrees) = i.direct_agrees {
            assert!(agrees, "{}", i.space);
            compared += 1;
        }
    }
    assert!(
        compared >= 100,
        "only {compared} transfers had a direct model"
    );
}

#[test]
fn equal_rank_poincare_counts_weyl_cosets() {
    let r = report();
    let mut checked = 0;
    for i in r
        .instances
        .iter()
        .filter(|i| i.reduction == Reduction::EqualRank)
    {
        let p = i.verdict.as_ref().unwrap().poincare.as_ref().unwrap();
        assert!(
            p.iter().skip(1).step_by(2).all(|&c| c == 0),
            "{}: odd cohomology",
            i.space
        );
        checked += 1;
    }
    assert!(checked >= 200);
}

#[test]
fn smaller_bounds_give_a_prefix_of_families() {
    let c = Catalog::builtin();
    let small = c
        .instances(&Bounds {
            max_rank: 3,
            ..Bounds::default()
        })
        .unwrap();
    let big: Vec<String> = c
        .instances(&Bounds::default())
        .unwrap()
        .into_iter()
        .map(|i| i.space)
        .collect();
    assert!(!small.is_empty());
    assert!(small
        .iter()
        .all(|i| i.group_rank <= 3 && big.contains(&i.space)));
}
