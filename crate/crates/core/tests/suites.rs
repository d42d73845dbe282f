//! Every builtin suite must pass on the standard model and on small
//! powermeans. Failures print the offending labels with their violations.

use aaw_core::model::{Model, Ultracharge};
use aaw_core::suite::run_suite;

fn models() -> Vec<Model> {
    vec![
        Model::Standard,
        Model::Powermean(Ultracharge::uniform(2)),
        Model::Powermean(Ultracharge::uniform(3)),
    ]
}

fn run_and_assert(suite: &str, model: &Model) {
    let report = run_suite(suite, model, None, None).unwrap();
    if !report.pass {
        for r in &report.reports {
            if !r.holds() {
                eprintln!(
                    "  FAIL {}: violation {} at {:?}",
                    r.label.as_deref().unwrap_or(&r.condition),
                    r.max_violation,
                    r.witness
                );
            }
        }
    }
    assert!(report.pass, "suite {suite} on {model}");
}

#[test]
fn axioms_all_models() {
    for m in models() {
        run_and_assert("axioms", &m);
    }
}

#[test]
fn order_all_models() {
    for m in models() {
        run_and_assert("order", &m);
    }
}

#[test]
fn lnp_all_models() {
    for m in models() {
        run_and_assert("lnp", &m);
    }
}

#[test]
fn numbertheory_all_models() {
    for m in models() {
        run_and_assert("numbertheory", &m);
    }
}

#[test]
fn collection_all_models() {
    for m in models() {
        run_and_assert("collection", &m);
    }
}

#[test]
fn integral_all_models() {
    for m in models() {
        run_and_assert("integral", &m);
    }
}

#[test]
fn unknown_suite_rejected() {
    assert!(run_suite("nope", &Model::Standard, None, None).is_err());
}

#[test]
fn reports_are_deterministic() {
    let m = Model::Powermean(Ultracharge::uniform(2));
    for suite in ["order", "integral"] {
        let a = serde_json::to_string(&run_suite(suite, &m, None, None).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(suite, &m, None, None).unwrap()).unwrap();
        assert_eq!(a, b, "{suite}");
    }
}

// suites are data: every stored or generated condition prints back to
// something the parser accepts and that means the same thing
#[test]
fn every_suite_item_reparses() {
    for suite in aaw_core::suite::builtin_suites() {
        for item in &suite.items {
            let printed = item.condition.to_string();
            let again = aaw_core::parse_condition(&printed)
                .unwrap_or_else(|e| panic!("{}: {printed}: {e}", item.label));
            assert_eq!(again, item.condition, "{}", item.label);
        }
    }
}

#[test]
fn extension_inner_segment_example() {
    // {x : x ≤ (5,5)} inside the two-coordinate uniform power
    let m = Model::Powermean(Ultracharge::uniform(2));
    let r = aaw_core::suite::extension_check(&m, 5, 5).unwrap();
    assert!(r.downward_closed);
    assert!(r.pass);
}
