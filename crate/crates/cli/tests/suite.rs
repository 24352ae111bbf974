use catseries::config::{MRange, SuiteConfig};
use catseries::report::{SuiteReport, VerificationReport};
use catseries::suite::{run_suite, verify};
use catseries_core::family::FamilyId;
use catseries_core::Error;
use proptest::prelude::*;

fn small(parallelism: usize) -> SuiteConfig {
    let mut c = SuiteConfig { parallelism, ..SuiteConfig::default() };
    c.ranges.clear();
    c.ranges.insert("F8".into(), MRange { lo: 0, hi: 2 });
    c.ranges.insert("F1a".into(), MRange { lo: 0, hi: 1 });
    c.ranges.insert("F11".into(), MRange { lo: 0, hi: 1 });
    c
}

/// Everything except the timing.
fn numeric(r: &VerificationReport) -> VerificationReport {
    VerificationReport { elapsed_ms: 0, ..r.clone() }
}

#[test]
fn headline_values() {
    let c = SuiteConfig::default();
    let r = verify(FamilyId::F1a, 0, &c).unwrap();
    assert!(r.pass);
    assert!(r.lhs.value.starts_with("1.01837"), "{}", r.lhs.value);
    let r = verify(FamilyId::F6, 0, &c).unwrap();
    assert!(r.pass);
    assert!(r.rhs.value.starts_with("3.0308"), "{}", r.rhs.value);
    assert_eq!(r.rhs_symbolic.pretty, "16 - 128*pi^-2");
}

#[test]
fn parameter_outside_the_family_is_a_usage_error() {
    assert!(matches!(verify(FamilyId::F10, 0, &SuiteConfig::default()), Err(Error::Usage(_))));
}

#[test]
fn tolerance_below_the_precision_floor_is_rejected_up_front() {
    let mut c = SuiteConfig { precision_bits: 128, ..small(1) };
    c.set_tolerance(1e-60);
    assert!(matches!(run_suite(&c, None, false), Err(Error::Usage(_))));
}

#[test]
fn reports_round_trip_through_json() {
    let report = run_suite(&small(2), None, true).unwrap();
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.summary.checks_fail, 0);
    let back = SuiteReport::from_json(&report.to_json()).unwrap();
    assert_eq!(back, report);
    for r in &back.reports {
        let cf = r.rhs_symbolic.closed_form().unwrap();
        assert_eq!(cf.to_string(), r.rhs_symbolic.pretty);
    }
}

#[test]
fn parallelism_does_not_change_results() {
    let a = run_suite(&small(1), None, false).unwrap();
    let b = run_suite(&small(4), None, false).unwrap();
    let key = |r: &SuiteReport| r.reports.iter().map(numeric).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    let order: Vec<(String, i64)> = a.reports.iter().map(|r| (r.family.clone(), r.m)).collect();
    assert_eq!(order[0], ("F1a".to_string(), 0));
    assert_eq!(order.last().unwrap(), &("F11".to_string(), 1));
}

#[test]
fn family_filter() {
    let r = run_suite(&small(2), Some(FamilyId::F8), false).unwrap();
    assert!(r.reports.iter().all(|r| r.family == "F8"));
    assert_eq!(r.reports.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_text_round_trip(prec in 96u32..1024, e in 1i32..20, lo in 0i64..4, len in 0i64..4, par in 1usize..9) {
        let text = format!(
            "precision_bits = {prec}\ntolerance_fast = 1e-{e}\nrange.F2 = {lo}..{}\nparallelism = {par}\n",
            lo + len
        );
        let mut c = SuiteConfig::default();
        c.apply_text(&text).unwrap();
        prop_assert_eq!(c.precision_bits, prec);
        prop_assert_eq!(c.tolerance_fast, format!("1e-{e}").parse::<f64>().unwrap());
        prop_assert_eq!(c.range(FamilyId::F2), Some(MRange { lo, hi: lo + len }));
        prop_assert_eq!(c.parallelism, par);
        let json = serde_json::to_string(&c).unwrap();
        let back: SuiteConfig = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn range_text_round_trip(lo in -5i64..50, len in 0i64..50) {
        let r = MRange { lo, hi: lo + len };
        prop_assert_eq!(r.to_string().parse::<MRange>().unwrap(), r);
    }
}
