use catseries_core::lemmas::all_checks;

#[test]
fn every_lemma_check_passes_at_full_range() {
    let outcomes = all_checks().unwrap();
    assert_eq!(outcomes.len(), 7);
    for o in outcomes {
        assert!(o.passed(), "{}: {:?}", o.name, o.failures);
        assert!(o.checked > 0);
    }
}
