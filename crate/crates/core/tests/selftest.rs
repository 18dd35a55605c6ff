use dgla_deform::selftest::{run, run_case, Profile};

#[test]
fn small_profile_passes_and_is_deterministic() {
    let first = run(0, Profile::Small);
    for p in &first.properties {
        assert!(p.passed, "{} failed: {:?}", p.property, p.failure);
    }
    let again = run(0, Profile::Small);
    assert_eq!(
        serde_json::to_string(&first).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
}

#[test]
fn cases_reproduce() {
    assert_eq!(
        run_case("gauge-group-law", 7).unwrap(),
        run_case("gauge-group-law", 7).unwrap()
    );
    assert!(run_case("no-such-property", 0).is_err());
}
