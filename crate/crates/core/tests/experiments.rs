use koszul_core::curves::{builtin, DEFAULT_PRIMES, DEFAULT_SEED};
use koszul_core::experiments::{
    consensus_run, generic_gonality, run_suite, suite_entries, syzygy_gonality, Check, CheckReport, ModelSource,
    RunContext, SuiteReport, Verdict, CHECK_NAMES, SUITE_NAMES,
};
use koszul_core::Error;

#[test]
fn check_names_parse() {
    for name in CHECK_NAMES {
        let check: Check = name.parse().unwrap();
        assert_eq!(check.name(), *name);
        assert_eq!(check.to_string(), *name);
    }
    assert!(matches!("green".parse::<Check>(), Err(Error::Parse(_))));
    for suite in SUITE_NAMES {
        assert!(!suite_entries(suite).unwrap().is_empty());
    }
    assert!(suite_entries("nope").is_err());
}

#[test]
fn gonality_helpers() {
    assert_eq!(generic_gonality(0), 1);
    assert_eq!(generic_gonality(3), 3);
    assert_eq!(generic_gonality(4), 3);
    assert_eq!(generic_gonality(5), 4);
    assert_eq!(generic_gonality(7), 5);
    assert_eq!(syzygy_gonality(&[3, 0, 0, 0], 5), 3);
    assert_eq!(syzygy_gonality(&[10, 15, 3, 0], 7), 3);
    assert_eq!(syzygy_gonality(&[3, 2, 1], 5), 1);
}

#[test]
fn trigonal_controls() {
    let ctx = RunContext::new(DEFAULT_SEED);
    let suite = run_suite("controls", &DEFAULT_PRIMES, &ctx).unwrap();
    let verdict = |name: &str| suite.reports.iter().find(|r| r.name == name).unwrap().verdict;
    assert_eq!(verdict("vanishing-boundary"), Verdict::Pass);
    assert_eq!(verdict("main-theorem-odd"), Verdict::Inapplicable);
    assert_eq!(verdict("two-points"), Verdict::Inapplicable);
    assert_eq!(verdict("canonical-green"), Verdict::Fail);
    let green = suite.reports.iter().find(|r| r.name == "canonical-green").unwrap();
    assert_eq!(green.consensus_value("K_{2,1}(C,K_C)"), Some(2));
    assert!(green.suspect_primes.is_empty());
    assert_eq!(suite.failures(), 1);

    let vb = suite.reports.iter().find(|r| r.name == "vanishing-boundary").unwrap();
    assert_eq!(vb.consensus_value("claimed gonality d"), Some(3));
    assert_eq!(vb.consensus_value("K_{3,1}(C,L)"), Some(3));
    assert_eq!(vb.consensus_value("K_{4,1}(C,L)"), Some(0));
}

#[test]
fn reports_round_trip() {
    let ctx = RunContext::new(DEFAULT_SEED);
    let r = consensus_run(&Check::Euler, &ModelSource::Builtin("g3-quartic".into()), &DEFAULT_PRIMES, &ctx);
    assert_eq!(r.verdict, Verdict::Pass);
    let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let suite = SuiteReport {
        suite: "one".into(),
        seed: DEFAULT_SEED,
        reports: vec![r.clone()],
    };
    let back: SuiteReport = serde_json::from_str(&suite.to_json()).unwrap();
    assert_eq!(back, suite);
    assert!(suite.to_text().ends_with("suite one: 1 PASS, 0 FAIL, 0 INAPPLICABLE\n"));
    assert!(r.to_json().contains("\"verdict\": \"PASS\""));
}

#[test]
fn fixed_model_runs_over_its_prime_only() {
    let model = builtin("g3-quartic", DEFAULT_PRIMES[1], DEFAULT_SEED).unwrap();
    let ctx = RunContext::new(DEFAULT_SEED);
    let r = consensus_run(&Check::TwoPoints, &ModelSource::Fixed(model), &DEFAULT_PRIMES, &ctx);
    assert_eq!(r.primes, [DEFAULT_PRIMES[1]]);
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn sequential_and_parallel_agree() {
    let par = RunContext::new(DEFAULT_SEED);
    let seq = RunContext { parallel: false, ..par };
    let check = Check::VanishingBoundary { gonality: None };
    let source = ModelSource::Builtin("g5-sextic".into());
    let a = consensus_run(&check, &source, &DEFAULT_PRIMES, &par).without_timing();
    let b = consensus_run(&check, &source, &DEFAULT_PRIMES, &seq).without_timing();
    assert_eq!(a, b);
}
